//! Gram grids, interval classification by zero count, and the height to
//! matrix-size index map.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, precondition, Error, Result};
use crate::special::gram_point;
use crate::zeros::ZeroOrdinateList;

/// Zeros closer than this to a Gram point are reported as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Solved Gram points g_L, ..., g_M.
#[derive(Clone, Debug, PartialEq)]
pub struct GramGrid {
    first: i64,
    points: Vec<f64>,
}

impl GramGrid {
    pub fn new(first: i64, last: i64) -> Result<Self> {
        if first < 0 || last <= first {
            return Err(domain(format!(
                "Gram grid needs 0 <= L < M, got L = {first}, M = {last}"
            )));
        }
        let points = (first..=last)
            .into_par_iter()
            .map(gram_point)
            .collect::<Result<Vec<_>>>()?;
        Ok(GramGrid { first, points })
    }

    pub fn first_index(&self) -> i64 {
        self.first
    }

    pub fn last_index(&self) -> i64 {
        self.first + self.points.len() as i64 - 1
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn point(&self, m: i64) -> Option<f64> {
        let i = m.checked_sub(self.first)?;
        self.points.get(usize::try_from(i).ok()?).copied()
    }

    pub fn intervals(&self) -> usize {
        self.points.len() - 1
    }

    /// Subgrid g_L..g_M of an existing grid.
    pub fn slice(&self, first: i64, last: i64) -> Result<GramGrid> {
        if first < self.first || last > self.last_index() || last <= first {
            return Err(precondition(format!(
                "grid {}..{} does not contain {first}..{last}",
                self.first,
                self.last_index()
            )));
        }
        let a = (first - self.first) as usize;
        let b = (last - self.first) as usize;
        Ok(GramGrid {
            first,
            points: self.points[a..=b].to_vec(),
        })
    }

    /// Cache format: `# gram L..M` header, then one point per line.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# gram {}..{}", self.first, self.last_index())?;
        // shortest representation that reads back to the same f64
        for p in &self.points {
            writeln!(w, "{p}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut range = None;
        let mut points = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix('#') {
                if let Some(r) = rest.trim().strip_prefix("gram ") {
                    let (a, b) = r.split_once("..").ok_or_else(|| Error::Parse {
                        line: i + 1,
                        msg: format!("bad gram header {s:?}"),
                    })?;
                    let parse = |x: &str| {
                        x.trim().parse::<i64>().map_err(|e| Error::Parse {
                            line: i + 1,
                            msg: e.to_string(),
                        })
                    };
                    range = Some((parse(a)?, parse(b)?));
                }
                continue;
            }
            let v: f64 = s.parse().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("{s:?}: {e}"),
            })?;
            if let Some(&p) = points.last() {
                if !(v > p) {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "Gram points not increasing".into(),
                    });
                }
            }
            points.push(v);
        }
        let (first, last) = range.ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing '# gram L..M' header".into(),
        })?;
        if points.len() as i64 != last - first + 1 || last <= first {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "header {first}..{last} does not match {} points",
                    points.len()
                ),
            });
        }
        Ok(GramGrid { first, points })
    }

    pub fn read_path(path: &Path) -> Result<Self> {
        Self::read(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn write_path(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

/// Zero counts for each Gram interval [g_m, g_{m+1}) of a range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramHistogram {
    first: i64,
    last: i64,
    per_interval: Vec<u32>,
    counts: BTreeMap<u32, u64>,
}

impl GramHistogram {
    fn from_per_interval(first: i64, per_interval: Vec<u32>) -> Self {
        let mut counts = BTreeMap::new();
        for &c in &per_interval {
            *counts.entry(c).or_insert(0) += 1;
        }
        GramHistogram {
            first,
            last: first + per_interval.len() as i64,
            per_interval,
            counts,
        }
    }

    pub fn range(&self) -> (i64, i64) {
        (self.first, self.last)
    }

    pub fn intervals(&self) -> u64 {
        self.per_interval.len() as u64
    }

    /// Number of intervals holding exactly k zeros.
    pub fn count(&self, k: u32) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    pub fn proportion(&self, k: u32) -> f64 {
        self.count(k) as f64 / self.intervals() as f64
    }

    /// Zeros in interval m.
    pub fn zeros_in(&self, m: i64) -> Option<u32> {
        let i = usize::try_from(m.checked_sub(self.first)?).ok()?;
        self.per_interval.get(i).copied()
    }

    pub fn total_zeros(&self) -> u64 {
        self.per_interval.iter().map(|&c| c as u64).sum()
    }

    /// Histogram restricted to [g_first, g_last).
    pub fn sub_range(&self, first: i64, last: i64) -> Result<GramHistogram> {
        if first < self.first || last > self.last || last <= first {
            return Err(precondition(format!(
                "histogram covers {}..{}, requested {first}..{last}",
                self.first, self.last
            )));
        }
        let a = (first - self.first) as usize;
        let b = (last - self.first) as usize;
        Ok(Self::from_per_interval(first, self.per_interval[a..b].to_vec()))
    }
}

/// Counts zeros in each [g_m, g_{m+1}) of the grid. A zero within
/// [`TIE_TOLERANCE`] of a Gram point goes to the interval starting there.
pub fn classify_gram_intervals(zeros: &ZeroOrdinateList, grid: &GramGrid) -> Result<GramHistogram> {
    let pts = grid.points();
    let (lo, hi) = (pts[0], pts[pts.len() - 1]);
    if !zeros.covers(lo, hi) {
        let (a, b) = zeros.coverage();
        return Err(Error::Coverage(format!(
            "zero list covers [{a}, {b}] but Gram range g_{}..g_{} needs [{lo}, {hi}]",
            grid.first_index(),
            grid.last_index()
        )));
    }
    let mut per = vec![0u32; grid.intervals()];
    let ords = zeros.ordinates();
    let start = ords.partition_point(|&t| t < lo - TIE_TOLERANCE);
    for &t in &ords[start..] {
        if t >= hi + TIE_TOLERANCE {
            break;
        }
        // index of the first Gram point strictly above t
        let mut j = pts.partition_point(|&g| g <= t);
        if j < pts.len() && pts[j] - t < TIE_TOLERANCE {
            warn!("zero {t} lies within {TIE_TOLERANCE:e} below Gram point {}", pts[j]);
            j += 1;
        } else if j > 0 && t - pts[j - 1] < TIE_TOLERANCE {
            warn!("zero {t} lies within {TIE_TOLERANCE:e} above Gram point {}", pts[j - 1]);
        }
        if j == 0 || j >= pts.len() {
            continue;
        }
        per[j - 1] += 1;
    }
    Ok(GramHistogram::from_per_interval(grid.first_index(), per))
}

/// Table-1 style counts M·G_{0,M}(k) for k = 0..=4.
pub fn gram_stats_table1(zeros: &ZeroOrdinateList, m: i64) -> Result<[u64; 5]> {
    let grid = GramGrid::new(0, m)?;
    let h = classify_gram_intervals(zeros, &grid)?;
    Ok(table1_row(&h))
}

pub fn table1_row(h: &GramHistogram) -> [u64; 5] {
    [h.count(0), h.count(1), h.count(2), h.count(3), h.count(4)]
}

/// Matrix size N paired with the Gram index M_N = round(e^N (N - 1)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeightIndexMap {
    pub n: u32,
    pub gram_index: u64,
}

pub fn matrix_index(n: u32) -> Result<HeightIndexMap> {
    if !(2..=30).contains(&n) {
        return Err(domain(format!("matrix size must be in 2..=30, got {n}")));
    }
    let v = (n as f64).exp() * (n as f64 - 1.0);
    Ok(HeightIndexMap {
        n,
        gram_index: v.round() as u64,
    })
}

/// Proportions G_{M_N, M_{N+1}}(k) for k = 0, 1, 2.
pub fn gram_stats_table3(zeros: &ZeroOrdinateList, n: u32) -> Result<[f64; 3]> {
    let a = matrix_index(n)?.gram_index as i64;
    let b = matrix_index(n + 1)?.gram_index as i64;
    let grid = GramGrid::new(a, b)?;
    let h = classify_gram_intervals(zeros, &grid)?;
    Ok(table3_row(&h))
}

pub fn table3_row(h: &GramHistogram) -> [f64; 3] {
    [h.proportion(0), h.proportion(1), h.proportion(2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hardy_z;
    use crate::zeros::find_zeros;

    fn zeros_to(m: i64) -> ZeroOrdinateList {
        find_zeros(10.0, gram_point(m).unwrap() + 1.0).unwrap()
    }

    #[test]
    fn first_fifteen_intervals_hold_one_zero() {
        let z = zeros_to(20);
        let h = classify_gram_intervals(&z, &GramGrid::new(0, 15).unwrap()).unwrap();
        assert_eq!(h.count(1), 15);
        assert_eq!(h.counts().len(), 1);
        assert_eq!(find_zeros(10.0, 66.0).unwrap().len(), 15);
        assert!(find_zeros(10.0, 14.0).unwrap().is_empty());
    }

    #[test]
    fn first_gram_failure_at_125() {
        let z = zeros_to(140);
        let h = classify_gram_intervals(&z, &GramGrid::new(0, 130).unwrap()).unwrap();
        assert_eq!(h.zeros_in(125), Some(0));
        assert_eq!(h.zeros_in(126), Some(2));
        assert!((0..125).all(|m| h.zeros_in(m) == Some(1)));
        // 138 zeros below g_137 counting γ₁ in [g₋₁, g₀)
        let n = z.ordinates().iter().filter(|&&t| t < gram_point(137).unwrap()).count();
        assert_eq!(n, 138);
    }

    #[test]
    fn histogram_invariants() {
        let z = zeros_to(1100);
        let grid = GramGrid::new(0, 1000).unwrap();
        let h = classify_gram_intervals(&z, &grid).unwrap();
        let total: u64 = h.counts().values().sum();
        assert_eq!(total, 1000);
        let weighted: u64 = h.counts().iter().map(|(k, c)| *k as u64 * c).sum();
        let (a, b) = (grid.points()[0], *grid.points().last().unwrap());
        let inside = z.ordinates().iter().filter(|&&t| t >= a && t < b).count() as u64;
        assert_eq!(weighted, inside);
        let p: f64 = h.counts().keys().map(|&k| h.proportion(k)).sum();
        assert!((p - 1.0).abs() < 1e-12);
        // parity cross-check with hardy_z: Z keeps its sign across an
        // interval exactly when the interval holds an even number of zeros
        for m in 0..1000i64 {
            let k = h.zeros_in(m).unwrap();
            let s = |j: i64| hardy_z(grid.point(j).unwrap()).unwrap() > 0.0;
            assert_eq!(s(m) == s(m + 1), k.is_multiple_of(2), "interval {m}");
        }
    }

    #[test]
    fn table1_m100() {
        let z = zeros_to(110);
        assert_eq!(gram_stats_table1(&z, 100).unwrap(), [0, 100, 0, 0, 0]);
    }

    #[test]
    fn empty_list_gives_all_zero_counts() {
        let z = ZeroOrdinateList::new(vec![], (10.0, 1000.0)).unwrap();
        let h = classify_gram_intervals(&z, &GramGrid::new(0, 40).unwrap()).unwrap();
        assert_eq!(h.count(0), 40);
    }

    #[test]
    fn coverage_gap_is_reported() {
        let z = find_zeros(10.0, 60.0).unwrap();
        let err = classify_gram_intervals(&z, &GramGrid::new(0, 100).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Coverage(_)));
    }

    #[test]
    fn ties_go_right() {
        let g = GramGrid::new(0, 3).unwrap();
        let p = g.points().to_vec();
        let z = ZeroOrdinateList::new(vec![p[1] - 1e-10, p[2] + 1e-10], (10.0, 100.0)).unwrap();
        let h = classify_gram_intervals(&z, &g).unwrap();
        assert_eq!(h.zeros_in(0), Some(0));
        assert_eq!(h.zeros_in(1), Some(1));
        assert_eq!(h.zeros_in(2), Some(1));
    }

    #[test]
    fn matrix_index_values() {
        assert_eq!(matrix_index(2).unwrap().gram_index, 7);
        assert_eq!(matrix_index(4).unwrap().gram_index, 164);
        assert_eq!(matrix_index(10).unwrap().gram_index, 198_238);
        for n in 2..30 {
            assert!(matrix_index(n + 1).unwrap().gram_index > matrix_index(n).unwrap().gram_index);
        }
        assert!(matrix_index(1).is_err());
        assert!(matrix_index(31).is_err());
    }

    #[test]
    fn table3_n2() {
        let z = zeros_to(45);
        let r = gram_stats_table3(&z, 2).unwrap();
        assert_eq!(r, [0.0, 1.0, 0.0]);
        assert_eq!(matrix_index(3).unwrap().gram_index - 7, 33);
    }

    #[test]
    fn gram_cache_round_trip() {
        let g = GramGrid::new(5, 60).unwrap();
        let mut buf = Vec::new();
        g.write(&mut buf).unwrap();
        assert!(buf.starts_with(b"# gram 5..60\n"));
        let back = GramGrid::read(&buf[..]).unwrap();
        assert_eq!(back.first_index(), 5);
        assert_eq!(back.last_index(), 60);
        for (a, b) in back.points().iter().zip(g.points()) {
            assert!((a - b).abs() < 1e-11);
        }
        assert!(GramGrid::read(&b"1.0\n2.0\n"[..]).is_err());
    }
}
