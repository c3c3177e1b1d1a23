//! Zeta zero ordinates: finding them on the critical line, reading and
//! writing zero-list files.

use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::special::{
    em_tail, em_terms, gram_point, hardy_z, theta, zeta_tables, ThetaExpansionConfig, MAX_HEIGHT,
};

/// Sorted, positive zero ordinates together with the height window in which
/// the list is known to be complete.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroOrdinateList {
    ordinates: Vec<f64>,
    coverage: (f64, f64),
}

impl ZeroOrdinateList {
    pub fn new(ordinates: Vec<f64>, coverage: (f64, f64)) -> Result<Self> {
        if !(coverage.0 <= coverage.1) {
            return Err(domain("coverage window is empty"));
        }
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::Parse {
                    line: i + 2,
                    msg: format!("ordinates not increasing: {} then {}", w[0], w[1]),
                });
            }
        }
        if let Some(&first) = ordinates.first() {
            if !(first > 0.0) {
                return Err(domain("ordinates must be positive"));
            }
        }
        Ok(ZeroOrdinateList {
            ordinates,
            coverage,
        })
    }

    /// A list whose coverage is taken to be [first, last].
    pub fn from_ordinates(ordinates: Vec<f64>) -> Result<Self> {
        let cov = match (ordinates.first(), ordinates.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0.0, 0.0),
        };
        Self::new(ordinates, cov)
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn coverage(&self) -> (f64, f64) {
        self.coverage
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.coverage.0 <= lo && hi <= self.coverage.1
    }

    /// Union of two lists whose windows overlap or touch. Ordinates closer
    /// than 1e-6 are taken to be the same zero; the value from `self` is kept.
    pub fn merge(&self, other: &ZeroOrdinateList) -> Result<Self> {
        let (a, b) = (self.coverage, other.coverage);
        if other.is_empty() && b.0 == b.1 {
            return Ok(self.clone());
        }
        if self.is_empty() && a.0 == a.1 {
            return Ok(other.clone());
        }
        if b.0 > a.1 + 1e-9 || a.0 > b.1 + 1e-9 {
            return Err(Error::Coverage(format!(
                "windows [{}, {}] and [{}, {}] leave a gap",
                a.0, a.1, b.0, b.1
            )));
        }
        let mut merged: Vec<f64> = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.ordinates, &other.ordinates);
        while i < x.len() || j < y.len() {
            let take_x = j == y.len() || (i < x.len() && x[i] <= y[j] + 1e-6);
            let v = if take_x { x[i] } else { y[j] };
            if take_x {
                if j < y.len() && (y[j] - x[i]).abs() < 1e-6 {
                    j += 1;
                }
                i += 1;
            } else {
                j += 1;
            }
            merged.push(v);
        }
        Self::new(merged, (a.0.min(b.0), a.1.max(b.1)))
    }

    /// Zero-list text format: one ordinate per line, '#' comment lines.
    /// A `# coverage <lo> <hi>` comment restores the completeness window.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut ords = Vec::new();
        let mut coverage = None;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix('#') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() == 3 && parts[0] == "coverage" {
                    let lo = parse_f64(parts[1], i + 1)?;
                    let hi = parse_f64(parts[2], i + 1)?;
                    coverage = Some((lo, hi));
                }
                continue;
            }
            let v = parse_f64(s, i + 1)?;
            if !(v > 0.0) {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("ordinate {v} is not positive"),
                });
            }
            if let Some(&prev) = ords.last() {
                if !(v > prev) {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("ordinate {v} does not exceed previous {prev}"),
                    });
                }
            }
            ords.push(v);
        }
        match coverage {
            Some(c) => Self::new(ords, c),
            None => Self::from_ordinates(ords),
        }
    }

    pub fn read_path(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read(std::io::BufReader::new(f))
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# coverage {} {}", self.coverage.0, self.coverage.1)?;
        for t in &self.ordinates {
            writeln!(w, "{t:.12}")?;
        }
        Ok(())
    }

    pub fn write_path(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::Parse {
        line,
        msg: format!("{s:?}: {e}"),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroFinderConfig {
    /// Sample points per Gram interval in the first pass.
    pub substeps: usize,
    /// Extra passes at ten times finer spacing for blocks that miss zeros.
    pub max_rescans: usize,
    /// Minimum number of Gram intervals in a verification block.
    pub min_block: usize,
    /// Bracket width at which root refinement stops.
    pub tolerance: f64,
}

impl Default for ZeroFinderConfig {
    fn default() -> Self {
        ZeroFinderConfig {
            substeps: 20,
            max_rescans: 3,
            min_block: 50,
            tolerance: 1e-9,
        }
    }
}

/// Z(t) with plain f64 phases, for scanning and refinement.
fn hardy_z_fast(t: f64) -> f64 {
    let tables = zeta_tables();
    let k = em_terms(t);
    let mut re = 0.0;
    let mut im = 0.0;
    for n in 1..k {
        let (s, c) = (t * tables.ln_f64[n]).sin_cos();
        re += tables.inv_sqrt[n] * c;
        im -= tables.inv_sqrt[n] * s;
    }
    let kps = Complex64::from_polar(tables.inv_sqrt[k], -(t * tables.ln_f64[k]));
    let z = Complex64::new(re, im) + em_tail(t, k, kps);
    let th = theta_fast(t);
    th.cos() * z.re - th.sin() * z.im
}

fn theta_fast(t: f64) -> f64 {
    theta(t, ThetaExpansionConfig { order: 10 }).expect("t > 0")
}

/// Evaluates Z on an equally spaced grid by rotating the main-sum terms.
struct Scanner {
    re: Vec<f64>,
    im: Vec<f64>,
    rre: Vec<f64>,
    rim: Vec<f64>,
}

impl Scanner {
    fn new() -> Self {
        Scanner {
            re: Vec::new(),
            im: Vec::new(),
            rre: Vec::new(),
            rim: Vec::new(),
        }
    }

    /// Z(a + i h) for i = 0..=steps.
    fn sample(&mut self, a: f64, h: f64, steps: usize, out: &mut Vec<f64>) {
        let tables = zeta_tables();
        out.clear();
        let k = em_terms(a + h * steps as f64);
        let m = k - 1;
        self.re.resize(m, 0.0);
        self.im.resize(m, 0.0);
        self.rre.resize(m, 0.0);
        self.rim.resize(m, 0.0);
        // restart from exact phases every few steps to bound drift
        const RESTART: usize = 64;
        for i in 0..=steps {
            let t = a + h * i as f64;
            if i % RESTART == 0 {
                for n in 1..k {
                    let l = tables.ln_f64[n];
                    let (s, c) = (t * l).sin_cos();
                    self.re[n - 1] = tables.inv_sqrt[n] * c;
                    self.im[n - 1] = -tables.inv_sqrt[n] * s;
                    if i == 0 {
                        let (s, c) = (h * l).sin_cos();
                        self.rre[n - 1] = c;
                        self.rim[n - 1] = -s;
                    }
                }
            }
            let mut sr = 0.0;
            let mut si = 0.0;
            for j in 0..m {
                let (x, y) = (self.re[j], self.im[j]);
                sr += x;
                si += y;
                let (c, s) = (self.rre[j], self.rim[j]);
                self.re[j] = x * c - y * s;
                self.im[j] = x * s + y * c;
            }
            let kps = Complex64::from_polar(tables.inv_sqrt[k], -(t * tables.ln_f64[k]));
            let z = Complex64::new(sr, si) + em_tail(t, k, kps);
            let th = theta_fast(t);
            out.push(th.cos() * z.re - th.sin() * z.im);
        }
    }
}

/// A sign change between two scan samples, with up to two neighbours on
/// each side for the interpolated starting guess.
#[derive(Clone, Debug)]
struct Bracket {
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    guess: f64,
}

/// Sign-change brackets found in one Gram interval.
#[derive(Clone, Debug, Default)]
struct IntervalScan {
    z_start: f64,
    brackets: Vec<Bracket>,
}

/// Root in (ts[1], ts[2]) of the cubic through four samples, falling back
/// to the secant point when the cubic misbehaves.
fn interpolated_root(ts: &[f64], zs: &[f64], a: f64, b: f64, fa: f64, fb: f64) -> f64 {
    let secant = (a * fb - b * fa) / (fb - fa);
    if ts.len() < 3 {
        return secant;
    }
    let p = |x: f64| -> (f64, f64) {
        // Lagrange form with derivative
        let mut v = 0.0;
        let mut d = 0.0;
        for i in 0..ts.len() {
            let mut li = 1.0;
            let mut dli = 0.0;
            for j in 0..ts.len() {
                if i == j {
                    continue;
                }
                let den = ts[i] - ts[j];
                dli = dli * (x - ts[j]) / den + li / den;
                li *= (x - ts[j]) / den;
            }
            v += zs[i] * li;
            d += zs[i] * dli;
        }
        (v, d)
    };
    let mut x = secant;
    for _ in 0..20 {
        let (v, d) = p(x);
        if d == 0.0 {
            return secant;
        }
        let step = v / d;
        x -= step;
        if !(x > a && x < b) {
            return secant;
        }
        if step.abs() < 1e-15 * x.abs() {
            break;
        }
    }
    x
}

fn scan_interval(sc: &mut Scanner, a: f64, b: f64, steps: usize, buf: &mut Vec<f64>) -> IntervalScan {
    let h = (b - a) / steps as f64;
    sc.sample(a, h, steps, buf);
    let node = |i: usize| if i == steps { b } else { a + h * i as f64 };
    let mut brackets = Vec::new();
    for i in 0..steps {
        let (za, zb) = (buf[i], buf[i + 1]);
        if (za >= 0.0) != (zb >= 0.0) {
            let (ta, tb) = (node(i), node(i + 1));
            let lo = i.saturating_sub(1);
            let hi = (i + 2).min(steps);
            let ts: Vec<f64> = (lo..=hi).map(node).collect();
            let guess = interpolated_root(&ts, &buf[lo..=hi], ta, tb, za, zb);
            brackets.push(Bracket {
                a: ta,
                b: tb,
                fa: za,
                fb: zb,
                guess,
            });
        }
    }
    IntervalScan {
        z_start: buf[0],
        brackets,
    }
}

/// Secant iteration from the interpolated guess; falls back to
/// Illinois-modified regula falsi on the bracket if it strays.
fn refine(br: &Bracket, tol: f64) -> f64 {
    let (mut x0, mut x1) = (br.guess, br.guess + 1e-4 * (br.b - br.a));
    let (mut f0, mut f1) = (hardy_z_fast(x0), hardy_z_fast(x1));
    for _ in 0..8 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 > br.a && x2 < br.b) {
            break;
        }
        if (x2 - x1).abs() <= 0.1 * tol {
            return x2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = hardy_z_fast(x1);
    }
    illinois(br, tol)
}

fn illinois(br: &Bracket, tol: f64) -> f64 {
    let Bracket {
        mut a,
        mut b,
        mut fa,
        mut fb,
        ..
    } = *br;
    let mut side = 0i32;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = hardy_z_fast(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Gram index m with g_m <= t (largest such m, m >= -1).
pub fn gram_index_below(t: f64) -> Result<i64> {
    let th = theta(t, ThetaExpansionConfig { order: 10 })?;
    let mut m = (th / PI).floor() as i64;
    m = m.max(-1);
    while m > -1 && gram_point(m)? > t {
        m -= 1;
    }
    while gram_point(m + 1)? <= t {
        m += 1;
    }
    Ok(m)
}

fn is_good(m: i64, z: f64) -> bool {
    let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * z > 0.0
}

/// Finds every zero of ζ(1/2 + it) with t_lo < t < t_hi, each to within
/// 1e-8. Counts are checked block by block between good Gram points.
pub fn find_zeros(t_lo: f64, t_hi: f64) -> Result<ZeroOrdinateList> {
    find_zeros_with(t_lo, t_hi, ZeroFinderConfig::default())
}

pub fn find_zeros_with(t_lo: f64, t_hi: f64, cfg: ZeroFinderConfig) -> Result<ZeroOrdinateList> {
    if !(t_lo >= 10.0 && t_lo < t_hi) {
        return Err(domain(format!(
            "zero search window must satisfy 10 <= lo < hi, got ({t_lo}, {t_hi})"
        )));
    }
    if t_hi > MAX_HEIGHT {
        return Err(Error::Range(format!(
            "zero search height {t_hi} exceeds {MAX_HEIGHT}"
        )));
    }
    // widen to good Gram points on both sides
    let mut m0 = gram_index_below(t_lo)?;
    while !is_good(m0, hardy_z(gram_point(m0)?)?) {
        m0 -= 1;
    }
    let mut m1 = gram_index_below(t_hi)? + 1;
    loop {
        let g = gram_point(m1)?;
        if g > MAX_HEIGHT {
            return Err(Error::Range(format!(
                "no good Gram point below {MAX_HEIGHT} closes the window"
            )));
        }
        if is_good(m1, hardy_z(g)?) {
            break;
        }
        m1 += 1;
    }
    let grams: Vec<f64> = (m0..=m1).map(gram_point).collect::<Result<_>>()?;
    let n_int = grams.len() - 1;

    const CHUNK: usize = 256;
    let chunks: Vec<usize> = (0..n_int).step_by(CHUNK).collect();
    let mut scans: Vec<IntervalScan> = chunks
        .par_iter()
        .flat_map_iter(|&start| {
            let mut sc = Scanner::new();
            let mut buf = Vec::new();
            let end = (start + CHUNK).min(n_int);
            (start..end)
                .map(|i| scan_interval(&mut sc, grams[i], grams[i + 1], cfg.substeps, &mut buf))
                .collect::<Vec<_>>()
        })
        .collect();

    // verification blocks between good Gram points
    let good: Vec<usize> = (0..=n_int)
        .filter(|&i| {
            let z = if i < n_int {
                scans[i].z_start
            } else {
                hardy_z_fast(grams[n_int])
            };
            is_good(m0 + i as i64, z)
        })
        .collect();
    let mut blocks = Vec::new();
    let mut start = 0usize;
    for &g in &good[1..] {
        if g - start >= cfg.min_block || g == n_int {
            blocks.push((start, g));
            start = g;
        }
    }
    if start < n_int {
        blocks.push((start, n_int));
    }
    for &(b0, b1) in &blocks {
        let expected = b1 - b0;
        let mut steps = cfg.substeps;
        let mut found: usize = scans[b0..b1].iter().map(|s| s.brackets.len()).sum();
        let mut pass = 0;
        while found < expected && pass < cfg.max_rescans {
            steps *= 10;
            pass += 1;
            let mut sc = Scanner::new();
            let mut buf = Vec::new();
            for i in b0..b1 {
                scans[i] = scan_interval(&mut sc, grams[i], grams[i + 1], steps, &mut buf);
            }
            found = scans[b0..b1].iter().map(|s| s.brackets.len()).sum();
        }
        if found != expected {
            warn!(
                "Gram block g_{}..g_{}: found {found} zeros, expected {expected}",
                m0 + b0 as i64,
                m0 + b1 as i64
            );
        }
    }

    let brackets: Vec<&Bracket> = scans
        .iter()
        .flat_map(|s| s.brackets.iter())
        .filter(|br| br.b > t_lo && br.a < t_hi)
        .collect();
    let mut zeros: Vec<f64> = brackets
        .par_iter()
        .map(|br| refine(br, cfg.tolerance))
        .filter(|&z| z > t_lo && z < t_hi)
        .collect();
    zeros.sort_by(|a, b| a.total_cmp(b));
    zeros.dedup();
    ZeroOrdinateList::new(zeros, (t_lo, t_hi))
}
