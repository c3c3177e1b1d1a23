//! Exact Fourier expansion of the U(N) Dyson product
//! Π_{j<k} |e^{iθ_j} - e^{iθ_k}|² and the X^n correction integrals built
//! from it.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::unitary::ArcInterval;

pub const MAX_FOURIER_N: usize = 6;

/// Integer coefficients c_j of Π(2 - e^{i(θ_j-θ_k)} - e^{-i(θ_j-θ_k)}) in
/// the exponential basis e^{i j·θ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierCoefficientTable {
    n: usize,
    exp: HashMap<Vec<i8>, i64>,
}

impl FourierCoefficientTable {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("N must be at least 2, got {n}")));
        }
        if n > MAX_FOURIER_N {
            return Err(Error::Unsupported(format!(
                "Fourier expansion limited to N <= {MAX_FOURIER_N}, got {n}"
            )));
        }
        let mut exp: HashMap<Vec<i8>, i64> = HashMap::new();
        exp.insert(vec![0; n], 1);
        for a in 0..n {
            for b in a + 1..n {
                let mut next: HashMap<Vec<i8>, i64> = HashMap::with_capacity(exp.len() * 3);
                for (key, &c) in &exp {
                    *next.entry(key.clone()).or_insert(0) += 2 * c;
                    let mut k = key.clone();
                    k[a] += 1;
                    k[b] -= 1;
                    *next.entry(k).or_insert(0) -= c;
                    let mut k = key.clone();
                    k[a] -= 1;
                    k[b] += 1;
                    *next.entry(k).or_insert(0) -= c;
                }
                next.retain(|_, c| *c != 0);
                exp = next;
            }
        }
        Ok(FourierCoefficientTable { n, exp })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Exponential-basis coefficient c_j (c_j = c_{-j}).
    pub fn exp_coefficient(&self, j: &[i8]) -> i64 {
        self.exp.get(j).copied().unwrap_or(0)
    }

    pub fn exp_terms(&self) -> impl Iterator<Item = (&[i8], i64)> {
        self.exp.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    /// Cosine-basis coefficient: the expansion is Σ c cos(j·θ) over one
    /// representative of each ±j pair, the one whose first nonzero entry is
    /// positive.
    pub fn cos_coefficient(&self, j: &[i8]) -> i64 {
        let c = self.exp_coefficient(j);
        if j.iter().all(|&x| x == 0) {
            c
        } else {
            2 * c
        }
    }

    /// Cosine-basis terms, sorted by index vector.
    pub fn cos_terms(&self) -> Vec<(Vec<i8>, i64)> {
        let mut v: Vec<(Vec<i8>, i64)> = self
            .exp
            .iter()
            .filter(|(k, _)| is_representative(k))
            .map(|(k, _)| (k.clone(), self.cos_coefficient(k)))
            .collect();
        v.sort();
        v
    }

    /// Evaluates the expansion at the given angles.
    pub fn evaluate(&self, theta: &[f64]) -> f64 {
        self.exp
            .iter()
            .map(|(k, &c)| {
                let ph: f64 = k.iter().zip(theta).map(|(&j, &t)| j as f64 * t).sum();
                c as f64 * ph.cos()
            })
            .sum()
    }

    /// Cache format: `# fourier N=<n>` header, then `j_1 ... j_N c` lines in
    /// the cosine basis.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# fourier N={}", self.n)?;
        for (k, c) in self.cos_terms() {
            let idx: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{} {c}", idx.join(" "))?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut n = None;
        let mut exp = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            if let Some(rest) = s.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("fourier N=") {
                    n = Some(v.trim().parse::<usize>().map_err(|e| perr(e.to_string()))?);
                }
                continue;
            }
            let n = n.ok_or_else(|| perr("coefficient before '# fourier N=' header".into()))?;
            let parts: Vec<&str> = s.split_whitespace().collect();
            if parts.len() != n + 1 {
                return Err(perr(format!("expected {} fields, got {}", n + 1, parts.len())));
            }
            let key: Vec<i8> = parts[..n]
                .iter()
                .map(|x| x.parse::<i8>().map_err(|e| perr(e.to_string())))
                .collect::<Result<_>>()?;
            let c: i64 = parts[n].parse().map_err(|e: std::num::ParseIntError| perr(e.to_string()))?;
            if key.iter().all(|&x| x == 0) {
                exp.insert(key, c);
            } else {
                if c % 2 != 0 || !is_representative(&key) {
                    return Err(perr("not a cosine-basis representative".into()));
                }
                let neg: Vec<i8> = key.iter().map(|x| -x).collect();
                exp.insert(key, c / 2);
                exp.insert(neg, c / 2);
            }
        }
        let n = n.ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing '# fourier N=' header".into(),
        })?;
        Ok(FourierCoefficientTable { n, exp })
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

    /// Loads `fourier_N<n>.txt` from `dir` if present, else computes the
    /// table and stores it there.
    pub fn cached(n: usize, dir: &Path) -> Result<Self> {
        let path = dir.join(format!("fourier_N{n}.txt"));
        if path.exists() {
            let t = Self::read_path(&path)?;
            if t.n == n {
                return Ok(t);
            }
        }
        let t = Self::new(n)?;
        std::fs::create_dir_all(dir)?;
        t.write_path(&path)?;
        Ok(t)
    }

    /// ∫_{J^n} R^n_SU(N) split into its U(N) part (shift s = 0) and the
    /// remaining X^n part, for 1 <= n <= N - 1.
    pub fn level_integrals(&self, order: usize, arc: &ArcInterval) -> Result<(f64, f64)> {
        let n = self.n;
        if order == 0 || order >= n {
            return Err(domain(format!("order must lie in 1..N-1, got {order}")));
        }
        // sum coefficients over identical (j_1..j_n, s) before any floating point
        let mut grouped: HashMap<(Vec<i8>, i8), i64> = HashMap::new();
        for (k, &c) in &self.exp {
            let s = k[order];
            if k[order..].iter().all(|&x| x == s) {
                *grouped.entry((k[..order].to_vec(), s)).or_insert(0) += c;
            }
        }
        let mut u = 0.0;
        let mut x = 0.0;
        let mut cache: HashMap<i64, Complex64> = HashMap::new();
        let mut fourier = |m: i64| *cache.entry(m).or_insert_with(|| arc.fourier(m));
        for ((k, s), c) in grouped {
            if c == 0 {
                continue;
            }
            let mut p = Complex64::new(c as f64, 0.0);
            for &j in &k {
                p *= fourier(j as i64 - s as i64);
            }
            if s == 0 {
                u += p.re;
            } else {
                x += p.re;
            }
        }
        let norm = factorial(n - order) * (2.0 * PI).powi(order as i32);
        Ok((u / norm, x / norm))
    }
}

fn is_representative(k: &[i8]) -> bool {
    match k.iter().find(|&&x| x != 0) {
        Some(&x) => x > 0,
        None => true,
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}
