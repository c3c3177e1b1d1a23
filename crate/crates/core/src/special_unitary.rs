//! SU(N) eigenvalue statistics in the generic Gram interval: U(N) Gram
//! points and Monte Carlo counts, Dyson products, level densities, the X^n
//! corrections and three routes to E_SU(N)(k, J).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fourier::{factorial, FourierCoefficientTable, MAX_FOURIER_N};
use crate::haar::{matrix_eigenangles, VerblunskySample};
use crate::montecarlo::{estimates, histogram, Estimate, HaarSampler, McConfig};
use crate::quadrature::GaussLegendre;
use crate::special::{alpha_constant, cosine_integral, EULER_GAMMA};
use crate::unitary::{generating_function_u, prob_u, reduce_angle, ArcInterval, EigenangleSample, GeneratingPolynomial};

const TWO_PI: f64 = 2.0 * PI;

/// The N points ψ_m = φ/N - π + 2πm/N, reduced to [-π, π), where φ is the
/// determinant phase in [-π, π).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UGramPointSet {
    points: Vec<f64>,
}

impl UGramPointSet {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// The interval [ψ_0, ψ_1).
    pub fn first_interval(&self) -> ArcInterval {
        ArcInterval::new(self.points[0], TWO_PI / self.points.len() as f64)
            .expect("Gram arc length is positive")
    }
}

pub fn u_gram_points(sample: &EigenangleSample) -> UGramPointSet {
    let n = sample.dimension();
    let base = sample.det_phase() / n as f64 - PI;
    let points = (0..n)
        .map(|m| reduce_angle(base + TWO_PI * m as f64 / n as f64))
        .collect();
    UGramPointSet { points }
}

/// The fixed SU(N) Gram points -π + 2πm/N.
pub fn su_gram_points(n: usize) -> Vec<f64> {
    (0..n).map(|m| -PI + TWO_PI * m as f64 / n as f64).collect()
}

/// Eigenangles of the sample in its first U(N) Gram interval.
pub fn count_in_u_gram_interval(sample: &EigenangleSample) -> usize {
    sample.count_in(&u_gram_points(sample).first_interval())
}

/// SU(N) eigenangles: Haar U(N) angles shifted by -φ/N.
pub fn su_eigenangle_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<EigenangleSample> {
    if n < 2 {
        return Err(domain(format!("N must be at least 2, got {n}")));
    }
    let u = EigenangleSample::new(matrix_eigenangles(n, rng))?;
    let shift = u.det_phase() / n as f64;
    EigenangleSample::new(u.angles().iter().map(|a| reduce_angle(a - shift)).collect())
}

pub fn su_eigenangle_sample_seeded(n: usize, seed: u64) -> Result<EigenangleSample> {
    su_eigenangle_sample(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Monte Carlo estimate of E_SU(N)(k, J) from U(N) Gram-interval counts.
pub fn mc_prob_su(n: usize, k: usize, cfg: &McConfig) -> Result<Estimate> {
    if k > n {
        return Err(domain(format!("k = {k} exceeds N = {n}")));
    }
    Ok(mc_distribution_su(n, cfg)?[k])
}

/// Estimates for every k = 0..=N from one run.
pub fn mc_distribution_su(n: usize, cfg: &McConfig) -> Result<Vec<Estimate>> {
    if n < 2 {
        return Err(domain(format!("N must be at least 2, got {n}")));
    }
    let width = TWO_PI / n as f64;
    let hist = match cfg.sampler {
        HaarSampler::Verblunsky => histogram(cfg, n + 1, |rng| {
            let v = VerblunskySample::draw(n, rng);
            let a = v.det_phase() / n as f64 - PI;
            v.count_in(a, a + width)
        })?,
        HaarSampler::Matrix => histogram(cfg, n + 1, |rng| {
            let s = EigenangleSample::new(matrix_eigenangles(n, rng)).expect("reduced angles");
            count_in_u_gram_interval(&s)
        })?,
    };
    Ok(estimates(&hist))
}

/// Π_{j<k} |e^{iθ_j} - e^{iθ_k}|².
pub fn dyson_product_u(angles: &[f64]) -> f64 {
    let z: Vec<Complex64> = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let mut p = 1.0;
    for a in 0..z.len() {
        for b in a + 1..z.len() {
            p *= (z[a] - z[b]).norm_sqr();
        }
    }
    p
}

/// The U(N) product with θ_N = -(θ_1 + ... + θ_{N-1}).
pub fn dyson_product_su(angles: &[f64]) -> f64 {
    let mut full = angles.to_vec();
    full.push(-angles.iter().sum::<f64>());
    dyson_product_u(&full)
}

fn parity_sign(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn one_level_density_su(n: usize, theta: f64) -> f64 {
    (n as f64 + 2.0 * parity_sign(n - 1) * (n as f64 * theta).cos()) / TWO_PI
}

/// The two-level correction X²(θ_1, θ_2) = R²_SU - R²_U.
pub fn x2_term(n: usize, t1: f64, t2: f64) -> f64 {
    let nf = n as f64;
    let mut s = 2.0 * (nf * t1 + nf * t2).cos()
        - ((nf + 1.0) * t1 + (nf - 1.0) * t2).cos()
        - ((nf - 1.0) * t1 + (nf + 1.0) * t2).cos()
        + parity_sign(n - 1) * (nf - 1.0) * ((nf * t1).cos() + (nf * t2).cos());
    let inner: f64 = (1..n).map(|k1| (k1 as f64 * t1 + (n - k1) as f64 * t2).cos()).sum();
    s += 2.0 * parity_sign(n - 2) * inner;
    2.0 * s / (TWO_PI * TWO_PI)
}

pub fn two_level_density_su(n: usize, t1: f64, t2: f64) -> f64 {
    crate::unitary::two_level_density_u(n, t1, t2) + x2_term(n, t1, t2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntegralMethod {
    ClosedForm,
    FourierOracle,
    /// Fourier expansion plus a region quadrature for the n = N term.
    FourierWithQuadrature,
}

/// ∫_{J^n} X^n for an N×N ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrectionIntegral {
    pub n_matrix: usize,
    pub order: usize,
    pub value: f64,
    pub method: IntegralMethod,
}

/// ∫_J X¹ over the Gram interval, identically zero.
pub fn x1_integral(n: usize) -> CorrectionIntegral {
    CorrectionIntegral {
        n_matrix: n,
        order: 1,
        value: 0.0,
        method: IntegralMethod::ClosedForm,
    }
}

/// Quadrature of 2(-1)^{N-1} cos(Nθ)/2π over the Gram interval.
pub fn x1_integral_quadrature(n: usize) -> f64 {
    let g = GaussLegendre::new(32);
    let arc = ArcInterval::gram(n);
    g.integrate(
        &|t: f64| 2.0 * parity_sign(n - 1) * (n as f64 * t).cos() / TWO_PI,
        arc.start(),
        arc.end(),
    )
}

/// Σ_{k=1}^{N} sin²(kπ/N)/k.
pub fn sine_sum(n: usize) -> f64 {
    let nf = n as f64;
    (1..=n)
        .map(|k| (k as f64 * PI / nf).sin().powi(2) / k as f64)
        .sum()
}

/// ½[γ + log 2π - Ci(2π)], the large-N value of [`sine_sum`].
pub fn sine_sum_limit() -> f64 {
    0.5 * (EULER_GAMMA + TWO_PI.ln() - cosine_integral(TWO_PI).expect("Ci(2π)"))
}

/// ∫_{J²} X² over a pair of Gram intervals, closed form.
pub fn x2_integral(n: usize) -> Result<CorrectionIntegral> {
    if n < 3 {
        return Err(domain(format!("x2_integral needs N >= 3, got {n}")));
    }
    let nf = n as f64;
    let first = (PI / nf).sin().powi(2) / (nf * nf - 1.0);
    let value = 4.0 / (PI * PI) * (first - 2.0 / nf * sine_sum(n));
    Ok(CorrectionIntegral {
        n_matrix: n,
        order: 2,
        value,
        method: IntegralMethod::ClosedForm,
    })
}

/// The same integral with the constrained double sum kept as printed.
pub fn x2_integral_double_sum(n: usize) -> f64 {
    let nf = n as f64;
    let first = (PI / nf).sin().powi(2) / (nf * nf - 1.0);
    let double: f64 = (1..n)
        .map(|k1| {
            let k2 = n - k1;
            (k1 as f64 * PI / nf).sin() * (k2 as f64 * PI / nf).sin() / (k1 * k2) as f64
        })
        .sum();
    4.0 / (PI * PI) * (first - double)
}

/// ∫_{J^n} X^n from the exact Fourier expansion (N <= 6). The n = N term
/// uses N!(E_SU(N, J) - E_U(N, J)) with E_SU from region quadrature.
pub fn xn_integral_oracle(n: usize, order: usize, arc: &ArcInterval) -> Result<CorrectionIntegral> {
    let table = FourierCoefficientTable::new(n)?;
    xn_integral_with_table(&table, order, arc)
}

pub fn xn_integral_with_table(
    table: &FourierCoefficientTable,
    order: usize,
    arc: &ArcInterval,
) -> Result<CorrectionIntegral> {
    let n = table.dimension();
    if order == 0 || order > n {
        return Err(domain(format!("order must lie in 1..=N, got {order}")));
    }
    if order < n {
        let (_, x) = table.level_integrals(order, arc)?;
        return Ok(CorrectionIntegral {
            n_matrix: n,
            order,
            value: x,
            method: IntegralMethod::FourierOracle,
        });
    }
    let all_in = region_probability(n, n, arc, 1e-12)?;
    let u = prob_u(n, n, arc)?;
    Ok(CorrectionIntegral {
        n_matrix: n,
        order,
        value: factorial(n) * (all_in - u),
        method: IntegralMethod::FourierWithQuadrature,
    })
}

/// ℰ_SU(N)(z, J) = ℰ_U(N)(z, J) + Σ_n z^n/n! ∫_{J^n} X^n, in the w = 1 + z
/// basis (N <= 6).
pub fn generating_function_su(n: usize, arc: &ArcInterval) -> Result<GeneratingPolynomial> {
    check_fourier_n(n)?;
    let table = FourierCoefficientTable::new(n)?;
    let u = generating_function_u(n, arc)?;
    let mut z = vec![0.0; n + 1];
    for (order, zc) in z.iter_mut().enumerate().skip(1) {
        *zc = xn_integral_with_table(&table, order, arc)?.value / factorial(order);
    }
    let corr = GeneratingPolynomial::from_z_coefficients(&z);
    let coeffs = u
        .coefficients()
        .iter()
        .zip(corr.coefficients())
        .map(|(a, b)| a + b)
        .collect();
    Ok(GeneratingPolynomial::new(coeffs))
}

/// E_SU(N)(k, J) by the alternating-sum corollary (N <= 6).
pub fn prob_su_corollary(n: usize, k: usize, arc: &ArcInterval) -> Result<f64> {
    if k > n {
        return Err(domain(format!("k = {k} exceeds N = {n}")));
    }
    Ok(generating_function_su(n, arc)?.coefficient(k))
}

fn check_fourier_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("N must be at least 2, got {n}")));
    }
    if n > MAX_FOURIER_N {
        return Err(Error::Unsupported(format!(
            "Fourier route limited to N <= {MAX_FOURIER_N}, got {n}"
        )));
    }
    Ok(())
}

/// E_U(N)(k, 2π/N) plus the leading X² correction.
pub fn asymptotic_prob_su(n: usize, k: usize) -> Result<f64> {
    if n < 3 {
        return Err(domain(format!("asymptotic form needs N >= 3, got {n}")));
    }
    let a = alpha_constant() / n as f64;
    let corr = match k {
        0 | 2 => -0.5 * a,
        1 => a,
        _ => return Err(domain(format!("asymptotic form covers k = 0, 1, 2, got {k}"))),
    };
    Ok(prob_u(n, k, &ArcInterval::gram(n))? + corr)
}

pub const MAX_QUADRATURE_N: usize = 5;

/// E_SU(N)(k, J) for the Gram interval by direct quadrature of the SU(N)
/// eigenangle density over N - 1 free angles (N <= 5).
pub fn quad_prob_su(n: usize, k: usize) -> Result<f64> {
    if n > MAX_QUADRATURE_N {
        return Err(Error::Unsupported(format!(
            "direct quadrature limited to N <= {MAX_QUADRATURE_N}, got {n}"
        )));
    }
    if n < 2 {
        return Err(domain(format!("N must be at least 2, got {n}")));
    }
    if k > n {
        return Err(domain(format!("k = {k} exceeds N = {n}")));
    }
    region_probability(n, k, &ArcInterval::gram(n), 1e-8)
}

/// Probability that exactly k of the N SU(N) eigenangles lie in `arc`.
pub(crate) fn region_probability(n: usize, k: usize, arc: &ArcInterval, tol: f64) -> Result<f64> {
    let inside = (arc.start(), arc.end());
    let outside = arc.complement().map(|c| (arc.end(), arc.end() + c.length()));
    let free = n - 1;
    let mut doms = Vec::with_capacity(free);
    let (c0, c1) = if k == n {
        doms.resize(free, inside);
        inside
    } else {
        let Some(out) = outside else {
            return Ok(0.0);
        };
        for i in 0..free {
            doms.push(if i < k { inside } else { out });
        }
        out
    };
    let binom = factorial(n) / (factorial(k) * factorial(n - k));
    let norm = binom / (factorial(n) * TWO_PI.powi(free as i32));
    let mut prev: Option<f64> = None;
    let mut order = 8;
    loop {
        let q = RegionQuadrature::new(&doms, c0, c1 - c0, order);
        let v = q.integrate() * norm;
        if let Some(p) = prev {
            if (v - p).abs() <= tol.max(1e-14 * v.abs()) {
                return Ok(v);
            }
        }
        if order >= 64 {
            return Err(Error::Numeric(format!(
                "region quadrature did not settle (N = {n}, k = {k})"
            )));
        }
        prev = Some(v);
        order *= 2;
    }
}

/// Integrates the SU(N) Dyson product over a box of N - 1 angles intersected
/// with the condition that the implied last angle lies in an arc. Outer
/// angles use piecewise Gauss-Legendre; the innermost one is integrated
/// exactly as a trigonometric polynomial.
struct RegionQuadrature<'a> {
    doms: &'a [(f64, f64)],
    c_start: f64,
    c_len: f64,
    rule: GaussLegendre,
    grid: Vec<f64>,
    /// Per level: sums of endpoint choices of all later variables.
    inner_sums: Vec<Vec<f64>>,
    /// e^{-ij x_m} for the innermost DFT, j = 0..=degree.
    dft: Vec<Vec<Complex64>>,
    nodes: Vec<f64>,
}

impl<'a> RegionQuadrature<'a> {
    fn new(doms: &'a [(f64, f64)], c_start: f64, c_len: f64, order: usize) -> Self {
        let r = doms.len();
        let mut inner_sums = vec![vec![0.0]; r];
        for l in (0..r.saturating_sub(1)).rev() {
            let (lo, hi) = doms[l + 1];
            let mut s: Vec<f64> = inner_sums[l + 1]
                .iter()
                .flat_map(|&d| [d + lo, d + hi])
                .collect();
            s.sort_by(|a, b| a.total_cmp(b));
            s.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            inner_sums[l] = s;
        }
        let n = r + 1;
        let degree = 2 * n - 2;
        let m = 2 * degree + 1;
        let nodes: Vec<f64> = (0..m).map(|i| TWO_PI * i as f64 / m as f64).collect();
        let dft = (0..=degree)
            .map(|j| nodes.iter().map(|&x| Complex64::from_polar(1.0, -(j as f64) * x)).collect())
            .collect();
        let grid = (1..n).map(|i| -PI + TWO_PI * i as f64 / n as f64).collect();
        RegionQuadrature {
            doms,
            c_start,
            c_len,
            rule: GaussLegendre::new(order),
            grid,
            inner_sums,
            dft,
            nodes,
        }
    }

    fn integrate(&self) -> f64 {
        let r = self.doms.len();
        if r == 1 {
            return self.innermost(0.0, &mut [0.0]);
        }
        self.nodes_at(0, 0.0)
            .into_par_iter()
            .map(|(x, wt)| {
                let mut xs = vec![0.0; r];
                xs[0] = x;
                wt * self.level(1, x, &mut xs)
            })
            .sum()
    }

    /// Can the remaining variables complete x_0..x_l (sum s) into the region?
    fn feasible(&self, l: usize, s: f64) -> bool {
        let sums = &self.inner_sums[l];
        let (ilo, ihi) = (sums[0], sums[sums.len() - 1]);
        let width = ihi - ilo;
        if width + self.c_len >= TWO_PI {
            return true;
        }
        // -(s + inner) for inner in [ilo, ihi] is [-s - ihi, -s - ilo]
        let u = (-s - ihi - self.c_start).rem_euclid(TWO_PI);
        u < self.c_len || u + width > TWO_PI
    }

    fn level(&self, l: usize, s_prev: f64, xs: &mut Vec<f64>) -> f64 {
        if l + 1 == self.doms.len() {
            return self.innermost(s_prev, xs);
        }
        let mut total = 0.0;
        for (x, wt) in self.nodes_at(l, s_prev) {
            xs[l] = x;
            total += wt * self.level(l + 1, s_prev + x, xs);
        }
        total
    }

    /// Quadrature nodes for variable l on the feasible pieces given the sum
    /// of the earlier variables.
    fn nodes_at(&self, l: usize, s_prev: f64) -> Vec<(f64, f64)> {
        let (lo, hi) = self.doms[l];
        let mut cuts = vec![lo, hi];
        cuts.extend(self.grid.iter().map(|&g| g + TWO_PI * ((lo - g) / TWO_PI).ceil()).filter(|&g| g > lo && g < hi));
        for &d in &self.inner_sums[l] {
            for e in [-self.c_start, -self.c_start - self.c_len] {
                let base = e - s_prev - d;
                let q0 = ((lo - base) / TWO_PI).ceil() as i64;
                let q1 = ((hi - base) / TWO_PI).floor() as i64;
                for q in q0..=q1 {
                    let x = base + TWO_PI * q as f64;
                    if x > lo && x < hi {
                        cuts.push(x);
                    }
                }
            }
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let mut nodes = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a >= 1e-14 && self.feasible(l, s_prev + 0.5 * (a + b)) {
                nodes.extend(self.rule.mapped(a, b));
            }
        }
        nodes
    }

    /// Exact integral over the last free angle x: its domain intersected
    /// with -(s + x) mod 2π in the constraint arc.
    fn innermost(&self, s: f64, xs: &mut [f64]) -> f64 {
        let l = self.doms.len() - 1;
        let (lo, hi) = self.doms[l];
        // x in (-s - c_start - c_len, -s - c_start] + 2πq
        let top = -s - self.c_start;
        let q0 = ((lo - top) / TWO_PI).floor() as i64;
        let q1 = ((hi - top + self.c_len) / TWO_PI).ceil() as i64;
        let mut pieces = Vec::new();
        for q in q0..=q1 {
            let b = (top + TWO_PI * q as f64).min(hi);
            let a = (top - self.c_len + TWO_PI * q as f64).max(lo);
            if b > a {
                pieces.push((a, b));
            }
        }
        if pieces.is_empty() {
            return 0.0;
        }
        let values: Vec<f64> = self
            .nodes
            .iter()
            .map(|&x| {
                xs[l] = x;
                dyson_product_su(xs)
            })
            .collect();
        let m = values.len() as f64;
        let coeffs: Vec<Complex64> = self
            .dft
            .iter()
            .map(|row| row.iter().zip(&values).map(|(e, v)| e * v).sum::<Complex64>() / m)
            .collect();
        pieces
            .iter()
            .map(|&(a, b)| {
                let mut v = coeffs[0].re * (b - a);
                for (j, c) in coeffs.iter().enumerate().skip(1) {
                    let jf = j as f64;
                    // 2 Re[c_j (e^{ijb} - e^{ija}) / (ij)]
                    let diff = Complex64::from_polar(1.0, jf * b) - Complex64::from_polar(1.0, jf * a);
                    v += 2.0 * (c * diff / Complex64::new(0.0, jf)).re;
                }
                v
            })
            .sum()
    }
}
