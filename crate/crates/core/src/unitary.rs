//! U(N) eigenvalue statistics: arcs, the Gram-determinant generating
//! function, n-level densities and Monte Carlo counts.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::haar::{matrix_eigenangles, VerblunskySample};
use crate::montecarlo::{histogram, estimates, Estimate, HaarSampler, McConfig};

const TWO_PI: f64 = 2.0 * PI;

/// Reduces an angle into [-π, π).
pub fn reduce_angle(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TWO_PI) - PI;
    if r >= PI {
        -PI
    } else {
        r
    }
}

/// Half-open arc [start, start + length) on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArcInterval {
    start: f64,
    length: f64,
}

impl ArcInterval {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= TWO_PI) || !start.is_finite() {
            return Err(domain(format!(
                "arc length must lie in (0, 2π], got {length}"
            )));
        }
        Ok(ArcInterval {
            start: reduce_angle(start),
            length,
        })
    }

    /// The generic SU(N) Gram interval [-π, -π + 2π/N).
    pub fn gram(n: usize) -> Self {
        assert!(n >= 1);
        ArcInterval {
            start: -PI,
            length: TWO_PI / n as f64,
        }
    }

    pub fn full_circle() -> Self {
        ArcInterval {
            start: -PI,
            length: TWO_PI,
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// End point start + length, not reduced.
    pub fn end(&self) -> f64 {
        self.start + self.length
    }

    pub fn contains(&self, theta: f64) -> bool {
        (theta - self.start).rem_euclid(TWO_PI) < self.length
    }

    pub fn rotated(&self, by: f64) -> Self {
        ArcInterval {
            start: reduce_angle(self.start + by),
            length: self.length,
        }
    }

    /// The complementary arc; `None` for the full circle.
    pub fn complement(&self) -> Option<Self> {
        (self.length < TWO_PI).then(|| ArcInterval {
            start: reduce_angle(self.end()),
            length: TWO_PI - self.length,
        })
    }

    /// ∫_J e^{imθ} dθ.
    pub fn fourier(&self, m: i64) -> Complex64 {
        if m == 0 {
            return Complex64::new(self.length, 0.0);
        }
        let mf = m as f64;
        let a = Complex64::from_polar(1.0, mf * self.start);
        let b = Complex64::from_polar(1.0, mf * self.end());
        (b - a) / Complex64::new(0.0, mf)
    }
}

/// Eigenangles of a unitary matrix, each in [-π, π).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenangleSample {
    angles: Vec<f64>,
    det_phase: f64,
}

impl EigenangleSample {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 2 {
            return Err(domain("a sample needs at least two eigenangles"));
        }
        if let Some(a) = angles.iter().find(|a| !(-PI..PI).contains(*a)) {
            return Err(domain(format!("eigenangle {a} outside [-π, π)")));
        }
        let det_phase = reduce_angle(angles.iter().sum());
        Ok(EigenangleSample { angles, det_phase })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn dimension(&self) -> usize {
        self.angles.len()
    }

    /// Principal argument of the determinant, in [-π, π).
    pub fn det_phase(&self) -> f64 {
        self.det_phase
    }

    pub fn count_in(&self, arc: &ArcInterval) -> usize {
        self.angles.iter().filter(|&&a| arc.contains(a)).count()
    }

    pub fn rotated(&self, by: f64) -> Self {
        Self::new(self.angles.iter().map(|a| reduce_angle(a + by)).collect())
            .expect("rotation keeps angles reduced")
    }
}

/// Draws Haar U(N) eigenangles with the Gaussian/QR construction.
pub fn sample_haar_eigenangles<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<EigenangleSample> {
    if n < 2 {
        return Err(domain(format!("N must be at least 2, got {n}")));
    }
    EigenangleSample::new(matrix_eigenangles(n, rng))
}

/// Seeded convenience wrapper around [`sample_haar_eigenangles`].
pub fn sample_haar_eigenangles_seeded(n: usize, seed: u64) -> Result<EigenangleSample> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    sample_haar_eigenangles(n, &mut rng)
}

/// The N×N matrix (1/2π)∫_J e^{i(j-k)θ} dθ.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    matrix: DMatrix<Complex64>,
}

impl KernelMatrix {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Eigenvalues ascending, clipped into [0, 1].
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("kernel eigen-decomposition failed".into()));
        }
        for x in v.iter_mut() {
            if *x < -1e-10 || *x > 1.0 + 1e-10 {
                return Err(Error::Numeric(format!(
                    "kernel eigenvalue {x} outside [0, 1]"
                )));
            }
            *x = x.clamp(0.0, 1.0);
        }
        v.sort_by(|a, b| a.total_cmp(b));
        Ok(v)
    }
}

pub fn kernel_matrix(n: usize, arc: &ArcInterval) -> Result<KernelMatrix> {
    if n < 2 {
        return Err(domain(format!("N must be at least 2, got {n}")));
    }
    let matrix = DMatrix::from_fn(n, n, |j, k| arc.fourier(j as i64 - k as i64) / TWO_PI);
    Ok(KernelMatrix { matrix })
}

/// Polynomial in w = 1 + z whose k-th coefficient is a probability of
/// exactly k eigenvalues in an arc.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratingPolynomial {
    coeffs: Vec<f64>,
}

impl GeneratingPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        GeneratingPolynomial { coeffs }
    }

    /// Π ((1 - λ) + λ w).
    pub fn from_eigenvalues(lambdas: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &l in lambdas {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i] += (1.0 - l) * ci;
                next[i + 1] += l * ci;
            }
            c = next;
        }
        GeneratingPolynomial { coeffs: c }
    }

    /// Converts a polynomial in z (ascending powers) to the w = 1 + z basis.
    pub fn from_z_coefficients(z: &[f64]) -> Self {
        // z^n = (w - 1)^n
        let n = z.len();
        let mut w = vec![0.0; n];
        for (p, &a) in z.iter().enumerate() {
            let mut binom = 1.0;
            for (k, wk) in w.iter_mut().enumerate().take(p + 1) {
                let sign = if (p - k) % 2 == 0 { 1.0 } else { -1.0 };
                *wk += a * sign * binom;
                binom *= (p - k) as f64 / (k + 1) as f64;
            }
        }
        GeneratingPolynomial { coeffs: w }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Value at z, i.e. at w = 1 + z.
    pub fn eval_z(&self, z: f64) -> f64 {
        let w = 1.0 + z;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * w + c)
    }
}

pub fn generating_function_u(n: usize, arc: &ArcInterval) -> Result<GeneratingPolynomial> {
    let k = kernel_matrix(n, arc)?;
    Ok(GeneratingPolynomial::from_eigenvalues(&k.eigenvalues()?))
}

/// E_U(N)(k, J): probability of exactly k eigenvalues in J.
pub fn prob_u(n: usize, k: usize, arc: &ArcInterval) -> Result<f64> {
    if k > n {
        return Err(domain(format!("k = {k} exceeds N = {n}")));
    }
    Ok(generating_function_u(n, arc)?.coefficient(k))
}

/// All of E_U(N)(0..=N, J) at once.
pub fn prob_u_all(n: usize, arc: &ArcInterval) -> Result<Vec<f64>> {
    Ok(generating_function_u(n, arc)?.coefficients().to_vec())
}

/// Large-N limits of E_U(N)(k, 2π/N arc) for k = 0, 1, 2.
pub fn limit_probs(k: usize) -> Result<f64> {
    match k {
        0 => Ok(0.17022),
        1 => Ok(0.66143),
        2 => Ok(0.16649),
        _ => Err(domain(format!("limits are tabulated for k = 0, 1, 2 only, got {k}"))),
    }
}

pub fn one_level_density_u(n: usize, _theta: f64) -> f64 {
    n as f64 / TWO_PI
}

pub fn two_level_density_u(n: usize, theta1: f64, theta2: f64) -> f64 {
    let nf = n as f64;
    let d = theta1 - theta2;
    let s: f64 = (1..n).map(|a| (nf - a as f64) * (a as f64 * d).cos()).sum();
    ((nf - 1.0) * nf - 2.0 * s) / (TWO_PI * TWO_PI)
}

/// Monte Carlo estimate of E_U(N)(k, J).
pub fn mc_prob_u(n: usize, k: usize, arc: &ArcInterval, cfg: &McConfig) -> Result<Estimate> {
    if k > n {
        return Err(domain(format!("k = {k} exceeds N = {n}")));
    }
    Ok(mc_distribution_u(n, arc, cfg)?[k])
}

/// Monte Carlo estimates of E_U(N)(k, J) for every k = 0..=N.
pub fn mc_distribution_u(n: usize, arc: &ArcInterval, cfg: &McConfig) -> Result<Vec<Estimate>> {
    if n < 2 {
        return Err(domain(format!("N must be at least 2, got {n}")));
    }
    let arc = *arc;
    let hist = match cfg.sampler {
        HaarSampler::Verblunsky => histogram(cfg, n + 1, |rng| {
            let v = VerblunskySample::draw(n, rng);
            if arc.length() >= TWO_PI {
                n
            } else {
                v.count_in(arc.start(), arc.end())
            }
        })?,
        HaarSampler::Matrix => histogram(cfg, n + 1, |rng| {
            matrix_eigenangles(n, rng)
                .iter()
                .filter(|&&a| arc.contains(a))
                .count()
        })?,
    };
    Ok(estimates(&hist))
}
