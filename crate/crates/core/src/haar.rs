//! Haar-distributed unitary spectra.
//!
//! Two samplers: the Gaussian/QR construction, and the Killip–Nenciu CMV
//! model, where a Haar unitary's spectrum is the zero set of the degree-N
//! orthogonal polynomial built from independent random Verblunsky
//! coefficients. The CMV route never forms a matrix: eigenangle counts in
//! an arc come from the monotone Prüfer phase.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::unitary::{reduce_angle, EigenangleSample};

/// Eigenangles of a Haar unitary via QR of a complex Gaussian matrix.
pub fn matrix_eigenangles<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let m = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let qr = m.qr();
        let r = qr.r();
        let mut q = qr.q();
        let mut degenerate = false;
        for j in 0..n {
            let d = r[(j, j)];
            let norm = d.norm();
            if norm == 0.0 {
                degenerate = true;
                break;
            }
            let phase = d / norm;
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
        if degenerate {
            continue;
        }
        let Some(ev) = q.schur().eigenvalues() else {
            continue;
        };
        return ev.iter().map(|z| reduce_angle(z.arg())).collect();
    }
}

/// Verblunsky coefficients α_0..α_{N-1} of a Haar U(N) spectral measure.
#[derive(Clone, Debug)]
pub struct VerblunskySample {
    alpha: Vec<Complex64>,
}

impl VerblunskySample {
    pub fn draw<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1);
        let mut alpha = Vec::with_capacity(n);
        for k in 0..n - 1 {
            // |α_k|² ~ Beta(1, N-k-1)
            let u: f64 = rng.random();
            let r2 = 1.0 - (1.0 - u).powf(1.0 / (n - k - 1) as f64);
            let phi = rng.random::<f64>() * 2.0 * PI;
            alpha.push(Complex64::from_polar(r2.sqrt(), phi));
        }
        let phi = rng.random::<f64>() * 2.0 * PI;
        alpha.push(Complex64::from_polar(1.0, phi));
        VerblunskySample { alpha }
    }

    pub fn from_coefficients(alpha: Vec<Complex64>) -> Self {
        VerblunskySample { alpha }
    }

    pub fn dimension(&self) -> usize {
        self.alpha.len()
    }

    /// Continuous, increasing phase ψ with ψ(θ + 2π) = ψ(θ) + 2πN.
    pub fn prufer_phase(&self, theta: f64) -> f64 {
        let n = self.alpha.len();
        let mut psi = theta;
        for a in &self.alpha[..n - 1] {
            let w = Complex64::new(1.0, 0.0) - a * Complex64::from_polar(1.0, psi);
            psi = theta + psi - 2.0 * w.im.atan2(w.re);
        }
        psi
    }

    /// Eigenangles are the θ with ψ(θ) ≡ target (mod 2π).
    fn target(&self) -> f64 {
        self.alpha[self.alpha.len() - 1].conj().arg()
    }

    /// Number of eigenangles in the half-open [a, b), 0 < b - a <= 2π.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        let c = self.target();
        let lo = ((self.prufer_phase(a) - c) / (2.0 * PI)).ceil();
        let hi = ((self.prufer_phase(b) - c) / (2.0 * PI)).ceil();
        (hi - lo).max(0.0) as usize
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.alpha.len();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        sign * self.alpha[n - 1].conj()
    }

    /// Principal argument of the determinant in [-π, π).
    pub fn det_phase(&self) -> f64 {
        reduce_angle(self.determinant().arg())
    }

    /// Eigenangles in [-π, π), ascending, by bisection on the phase.
    pub fn eigenangles(&self) -> Vec<f64> {
        let n = self.alpha.len();
        let c = self.target();
        let psi0 = self.prufer_phase(-PI);
        let q0 = ((psi0 - c) / (2.0 * PI)).ceil();
        (0..n)
            .map(|j| {
                let goal = c + 2.0 * PI * (q0 + j as f64);
                let (mut lo, mut hi) = (-PI, PI);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.prufer_phase(mid) < goal {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-15 {
                        break;
                    }
                }
                reduce_angle(0.5 * (lo + hi))
            })
            .collect()
    }

    pub fn to_sample(&self) -> EigenangleSample {
        EigenangleSample::new(self.eigenangles()).expect("eigenangles are reduced")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_sample_is_unitary_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..8 {
            let a = matrix_eigenangles(n, &mut rng);
            assert_eq!(a.len(), n);
            assert!(a.iter().all(|x| (-PI..PI).contains(x)));
        }
    }

    #[test]
    fn prufer_phase_winds_n_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..10 {
            let v = VerblunskySample::draw(n, &mut rng);
            let a = v.prufer_phase(-1.0);
            let b = v.prufer_phase(-1.0 + 2.0 * PI);
            assert!((b - a - 2.0 * PI * n as f64).abs() < 1e-9);
            // increasing on a fine grid
            let mut prev = f64::NEG_INFINITY;
            for i in 0..400 {
                let p = v.prufer_phase(-PI + i as f64 * 2.0 * PI / 400.0);
                assert!(p > prev);
                prev = p;
            }
        }
    }

    #[test]
    fn eigenangles_are_consistent_with_counts_and_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..9 {
            let v = VerblunskySample::draw(n, &mut rng);
            let e = v.eigenangles();
            assert_eq!(e.len(), n);
            assert_eq!(v.count_in(-PI, PI), n);
            let s: f64 = e.iter().sum();
            let d = Complex64::from_polar(1.0, s);
            assert!((d - v.determinant()).norm() < 1e-9);
            // each eigenangle is caught by a small arc around it
            for &x in &e {
                assert!(v.count_in(x - 1e-7, x + 1e-7) >= 1);
            }
        }
    }

    #[test]
    fn unitary_cmv_eigenvalues_match_characteristic_roots() {
        // N = 2: Φ_2(z) = z² + (α_0 ᾱ_1 - ᾱ_0) z - ᾱ_1
        let a0 = Complex64::new(0.3, -0.2);
        let a1 = Complex64::from_polar(1.0, 0.7);
        let v = VerblunskySample::from_coefficients(vec![a0, a1]);
        for &x in &v.eigenangles() {
            let z = Complex64::from_polar(1.0, x);
            let p = z * z + (a0 * a1.conj() - a0.conj()) * z - a1.conj();
            assert!(p.norm() < 1e-10, "{p}");
        }
    }
}
