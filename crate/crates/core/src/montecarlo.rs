//! Seeded, sharded Monte Carlo over categorical outcomes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{precondition, Result};

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: u64 = 1_000;

/// How Haar-random unitary spectra are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum HaarSampler {
    /// Random Verblunsky coefficients (CMV model); O(N) per draw.
    #[default]
    Verblunsky,
    /// Gaussian matrix, QR with phase correction, eigen-decomposition.
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Number of independent streams; the result depends on it.
    pub workers: usize,
    pub sampler: HaarSampler,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            workers: 8,
            sampler: HaarSampler::default(),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_sampler(mut self, sampler: HaarSampler) -> Self {
        self.sampler = sampler;
        self
    }
}

/// A Monte Carlo proportion with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_count(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Estimate {
            value: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }

    /// |value - x| in units of the standard error (infinite when the
    /// estimate has zero variance and differs).
    pub fn sigmas_from(&self, x: f64) -> f64 {
        let d = (self.value - x).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Runs `draw` `cfg.samples` times across `cfg.workers` streams and
/// tallies its outcomes, which must be below `bins`.
pub fn histogram<F>(cfg: &McConfig, bins: usize, draw: F) -> Result<Vec<u64>>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    if cfg.samples < MIN_SAMPLES {
        return Err(precondition(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            cfg.samples
        )));
    }
    if cfg.workers == 0 {
        return Err(precondition("worker count must be at least 1"));
    }
    let w = cfg.workers as u64;
    let base = cfg.samples / w;
    let rem = cfg.samples % w;
    let shards: Vec<Vec<u64>> = (0..w)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i);
            let n = base + u64::from(i < rem);
            let mut h = vec![0u64; bins];
            for _ in 0..n {
                h[draw(&mut rng)] += 1;
            }
            h
        })
        .collect();
    let mut total = vec![0u64; bins];
    for s in shards {
        for (t, c) in total.iter_mut().zip(s) {
            *t += c;
        }
    }
    Ok(total)
}

pub fn estimates(hist: &[u64]) -> Vec<Estimate> {
    let n: u64 = hist.iter().sum();
    hist.iter().map(|&c| Estimate::from_count(c, n)).collect()
}
