//! Ensembles of independent walkers.
//!
//! Walker `i` draws from ChaCha stream `i` of the master seed, and final
//! positions are collected in walker order. Statistics are therefore
//! identical whether the walkers ran on one thread or many.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::walk::{final_position, step_lengths, WalkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of the mean.
    pub std_error: f64,
}

impl EnsembleStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len();
        let n = count as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let variance = if count > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            count,
            mean,
            variance,
            std_error: (variance / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub config: WalkConfig,
    /// Final standard positions, indexed by walker.
    pub final_x: Vec<f64>,
    /// Final deformed positions, indexed by walker.
    pub final_u: Vec<f64>,
}

impl EnsembleResult {
    pub fn stats_x(&self) -> EnsembleStats {
        EnsembleStats::from_samples(&self.final_x)
    }

    pub fn stats_u(&self) -> EnsembleStats {
        EnsembleStats::from_samples(&self.final_u)
    }

    /// Frequency of each right-step count k = 0..=n.
    pub fn histogram(&self) -> Result<Vec<f64>> {
        let (plus, minus) = step_lengths(self.config.l(), self.config.params())?;
        let n = self.config.n_steps();
        let mut counts = vec![0usize; n + 1];
        for &u in &self.final_u {
            // u = k·l₊ + (n − k)·l₋ exactly up to rounding
            let k = ((u - n as f64 * minus) / (plus - minus)).round();
            counts[k.clamp(0.0, n as f64) as usize] += 1;
        }
        let total = self.final_u.len() as f64;
        Ok(counts.into_iter().map(|c| c as f64 / total).collect())
    }
}

fn check_walkers(n_walkers: usize) -> Result<()> {
    if n_walkers == 0 {
        return Err(Error::param("n_walkers", "must be at least 1"));
    }
    Ok(())
}

fn unzip(pairs: Vec<(f64, f64)>, config: &WalkConfig) -> EnsembleResult {
    let (final_x, final_u) = pairs.into_iter().unzip();
    EnsembleResult {
        config: *config,
        final_x,
        final_u,
    }
}

/// Runs `n_walkers` walkers, in parallel when the `parallel` feature is on.
pub fn run_ensemble(config: &WalkConfig, n_walkers: usize) -> Result<EnsembleResult> {
    check_walkers(n_walkers)?;
    let steps = step_lengths(config.l(), config.params())?;
    let pairs = par::map_indices(n_walkers, |i| final_position(config, steps, i as u64));
    Ok(unzip(pairs, config))
}

/// Same as [`run_ensemble`] but always on the calling thread.
pub fn run_ensemble_sequential(config: &WalkConfig, n_walkers: usize) -> Result<EnsembleResult> {
    check_walkers(n_walkers)?;
    let steps = step_lengths(config.l(), config.params())?;
    let pairs = par::map_indices_sequential(n_walkers, |i| final_position(config, steps, i as u64));
    Ok(unzip(pairs, config))
}
