//! Quantum summation of a bounded real sequence, simulated at the level
//! of measurement outcomes.
//!
//! A sequence with `|g(j)| <= M_b` is mapped to the amplitude
//! `a = mean((g(j) / M_b + 1) / 2)`, amplitude estimation is sampled `l`
//! times and the median of the decoded values `M_b (2 a_hat - 1)` is returned.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::amplitude::{check_grid, decode, sample_outcome};
use crate::error::{KorobovError, Result};
use crate::stats::{compensated_sum, median_odd};

/// Error constant of one amplitude-estimation run: with probability at
/// least 3/4 the rescaled estimate is within `QSUM_CONSTANT * M_b / M` of
/// the mean.
///
/// Measured with [`super::amplitude::calibrate_constant`] on 4001 equally
/// spaced amplitudes for `M` from 4 to 4096: the worst 75th percentile of
/// `2 M |a_hat - a|` is 4.43 and the worst 80th percentile is 4.65. The
/// frozen value is the latter rounded up, which leaves room for sampling
/// noise when the 3/4 rate is checked empirically.
pub const QSUM_CONSTANT: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumSumConfig {
    /// Query budget of one run; the grid is the largest power of two not above it.
    pub n_queries: u64,
    /// Odd number of runs whose median is returned.
    pub repetitions: u32,
    pub m_bound: f64,
    pub seed: u64,
}

impl QuantumSumConfig {
    pub fn new(n_queries: u64, repetitions: u32, m_bound: f64, seed: u64) -> Result<Self> {
        let cfg = Self { n_queries, repetitions, m_bound, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_queries < 4 {
            return Err(KorobovError::InvalidParameter(format!("n_queries = {} must be >= 4", self.n_queries)));
        }
        if self.repetitions % 2 == 0 {
            return Err(KorobovError::InvalidParameter(format!(
                "repetitions = {} must be odd",
                self.repetitions
            )));
        }
        if !(self.m_bound > 0.0 && self.m_bound.is_finite()) {
            return Err(KorobovError::InvalidParameter(format!("bound {} must be positive", self.m_bound)));
        }
        check_grid(self.grid())
    }

    /// Phase grid size `M`.
    pub fn grid(&self) -> u64 {
        1 << (63 - self.n_queries.leading_zeros())
    }

    /// Queries spent: `M` per run.
    pub fn queries(&self) -> u64 {
        self.grid() * self.repetitions as u64
    }
}

/// `l = 2 ceil(4 ln(1 / target)) + 1`, so that `exp(-l / 8) < target`.
pub fn repetitions_for(target_failure: f64) -> Result<u32> {
    if !(target_failure > 0.0 && target_failure < 1.0) {
        return Err(KorobovError::InvalidParameter(format!(
            "failure probability {target_failure} outside (0, 1)"
        )));
    }
    Ok(2 * (4.0 * (1.0 / target_failure).ln()).ceil() as u32 + 1)
}

/// Hoeffding bound `exp(-l / 8)` on the failure probability of the median
/// of `l` runs that each succeed with probability at least 3/4.
pub fn median_failure_bound(repetitions: u32) -> f64 {
    (-(repetitions as f64) / 8.0).exp()
}

/// Summation when the mean is already known exactly, as it is for lattice
/// sums of sparse polynomials.
pub fn qsum_from_mean(mean: f64, cfg: &QuantumSumConfig) -> Result<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    qsum_from_mean_with(mean, cfg, &mut rng)
}

pub(crate) fn qsum_from_mean_with(mean: f64, cfg: &QuantumSumConfig, rng: &mut ChaCha20Rng) -> Result<f64> {
    cfg.validate()?;
    if !(mean.abs() <= cfg.m_bound * (1.0 + 1e-12)) {
        return Err(KorobovError::BoundViolation { value: mean, bound: cfg.m_bound });
    }
    let a = ((mean / cfg.m_bound + 1.0) / 2.0).clamp(0.0, 1.0);
    let m = cfg.grid();
    let estimates: Vec<f64> = (0..cfg.repetitions)
        .map(|_| cfg.m_bound * (2.0 * decode(sample_outcome(a, m, rng), m) - 1.0))
        .collect();
    Ok(median_odd(&estimates))
}

/// Estimate of `(1/N) sum_j g(j)` for `g` given as values.
pub fn qsum(g: &[f64], cfg: &QuantumSumConfig) -> Result<f64> {
    if g.is_empty() {
        return Err(KorobovError::InvalidParameter("empty sequence".into()));
    }
    if let Some(&bad) = g.iter().find(|v| !(v.abs() <= cfg.m_bound)) {
        return Err(KorobovError::BoundViolation { value: bad, bound: cfg.m_bound });
    }
    let mean = compensated_sum(g.iter().copied()) / g.len() as f64;
    qsum_from_mean(mean, cfg)
}

/// [`qsum`] with the number of repetitions chosen from a failure target.
pub fn qsum_boosted(g: &[f64], m_bound: f64, n_queries: u64, target_failure: f64, seed: u64) -> Result<f64> {
    let cfg = QuantumSumConfig::new(n_queries, repetitions_for(target_failure)?, m_bound, seed)?;
    qsum(g, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetitions_rule() {
        assert_eq!(repetitions_for(0.25).unwrap(), 13);
        assert_eq!(repetitions_for(1.0 / 400.0).unwrap(), 49);
        assert!(median_failure_bound(repetitions_for(0.01).unwrap()) < 0.01);
        assert!(repetitions_for(1.0).is_err());
    }

    #[test]
    fn grid_is_power_of_two_below_budget() {
        let cfg = QuantumSumConfig::new(300, 1, 1.0, 0).unwrap();
        assert_eq!(cfg.grid(), 256);
        assert_eq!(cfg.queries(), 256);
        assert!(QuantumSumConfig::new(3, 1, 1.0, 0).is_err());
        assert!(QuantumSumConfig::new(64, 2, 1.0, 0).is_err());
    }

    #[test]
    fn extreme_sequences_are_exact() {
        let cfg = QuantumSumConfig::new(64, 5, 2.0, 1).unwrap();
        assert_eq!(qsum(&[2.0; 10], &cfg).unwrap(), 2.0);
        let low = qsum(&[-2.0; 10], &cfg).unwrap();
        assert_eq!(low, -2.0);
    }

    #[test]
    fn bound_violation() {
        let cfg = QuantumSumConfig::new(64, 1, 1.0, 1).unwrap();
        assert!(matches!(qsum(&[0.5, 1.5], &cfg), Err(KorobovError::BoundViolation { .. })));
        assert!(qsum_from_mean(1.1, &cfg).is_err());
    }

    #[test]
    fn deterministic() {
        let g: Vec<f64> = (0..100).map(|j| ((j * 37 % 100) as f64 / 50.0) - 1.0).collect();
        let a = qsum_boosted(&g, 1.0, 128, 0.1, 5).unwrap();
        let b = qsum_boosted(&g, 1.0, 128, 0.1, 5).unwrap();
        assert_eq!(a, b);
        let mean = g.iter().sum::<f64>() / 100.0;
        assert!((a - mean).abs() <= QSUM_CONSTANT / 128.0);
    }
}
