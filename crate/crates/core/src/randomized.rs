//! Monte Carlo approximation: estimate every coefficient in
//! `R(eps / sqrt 2, d)` from `n` uniform samples and drop the rest.
//!
//! Samples come from `ChaCha20Rng::seed_from_u64(seed)`; trial `t` of an
//! error study uses `seed + t`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KorobovError, Result};
use crate::fourier::{unit_phase, FourierPolynomial, Frequency};
use crate::index_set::{self, IndexSet};
use crate::space::SpaceDescriptor;
use crate::stats::pairwise_sum;

/// Threshold of the index set used for target error `epsilon`.
pub fn index_epsilon(epsilon: f64) -> f64 {
    epsilon / std::f64::consts::SQRT_2
}

fn samples_for(r_size: u64, epsilon: f64) -> u64 {
    (2.0 * r_size as f64 / (epsilon * epsilon)).ceil() as u64
}

/// `n = ceil(2 |R(eps / sqrt 2, d)| / eps^2)`.
pub fn sample_size(space: &SpaceDescriptor, epsilon: f64) -> Result<u64> {
    let r = index_set::count(space, index_epsilon(epsilon), index_set::DEFAULT_CAP)?;
    Ok(samples_for(r, epsilon))
}

/// A configured Monte Carlo run.
#[derive(Debug, Clone)]
pub struct McRun {
    epsilon: f64,
    n: u64,
    seed: u64,
    index_set: IndexSet,
}

impl McRun {
    /// Run with the sample size from [`sample_size`].
    pub fn new(space: &SpaceDescriptor, epsilon: f64, seed: u64) -> Result<Self> {
        let index_set = IndexSet::enumerate(space, index_epsilon(epsilon))?;
        let n = samples_for(index_set.cardinality() as u64, epsilon);
        Ok(Self { epsilon, n, seed, index_set })
    }

    /// Run with an explicit sample count.
    pub fn with_samples(space: &SpaceDescriptor, epsilon: f64, n: u64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(KorobovError::InvalidParameter("sample count must be >= 1".into()));
        }
        let index_set = IndexSet::enumerate(space, index_epsilon(epsilon))?;
        Ok(Self { epsilon, n, seed, index_set })
    }

    pub fn space(&self) -> &SpaceDescriptor {
        self.index_set.space()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    /// Same run with another seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    /// The estimates `y_h` for every `h` in the index set.
    pub fn approximate(&self, f: &FourierPolynomial) -> Result<ApproxOutput> {
        let d = self.space().dim();
        if f.dim() != d {
            return Err(KorobovError::DimensionMismatch { expected: d, found: f.dim() });
        }
        let members = self.index_set.members();
        // Per-coordinate phase tables e^{-2 pi i m w_j} for |m| <= max |h_j|.
        let max_h: Vec<usize> = (0..d)
            .map(|j| members.iter().map(|h| h[j].unsigned_abs() as usize).max().unwrap_or(0))
            .collect();
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        let mut omega = vec![0.0; d];
        let mut powers: Vec<Vec<Complex64>> = max_h.iter().map(|&m| vec![Complex64::new(1.0, 0.0); m + 1]).collect();
        let mut acc = vec![Complex64::new(0.0, 0.0); members.len()];
        for _ in 0..self.n {
            for w in omega.iter_mut() {
                *w = rng.random::<f64>();
            }
            let value = f.evaluate_unchecked(&omega);
            for (j, table) in powers.iter_mut().enumerate() {
                for (m, p) in table.iter_mut().enumerate().skip(1) {
                    *p = unit_phase(-(m as f64) * omega[j]);
                }
            }
            for (y, h) in acc.iter_mut().zip(members) {
                let mut phase = value;
                for (j, &hj) in h.iter().enumerate() {
                    if hj > 0 {
                        phase *= powers[j][hj as usize];
                    } else if hj < 0 {
                        phase *= powers[j][(-hj) as usize].conj();
                    }
                }
                *y += phase;
            }
        }
        let n = self.n as f64;
        let coefficients = members.iter().cloned().zip(acc.into_iter().map(|y| y / n)).collect();
        Ok(ApproxOutput { d, coefficients })
    }

    /// Exact squared `L_2` error of an output, by Parseval.
    pub fn sq_error(&self, f: &FourierPolynomial, out: &ApproxOutput) -> f64 {
        let inside: f64 = out.coefficients.iter().map(|(h, y)| (f.coeff(h) - y).norm_sqr()).sum();
        let outside: f64 = f.terms().filter(|(h, _)| !self.index_set.contains(h)).map(|(_, c)| c.norm_sqr()).sum();
        inside + outside
    }

    /// `E ||f - A(f)||^2` for this run's `n`.
    pub fn expected_sq_error(&self, f: &FourierPolynomial) -> Result<f64> {
        expected_sq_error(self.space(), self.epsilon, self.n, f)
    }

    /// Squared error over `trials` independent seeds `seed, seed + 1, ...`.
    pub fn empirical_error(&self, f: &FourierPolynomial, trials: u64) -> Result<EmpiricalError> {
        if trials < 2 {
            return Err(KorobovError::InvalidParameter("need at least two trials".into()));
        }
        let errors = (0..trials)
            .into_par_iter()
            .map(|t| {
                let run = self.reseeded(self.seed.wrapping_add(t));
                run.approximate(f).map(|out| run.sq_error(f, &out))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(EmpiricalError::from_samples(&errors))
    }
}

/// Coefficient estimates on the index set.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxOutput {
    d: usize,
    coefficients: BTreeMap<Frequency, Complex64>,
}

impl ApproxOutput {
    pub fn coefficients(&self) -> &BTreeMap<Frequency, Complex64> {
        &self.coefficients
    }

    pub fn coeff(&self, h: &[i64]) -> Option<Complex64> {
        self.coefficients.get(h).copied()
    }

    pub fn as_polynomial(&self) -> FourierPolynomial {
        FourierPolynomial::from_terms(self.d, self.coefficients.iter().map(|(h, c)| (h.clone(), *c)))
            .expect("dimensions agree")
    }
}

/// `sum_{h in R} (||f||^2 - |f^(h)|^2) / n + sum_{h not in R} |f^(h)|^2`
/// with `R = R(eps / sqrt 2, d)`.
pub fn expected_sq_error(space: &SpaceDescriptor, epsilon: f64, n: u64, f: &FourierPolynomial) -> Result<f64> {
    let eps_r = index_epsilon(epsilon);
    let r_size = index_set::count(space, eps_r, index_set::DEFAULT_CAP)? as f64;
    if f.dim() != space.dim() {
        return Err(KorobovError::DimensionMismatch { expected: space.dim(), found: f.dim() });
    }
    let norm2 = f.l2_norm().powi(2);
    let (mut inside, mut outside) = (0.0, 0.0);
    for (h, c) in f.terms() {
        if index_set::is_member(space, eps_r, h) {
            inside += c.norm_sqr();
        } else {
            outside += c.norm_sqr();
        }
    }
    Ok(((r_size * norm2 - inside) / n as f64).max(0.0) + outside)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalError {
    pub mean_sq: f64,
    pub std_err: f64,
    pub trials: u64,
}

impl EmpiricalError {
    /// Mean and standard error with pairwise summation.
    pub fn from_samples(xs: &[f64]) -> Self {
        let t = xs.len() as f64;
        let mean = pairwise_sum(xs) / t;
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
        let var = pairwise_sum(&dev) / (t - 1.0);
        Self { mean_sq: mean, std_err: (var / t).sqrt(), trials: xs.len() as u64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomizedCost {
    pub func_evals: f64,
    pub combinatory_ops: f64,
    pub total: f64,
}

/// `n c(d) + n d |R| + d |R|`; the index set is counted, not stored.
pub fn cost_model_randomized(space: &SpaceDescriptor, epsilon: f64, c_of_d: impl Fn(usize) -> f64) -> Result<RandomizedCost> {
    let r = index_set::count(space, index_epsilon(epsilon), u64::MAX)? as f64;
    let n = samples_for(r as u64, epsilon) as f64;
    let d = space.dim() as f64;
    let combinatory_ops = n * d * r + d * r;
    Ok(RandomizedCost { func_evals: n, combinatory_ops, total: n * c_of_d(space.dim()) + combinatory_ops })
}

/// Report written by the Monte Carlo front end.
#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub epsilon: f64,
    pub n: u64,
    #[serde(rename = "R_size")]
    pub r_size: u64,
    pub expected_sq_error: f64,
    pub empirical: EmpiricalError,
    pub cost: RandomizedCost,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::WeightSchedule;

    fn one_d(gamma: f64) -> SpaceDescriptor {
        SpaceDescriptor::new(1, 2.0, WeightSchedule::explicit(vec![gamma]).unwrap()).unwrap()
    }

    #[test]
    fn sample_sizes() {
        assert_eq!(sample_size(&one_d(1.0), 0.5).unwrap(), 40);
        // gamma = 1/16 leaves only h = 0 in R(0.5 / sqrt 2).
        assert_eq!(index_set::count(&one_d(1.0 / 16.0), index_epsilon(0.5), 100).unwrap(), 1);
        assert_eq!(sample_size(&one_d(1.0 / 16.0), 0.5).unwrap(), 8);
    }

    #[test]
    fn single_basis_function_is_exact() {
        let s = one_d(1.0 / 16.0);
        let f = FourierPolynomial::basis(&s, &[0]).unwrap();
        let run = McRun::new(&s, 0.5, 3).unwrap();
        let out = run.approximate(&f).unwrap();
        assert_eq!(out.coeff(&[0]), Some(Complex64::new(1.0, 0.0)));
        assert_eq!(run.sq_error(&f, &out), 0.0);
        assert_eq!(run.expected_sq_error(&f).unwrap(), 0.0);
    }

    #[test]
    fn expected_error_formula() {
        let s = one_d(1.0);
        let run = McRun::new(&s, 0.5, 0).unwrap();
        let f = FourierPolynomial::basis(&s, &[1]).unwrap();
        let m = run.index_set().cardinality() as f64;
        let want = (m - 1.0) * s.weight_product(&[1]).recip() / run.n() as f64;
        assert!((run.expected_sq_error(&f).unwrap() - want).abs() < 1e-15);
        let out = run.approximate(&f).unwrap();
        assert_eq!(out.coefficients().len(), run.index_set().cardinality());
        assert!(out.coefficients().keys().all(|h| run.index_set().contains(h)));
    }

    #[test]
    fn deterministic_per_seed() {
        let s = SpaceDescriptor::polynomial(2, 2.0, 1.0, 1.0).unwrap();
        let f = FourierPolynomial::random_unit(&s, 6, 3, 11).unwrap();
        let run = McRun::new(&s, 0.6, 42).unwrap();
        assert_eq!(run.approximate(&f).unwrap(), run.approximate(&f).unwrap());
        assert_ne!(run.approximate(&f).unwrap(), run.reseeded(43).approximate(&f).unwrap());
    }

    #[test]
    fn cost_terms() {
        let s = one_d(1.0);
        let c = cost_model_randomized(&s, 0.5, |d| (d * d) as f64).unwrap();
        assert_eq!(c.func_evals, 40.0);
        assert_eq!(c.combinatory_ops, 40.0 * 5.0 + 5.0);
        assert_eq!(c.total, 40.0 + 205.0);
    }
}
