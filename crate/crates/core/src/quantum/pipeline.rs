//! The quantum approximation algorithm.
//!
//! Keep the coefficients in `R(eps/3, d)`, replace each by a lattice rule
//! applied to `f(x) exp(-2 pi i h.x)`, and estimate every such sum with
//! quantum summation, one coefficient after the other. The error budget is
//! `eps/3` per stage. Truncation loses at most `eps/3`. The lattice rule is
//! chosen so that its exact worst-case error times `max_h ||f_h||_d` is at
//! most `eps/3`, which bounds the quadrature error of every coefficient.
//! The quantum estimates get `eps/3`, split evenly in squared norm over the
//! `2R` real parts.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::resources::{qubits_for, ResourceReport, SumRecord};
use super::summation::{median_failure_bound, qsum_from_mean_with, repetitions_for, QuantumSumConfig, QSUM_CONSTANT};
use crate::error::{KorobovError, Result};
use crate::fourier::{FourierPolynomial, Frequency};
use crate::index_set::IndexSet;
use crate::lattice::{self, LatticeRule, SearchMode};
use crate::space::{self, SpaceDescriptor, WeightSchedule};

/// Largest lattice size the planner will try.
pub const LATTICE_CAP: u64 = 1 << 28;

/// Up to this size generators are built component by component; above it
/// the best of [`KOROBOV_CANDIDATES`] Korobov-type generators is used.
pub const CBC_LIMIT: u64 = 2048;

pub const KOROBOV_CANDIDATES: u64 = 32;

/// Norm slack accepted for inputs of the unit ball.
const NORM_SLACK: f64 = 1e-12;

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_sum_with(truth: Complex64, cfg: &QuantumSumConfig, seed: u64, stream: u64) -> Result<Complex64> {
    let re = qsum_from_mean_with(truth.re, cfg, &mut rng_for(seed, stream))?;
    let im = qsum_from_mean_with(truth.im, cfg, &mut rng_for(seed, stream + 1))?;
    Ok(Complex64::new(re, im))
}

/// One coefficient sum `(1/N) sum_j f(x_j) exp(-2 pi i h.x_j)`, real and
/// imaginary parts estimated separately. The exact sum is obtained from the
/// coefficients of `f` by the dual-lattice congruence.
pub fn complex_lattice_sum(
    space: &SpaceDescriptor,
    rule: &LatticeRule,
    f: &FourierPolynomial,
    h: &[i64],
    per_part_error: f64,
    target_failure: f64,
    seed: u64,
) -> Result<(Complex64, ResourceReport)> {
    space.require_kernel()?;
    if !(per_part_error > 0.0) {
        return Err(KorobovError::InvalidParameter(format!("per-part error {per_part_error} must be positive")));
    }
    let m_bound = space.sup_norm_bound()?;
    let cfg = QuantumSumConfig::new(
        queries_for(m_bound, per_part_error),
        repetitions_for(target_failure)?,
        m_bound,
        seed,
    )?;
    let truth = rule.shifted_alias_sum(f, h)?;
    let estimate = complex_sum_with(truth, &cfg, seed, 0)?;
    let record = SumRecord { queries: cfg.queries(), repetitions: cfg.repetitions };
    let fail = (2.0 * median_failure_bound(cfg.repetitions)).min(1.0);
    let report = ResourceReport::from_sums(vec![record; 2], qubits_for(rule.n()), space.dim(), 0.0, fail);
    Ok((estimate, report))
}

/// Grid size: the power of two at least `QSUM_CONSTANT M_b / delta`.
fn queries_for(m_bound: f64, delta: f64) -> u64 {
    let raw = (QSUM_CONSTANT * m_bound / delta).ceil().max(4.0);
    (raw as u64).next_power_of_two()
}

/// Everything that depends on the space and `eps` but not on `f`.
#[derive(Debug, Clone)]
pub struct QuantumPlan {
    epsilon: f64,
    index_set: IndexSet,
    m_bound: f64,
    rule: LatticeRule,
    lattice_error: f64,
    max_shift: f64,
    per_part_error: f64,
    sum_config: QuantumSumConfig,
    eval_cost: f64,
}

impl QuantumPlan {
    pub fn new(space: &SpaceDescriptor, epsilon: f64, c_of_d: impl Fn(usize) -> f64) -> Result<Self> {
        space.require_kernel()?;
        if let WeightSchedule::Polynomial { .. } = space.weights() {
            if !space::sum_exponent(space.weights())?.is_finite() {
                return Err(KorobovError::Domain("the weights need a finite sum-exponent (kappa > 0)".into()));
            }
        }
        let eps3 = epsilon / 3.0;
        let index_set = IndexSet::enumerate(space, eps3)?;
        let r = index_set.cardinality() as f64;
        let m_bound = space.sup_norm_bound()?;

        let max_shift = index_set.members().iter().map(|h| space.shifted_norm_bound(h)).fold(0.0, f64::max);
        // Each shifted integrand gets the full eps/3 quadrature budget.
        let quad_target = eps3 / max_shift;
        let n_min = (m_bound * r.sqrt() / epsilon).ceil().max(5.0) as u64;
        let (rule, lattice_error) = choose_rule(space, n_min, quad_target)?;

        let per_part_error = eps3 / (2.0 * r).sqrt();
        let sum_config = QuantumSumConfig::new(
            queries_for(m_bound, per_part_error),
            repetitions_for(1.0 / (8.0 * r))?,
            m_bound,
            0,
        )?;
        Ok(Self {
            epsilon,
            index_set,
            m_bound,
            rule,
            lattice_error,
            max_shift,
            per_part_error,
            sum_config,
            eval_cost: c_of_d(space.dim()),
        })
    }

    pub fn space(&self) -> &SpaceDescriptor {
        self.index_set.space()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    pub fn rule(&self) -> &LatticeRule {
        &self.rule
    }

    /// Exact worst-case integration error of the chosen rule.
    pub fn lattice_error(&self) -> f64 {
        self.lattice_error
    }

    /// `max_{h in R} ||f_h||_d` over the unit ball.
    pub fn max_shift(&self) -> f64 {
        self.max_shift
    }

    pub fn m_bound(&self) -> f64 {
        self.m_bound
    }

    pub fn per_part_error(&self) -> f64 {
        self.per_part_error
    }

    pub fn sum_config(&self) -> &QuantumSumConfig {
        &self.sum_config
    }

    pub fn qubits(&self) -> u32 {
        qubits_for(self.rule.n())
    }

    /// Runs the algorithm on `f`, coefficient by coefficient.
    pub fn run(&self, f: &FourierPolynomial, seed: u64) -> Result<QuantumApproxOutput> {
        self.run_with(f, seed, false)
    }

    /// Same output as [`QuantumPlan::run`], coefficients spread over threads.
    pub fn run_parallel(&self, f: &FourierPolynomial, seed: u64) -> Result<QuantumApproxOutput> {
        self.run_with(f, seed, true)
    }

    fn run_with(&self, f: &FourierPolynomial, seed: u64, parallel: bool) -> Result<QuantumApproxOutput> {
        let space = self.space();
        if f.dim() != space.dim() {
            return Err(KorobovError::DimensionMismatch { expected: space.dim(), found: f.dim() });
        }
        let norm = f.korobov_norm(space)?;
        if norm > 1.0 + NORM_SLACK {
            return Err(KorobovError::InvalidParameter(format!(
                "input norm {norm} exceeds 1; the sup-norm bound only covers the unit ball"
            )));
        }
        let members = self.index_set.members();
        let estimate = |(i, h): (usize, &Frequency)| -> Result<Complex64> {
            let truth = self.rule.shifted_alias_sum(f, h)?;
            complex_sum_with(truth, &self.sum_config, seed, 2 * i as u64)
        };
        let values: Vec<Complex64> = if parallel {
            members.par_iter().enumerate().map(estimate).collect::<Result<_>>()?
        } else {
            members.iter().enumerate().map(estimate).collect::<Result<_>>()?
        };
        let coefficients: BTreeMap<Frequency, Complex64> = members.iter().cloned().zip(values).collect();

        let inside: f64 = coefficients.iter().map(|(h, y)| (f.coeff(h) - y).norm_sqr()).sum();
        let outside: f64 = f.terms().filter(|(h, _)| !self.index_set.contains(h)).map(|(_, c)| c.norm_sqr()).sum();

        let record = SumRecord { queries: self.sum_config.queries(), repetitions: self.sum_config.repetitions };
        let parts = 2 * members.len();
        let fail = (parts as f64 * median_failure_bound(self.sum_config.repetitions)).min(1.0);
        let report = ResourceReport::from_sums(vec![record; parts], self.qubits(), space.dim(), self.eval_cost, fail);
        Ok(QuantumApproxOutput { d: space.dim(), coefficients, report, achieved_error: (inside + outside).sqrt() })
    }

    /// The JSON summary of one run.
    pub fn report(&self, out: &QuantumApproxOutput) -> QuantumReport {
        QuantumReport {
            epsilon: self.epsilon,
            r_size: self.index_set.cardinality() as u64,
            n: self.rule.n(),
            queries: out.report.queries,
            qubits: out.report.qubits,
            combinatory_ops: out.report.combinatory_ops,
            total_cost: out.report.total_cost,
            failure_prob_bound: out.report.failure_prob_bound,
            achieved_error: out.achieved_error,
        }
    }
}

/// Smallest prime in the doubling sequence from `n_min` whose rule meets
/// the worst-case integration error target.
fn choose_rule(space: &SpaceDescriptor, n_min: u64, target: f64) -> Result<(LatticeRule, f64)> {
    let mut n = lattice::next_prime(n_min);
    loop {
        if n > LATTICE_CAP {
            return Err(KorobovError::CapExceeded { what: "lattice size".into(), cap: LATTICE_CAP });
        }
        let rule = if n <= CBC_LIMIT {
            lattice::search_generator(space, n, SearchMode::Cbc)?
        } else {
            lattice::search_korobov(space, n, &korobov_multipliers(n))?
        };
        let e = lattice::worst_case_int_error(space, &rule)?;
        if e <= target {
            return Ok((rule, e));
        }
        n = lattice::next_prime(2 * n);
    }
}

/// Deterministic spread of multipliers in `[2, N - 2]` from the golden ratio.
fn korobov_multipliers(n: u64) -> Vec<u64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut out: Vec<u64> = (1..=KOROBOV_CANDIDATES)
        .map(|i| 2 + ((i as f64 * phi).fract() * (n - 3) as f64) as u64)
        .collect();
    out.dedup();
    out
}

/// One-shot form: plan and run.
pub fn quantum_approximate(
    space: &SpaceDescriptor,
    epsilon: f64,
    f: &FourierPolynomial,
    c_of_d: impl Fn(usize) -> f64,
    seed: u64,
) -> Result<QuantumApproxOutput> {
    QuantumPlan::new(space, epsilon, c_of_d)?.run(f, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumApproxOutput {
    d: usize,
    coefficients: BTreeMap<Frequency, Complex64>,
    report: ResourceReport,
    achieved_error: f64,
}

impl QuantumApproxOutput {
    pub fn coefficients(&self) -> &BTreeMap<Frequency, Complex64> {
        &self.coefficients
    }

    pub fn as_polynomial(&self) -> FourierPolynomial {
        FourierPolynomial::from_terms(self.d, self.coefficients.iter().map(|(h, c)| (h.clone(), *c)))
            .expect("dimensions agree")
    }

    pub fn report(&self) -> &ResourceReport {
        &self.report
    }

    /// Exact `L_2` distance to the input, by Parseval.
    pub fn achieved_error(&self) -> f64 {
        self.achieved_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumReport {
    pub epsilon: f64,
    #[serde(rename = "R_size")]
    pub r_size: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub queries: u64,
    pub qubits: u32,
    pub combinatory_ops: u64,
    pub total_cost: f64,
    pub failure_prob_bound: f64,
    pub achieved_error: f64,
}
