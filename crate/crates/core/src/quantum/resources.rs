//! Query, qubit and cost accounting.
//!
//! One query costs its qubit count plus `c(d)` for the function value plus
//! `2d + 2` combinatory operations for the phase `exp(-2 pi i h.x)`.

use serde::Serialize;

use super::summation::repetitions_for;
use crate::error::{KorobovError, Result};
use crate::index_set;
use crate::space::SpaceDescriptor;

/// Qubits beyond the index register: the amplitude ancilla.
pub const QUBIT_WORKSPACE: u32 = 1;

/// Qubits used by a summation over `N` nodes.
pub fn qubits_for(n: u64) -> u32 {
    (64 - (n - 1).leading_zeros()) + QUBIT_WORKSPACE
}

/// Combinatory operations inside one query.
pub fn phase_ops(d: usize) -> u64 {
    2 * d as u64 + 2
}

/// Resources of one real summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumRecord {
    pub queries: u64,
    pub repetitions: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport {
    pub queries: u64,
    pub qubits: u32,
    pub combinatory_ops: u64,
    pub func_evals: u64,
    pub failure_prob_bound: f64,
    pub total_cost: f64,
    /// `c(d)`, the cost of one function value.
    pub eval_cost: f64,
    pub d: usize,
    pub sums: Vec<SumRecord>,
}

impl ResourceReport {
    /// Report for a sequence of summations with the given classical
    /// assembly work on top.
    pub fn from_sums(sums: Vec<SumRecord>, qubits: u32, d: usize, eval_cost: f64, failure_prob_bound: f64) -> Self {
        let queries: u64 = sums.iter().map(|s| s.queries).sum();
        let assembly = assembly_ops(&sums, d);
        let combinatory_ops = queries * phase_ops(d) + assembly;
        let total_cost = queries as f64 * (qubits as f64 + eval_cost) + combinatory_ops as f64;
        Self {
            queries,
            qubits,
            combinatory_ops,
            func_evals: queries,
            failure_prob_bound,
            total_cost,
            eval_cost,
            d,
            sums,
        }
    }

    /// Recomputes every derived field from the per-sum records.
    pub fn validate(&self) -> Result<()> {
        let weight = self.qubits as f64 + self.eval_cost + phase_ops(self.d) as f64;
        let by_sum: f64 = self.sums.iter().map(|s| s.queries as f64 * weight).sum();
        let expected = by_sum + assembly_ops(&self.sums, self.d) as f64;
        let queries: u64 = self.sums.iter().map(|s| s.queries).sum();
        let ok = queries == self.queries
            && self.func_evals == self.queries
            && (expected - self.total_cost).abs() <= 1e-12 * expected.abs().max(1.0)
            && (0.0..=1.0).contains(&self.failure_prob_bound);
        if ok {
            Ok(())
        } else {
            Err(KorobovError::Internal(format!(
                "resource report inconsistent: total {} but per-sum recomputation gives {expected}",
                self.total_cost
            )))
        }
    }
}

/// Decoding every run plus writing the coefficients and evaluating the
/// output once: `sum l + d * (number of complex sums)`.
fn assembly_ops(sums: &[SumRecord], d: usize) -> u64 {
    let decodes: u64 = sums.iter().map(|s| s.repetitions as u64).sum();
    decodes + d as u64 * (sums.len() as u64).div_ceil(2)
}

/// Predicted resources from the closed-form query count, no simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumCostModel {
    pub r_size: f64,
    pub m_bound: f64,
    pub log2_n: f64,
    /// `R (M sqrt R / eps) log(4R)`, bounded-sup-norm summation.
    pub queries: f64,
    pub per_query_weight: f64,
    pub combinatory_ops: f64,
    pub total_cost: f64,
    /// The same with the extra `log^{3/2} X log log X` factor of the
    /// `L_2`-bounded summation, `X = M sqrt R / eps`; a formula only.
    pub queries_p2: f64,
    pub total_cost_p2: f64,
}

/// Closed-form cost of the quantum algorithm. `log N` comes from the
/// existence bound for lattice rules applied to the shifted integrands.
pub fn cost_model_quantum(space: &SpaceDescriptor, epsilon: f64, c_of_d: impl Fn(usize) -> f64) -> Result<QuantumCostModel> {
    space.require_kernel()?;
    let eps3 = epsilon / 3.0;
    let r = index_set::count(space, eps3, u64::MAX)? as f64;
    let m_bound = space.sup_norm_bound()?;
    let d = space.dim();
    let x = m_bound * r.sqrt() / epsilon;
    let log_r = (4.0 * r).log2();
    let queries = r * x * log_r;

    let two_alpha = 2f64.powf(space.alpha());
    let spread: f64 = space.gammas().iter().map(|g| f64::max(1.0, g * two_alpha)).product();
    let existence: f64 = space.gammas().iter().map(|g| 1.0 + 2.0 * g).product();
    // e <= sqrt(existence / N) and ||f_h|| <= sqrt(spread / eps3^2); the
    // per-coefficient quadrature target is eps3 / sqrt R.
    let n_quadrature = existence * spread / (eps3 * eps3) * r / (eps3 * eps3);
    let log2_n = n_quadrature.max(x).log2();

    let per_query_weight = log2_n + c_of_d(d) + phase_ops(d) as f64;
    let reps = repetitions_for(1.0 / (8.0 * r))? as f64;
    let combinatory_ops = queries * phase_ops(d) as f64 + 2.0 * r * reps + d as f64 * r;
    let total_cost = queries * (log2_n + c_of_d(d)) + combinatory_ops;

    let lx = x.log2().max(2.0);
    let queries_p2 = queries * lx.powf(1.5) * lx.log2();
    let total_cost_p2 = queries_p2 * per_query_weight + 2.0 * r * reps + d as f64 * r;
    Ok(QuantumCostModel {
        r_size: r,
        m_bound,
        log2_n,
        queries,
        per_query_weight,
        combinatory_ops,
        total_cost,
        queries_p2,
        total_cost_p2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_count() {
        assert_eq!(qubits_for(2), 1 + QUBIT_WORKSPACE);
        assert_eq!(qubits_for(5), 3 + QUBIT_WORKSPACE);
        assert_eq!(qubits_for(1024), 10 + QUBIT_WORKSPACE);
        assert_eq!(qubits_for(1031), 11 + QUBIT_WORKSPACE);
    }

    #[test]
    fn report_identity() {
        let sums = vec![SumRecord { queries: 64 * 13, repetitions: 13 }; 6];
        let mut r = ResourceReport::from_sums(sums, 12, 2, 4.0, 0.1);
        r.validate().unwrap();
        assert_eq!(r.queries, 6 * 64 * 13);
        r.total_cost += 1.0;
        assert!(r.validate().is_err());
    }

    #[test]
    fn cost_model_monotone() {
        let s = SpaceDescriptor::polynomial(5, 2.0, 1.0, 1.0).unwrap();
        let a = cost_model_quantum(&s, 0.2, |d| d as f64).unwrap();
        let b = cost_model_quantum(&s, 0.1, |d| d as f64).unwrap();
        assert!(b.queries > a.queries && b.total_cost > a.total_cost);
        assert!(a.queries_p2 > a.queries);
        assert!((a.total_cost - (a.queries * a.per_query_weight + 2.0 * a.r_size * repetitions_for(1.0 / (8.0 * a.r_size)).unwrap() as f64 + 5.0 * a.r_size)).abs() < 1e-6 * a.total_cost);
    }
}
