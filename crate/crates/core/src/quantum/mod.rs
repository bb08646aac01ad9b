//! Simulated quantum summation and the quantum approximation algorithm.

pub mod amplitude;
pub mod pipeline;
pub mod resources;
pub mod summation;

pub use amplitude::amplitude_estimation_pmf;
pub use pipeline::{complex_lattice_sum, quantum_approximate, QuantumApproxOutput, QuantumPlan, QuantumReport};
pub use resources::{cost_model_quantum, QuantumCostModel, ResourceReport};
pub use summation::{qsum, qsum_boosted, QuantumSumConfig, QSUM_CONSTANT};
