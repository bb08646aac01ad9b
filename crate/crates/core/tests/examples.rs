//! Every example runs to completion.

#[path = "../examples/basis_and_norms.rs"]
mod basis_and_norms;

#[path = "../examples/index_set.rs"]
mod index_set;

#[path = "../examples/worst_case_truncation.rs"]
mod worst_case_truncation;

#[path = "../examples/monte_carlo.rs"]
mod monte_carlo;

#[path = "../examples/lattice_search.rs"]
mod lattice_search;

#[path = "../examples/amplitude_estimation.rs"]
mod amplitude_estimation;

#[path = "../examples/quantum_pipeline.rs"]
mod quantum_pipeline;

#[path = "../examples/tractability.rs"]
mod tractability;

#[path = "../examples/growth_and_speedup.rs"]
mod growth_and_speedup;

macro_rules! runs {
    ($($name:ident),*) => {
        $(
            #[test]
            fn $name() {
                super::$name::run_example().unwrap();
            }
        )*
    };
}

mod run {
    runs!(basis_and_norms, index_set, worst_case_truncation, monte_carlo, lattice_search, amplitude_estimation, quantum_pipeline, tractability, growth_and_speedup);
}
