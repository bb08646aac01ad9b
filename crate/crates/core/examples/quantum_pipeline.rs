//! The simulated quantum algorithm end to end.

use korobov::fourier::FourierPolynomial;
use korobov::quantum::QuantumPlan;
use korobov::space::SpaceDescriptor;

pub fn run_example() -> korobov::error::Result<()> {
    let space = SpaceDescriptor::polynomial(2, 2.0, 1.0, 2.0)?;
    let plan = QuantumPlan::new(&space, 0.25, |d| d as f64)?;
    println!(
        "|R| = {}, N = {}, e(rule) = {:.3e}, grid M = {}, repetitions = {}",
        plan.index_set().cardinality(),
        plan.rule().n(),
        plan.lattice_error(),
        plan.sum_config().grid(),
        plan.sum_config().repetitions
    );
    let f = FourierPolynomial::random_unit(&space, 10, 3, 9)?;
    let out = plan.run(&f, 1)?;
    out.report().validate()?;
    let r = plan.report(&out);
    println!("achieved error {:.4}, queries {}, qubits {}, total cost {:.3e}", r.achieved_error, r.queries, r.qubits, r.total_cost);
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
