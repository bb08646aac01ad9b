//! Monte Carlo estimation of the coefficients in `R(eps / sqrt 2, d)`.

use korobov::fourier::FourierPolynomial;
use korobov::randomized::{cost_model_randomized, McRun};
use korobov::space::SpaceDescriptor;

pub fn run_example() -> korobov::error::Result<()> {
    let space = SpaceDescriptor::polynomial(2, 2.0, 1.0, 1.0)?;
    let eps = 0.3;
    let run = McRun::new(&space, eps, 42)?;
    let f = FourierPolynomial::random_unit(&space, 8, 3, 5)?;
    println!("|R| = {}, n = {}", run.index_set().cardinality(), run.n());

    let expected = run.expected_sq_error(&f)?;
    let emp = run.empirical_error(&f, 2000)?;
    println!("expected e^2 = {expected:.6}");
    println!("empirical e^2 = {:.6} +- {:.6} over {} trials", emp.mean_sq, emp.std_err, emp.trials);
    println!("eps^2 = {:.6}", eps * eps);

    let cost = cost_model_randomized(&space, eps, |d| d as f64)?;
    println!("cost: {} evaluations, total {:.3e}", cost.func_evals, cost.total);
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
