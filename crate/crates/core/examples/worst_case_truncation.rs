//! The optimal worst-case algorithm keeps the coefficients in `R(eps, d)`.
//! Its error on the unit ball never exceeds `eps`.

use korobov::fourier::FourierPolynomial;
use korobov::index_set;
use korobov::space::SpaceDescriptor;

pub fn run_example() -> korobov::error::Result<()> {
    let space = SpaceDescriptor::polynomial(3, 2.0, 1.0, 1.0)?;
    let eps = 0.2;
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let f = FourierPolynomial::random_unit(&space, 15, 4, seed)?;
        worst = worst.max(index_set::truncation_error(&space, eps, &f)?);
    }
    println!("largest error over 50 inputs: {worst:.4} (eps = {eps})");

    // The first frequency outside R: its basis function is the worst case.
    let h = [5, 0, 0];
    let e = FourierPolynomial::basis(&space, &h)?;
    println!("r(h) = {}, error on e_h = {:.4}", space.weight_product(&h), index_set::truncation_error(&space, eps, &e)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
