//! Norms, kernel values and the algebra constant of a small space.

use korobov::fourier::FourierPolynomial;
use korobov::space::SpaceDescriptor;
use num_complex::Complex64;

pub fn run_example() -> korobov::error::Result<()> {
    let space = SpaceDescriptor::polynomial(3, 2.0, 1.0, 2.0)?;
    println!("gammas           {:?}", space.gammas());
    println!("K(y, y)          {:.6}", space.kernel_diag()?);
    println!("sup-norm bound   {:.6}", space.sup_norm_bound()?);
    println!("algebra constant {:.6}", space.algebra_constant()?);

    let e = FourierPolynomial::basis(&space, &[1, -1, 0])?;
    println!("||e_h||_d = {:.12}", e.korobov_norm(&space)?);

    let f = FourierPolynomial::random_unit(&space, 6, 3, 1)?;
    let g = FourierPolynomial::random_unit(&space, 6, 3, 2)?;
    let fg = f.multiply(&g)?;
    let c = space.algebra_constant()?;
    println!("||fg||_d = {:.6} <= C(d) = {:.6}", fg.korobov_norm(&space)?, c);

    let x = [0.1, 0.7, 0.35];
    let lhs = fg.evaluate_unchecked(&x);
    let rhs = f.evaluate_unchecked(&x) * g.evaluate_unchecked(&x);
    println!("pointwise product check {:.2e}", (lhs - rhs).norm());
    let half = f.scale(Complex64::new(0.5, 0.0));
    println!("||f/2||_d = {:.6}", half.korobov_norm(&space)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
