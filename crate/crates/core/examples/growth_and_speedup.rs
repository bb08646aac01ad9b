//! Growth of `|R(eps, d)|` and the randomized-to-quantum cost ratio.

use korobov::space::SpaceDescriptor;
use korobov::tractability::{growth_study, speedup_table};

pub fn run_example() -> korobov::error::Result<()> {
    let space = SpaceDescriptor::polynomial(3, 2.0, 1.0, 2.0)?;
    let eps: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
    print!("{}", growth_study(&space, &eps, &[1, 3], 1_000_000)?.to_csv());

    let space = SpaceDescriptor::polynomial(6, 2.0, 1.0, 1.0)?;
    let table = speedup_table(&space, &eps[1..5], |d| d as f64)?;
    print!("{}", table.to_csv());
    println!("fitted ratio exponent {:.3}", table.ratio_exponent);
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
