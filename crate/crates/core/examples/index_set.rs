//! Enumerate `R(eps, d)` and compare with the information complexity count.

use korobov::index_set::{self, IndexSet};
use korobov::space::SpaceDescriptor;

pub fn run_example() -> korobov::error::Result<()> {
    let space = SpaceDescriptor::polynomial(2, 2.0, 1.0, 0.0)?;
    let set = IndexSet::enumerate(&space, 0.5)?;
    println!("R(0.5, 2) = {:?}", set.members());

    let space = SpaceDescriptor::polynomial(4, 2.0, 1.0, 1.0)?;
    for k in 1..=6 {
        let eps = 0.5f64.powi(k);
        println!("eps = 2^-{k}: |R| = {}", index_set::count(&space, eps, index_set::DEFAULT_CAP)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
