//! Verdicts for the weights `gamma_j = j^{-kappa}`.

use korobov::space::SpaceDescriptor;
use korobov::tractability::{exponent_all, verdict, Setting};

pub fn run_example() -> korobov::error::Result<()> {
    for kappa in [0.0, 0.5, 1.0, 2.0] {
        let space = SpaceDescriptor::polynomial(1, 2.0, 1.0, kappa)?;
        println!("kappa = {kappa}: p* = {}", exponent_all(&space)?);
        for setting in Setting::ALL {
            let v = verdict(&space, setting)?;
            println!(
                "  {setting:?}: strong {} tractable {} exponents [{}, {}]",
                v.strongly_tractable, v.tractable, v.exponent_low, v.exponent_high
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
