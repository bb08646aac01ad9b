//! Rank-1 lattice rules: generator search and certification.

use korobov::lattice::{self, LatticeRule, SearchMode};
use korobov::space::{SpaceDescriptor, WeightSchedule};

pub fn run_example() -> korobov::error::Result<()> {
    let one = SpaceDescriptor::new(1, 2.0, WeightSchedule::explicit(vec![1.0])?)?;
    let e = lattice::worst_case_int_error(&one, &LatticeRule::new(5, vec![1])?)?;
    println!("d = 1, N = 5: e = {e:.9}, pi/sqrt(75) = {:.9}", std::f64::consts::PI / 75f64.sqrt());

    for d in [2, 4] {
        let space = SpaceDescriptor::polynomial(d, 2.0, 1.0, 1.0)?;
        for n in [17, 101, 1009] {
            for mode in [SearchMode::Exhaustive, SearchMode::Cbc] {
                if mode == SearchMode::Exhaustive && (n > 101 || d > 2) && n != 17 {
                    continue;
                }
                let rule = lattice::search_generator(&space, n, mode)?;
                let e = lattice::worst_case_int_error(&space, &rule)?;
                let bound = lattice::int_error_bound(&space, n);
                let tag = if lattice::certify(&space, &rule).is_ok() { "ok" } else { "above bound" };
                println!("d = {d}, N = {n:5} {mode:?}: z = {:?}, e = {e:.6}, bound = {bound:.6} {tag}", rule.z());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
