//! Amplitude estimation outcomes and the quantum summation built on them.

use korobov::quantum::{amplitude_estimation_pmf, qsum_boosted, QSUM_CONSTANT};

pub fn run_example() -> korobov::error::Result<()> {
    let m = 16;
    let pmf = amplitude_estimation_pmf(0.3, m)?;
    let (best, p) = pmf.iter().enumerate().fold((0, 0.0), |acc, (y, &p)| if p > acc.1 { (y, p) } else { acc });
    println!("a = 0.3, M = {m}: most likely outcome {best} with probability {p:.4}");

    let g: Vec<f64> = (0..1000).map(|j| 0.3 + 0.5 * ((j as f64) * 0.37).sin()).collect();
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    for n in [64, 256, 1024] {
        let est = qsum_boosted(&g, 1.0, n, 0.01, 3)?;
        println!("n = {n:5}: error {:.2e}, contract {:.2e}", (est - mean).abs(), QSUM_CONSTANT / n as f64);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> korobov::error::Result<()> {
    run_example()
}
