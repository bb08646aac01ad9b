//! Outcome distribution of amplitude estimation.
//!
//! Phase estimation with an `M`-point grid applied to the Grover operator of
//! an amplitude `a = sin^2(pi phi)`, `phi` in `[0, 1/2]`, returns `y` with
//! probability `(F(y - M phi) + F(y + M phi)) / 2`, where
//! `F(t) = sin^2(pi t) / (M^2 sin^2(pi t / M))` is the Fejer-type kernel of
//! the grid. The estimate read off an outcome is `sin^2(pi y / M)`.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{KorobovError, Result};

/// Largest supported grid exponent, `M <= 2^20`.
pub const MAX_GRID_BITS: u32 = 20;

pub(crate) fn check_grid(m: u64) -> Result<()> {
    if m < 2 || !m.is_power_of_two() || m > 1 << MAX_GRID_BITS {
        return Err(KorobovError::InvalidParameter(format!(
            "grid size {m} must be a power of two in [2, 2^{MAX_GRID_BITS}]"
        )));
    }
    Ok(())
}

fn check_amplitude(a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(KorobovError::InvalidParameter(format!("amplitude {a} outside [0, 1]")));
    }
    Ok(())
}

/// `phi = asin(sqrt a) / pi`.
pub fn phase_of(a: f64) -> f64 {
    a.sqrt().clamp(0.0, 1.0).asin() / PI
}

/// Estimate decoded from outcome `y`.
pub fn decode(y: u64, m: u64) -> f64 {
    (PI * y as f64 / m as f64).sin().powi(2)
}

/// `F(t)` for a grid of size `m`.
fn fejer(t: f64, m: f64) -> f64 {
    let frac = t - t.round();
    // t is a multiple of m up to rounding: the peak.
    let wrapped = t / m - (t / m).round();
    if wrapped.abs() * m < 1e-12 {
        return 1.0;
    }
    let num = (PI * frac).sin();
    let den = m * (PI * wrapped).sin();
    (num * num) / (den * den)
}

/// The full distribution over `{0, ..., M - 1}`.
pub fn amplitude_estimation_pmf(a: f64, m: u64) -> Result<Vec<f64>> {
    check_amplitude(a)?;
    check_grid(m)?;
    let mf = m as f64;
    let c = mf * phase_of(a);
    Ok((0..m)
        .map(|y| {
            let y = y as f64;
            0.5 * (fejer(y - c, mf) + fejer(y + c, mf))
        })
        .collect())
}

/// Draws one outcome without forming the distribution: pick one of the
/// two eigenphase branches, then walk outward from the grid point nearest
/// to it. The walk visits every residue once, so it always terminates, and
/// on average it stops after a few steps because the kernel decays
/// quadratically away from its peak.
pub fn sample_outcome<R: Rng + ?Sized>(a: f64, m: u64, rng: &mut R) -> u64 {
    let mf = m as f64;
    let phi = phase_of(a);
    let c = if rng.random::<bool>() { mf * phi } else { -mf * phi };
    let u: f64 = rng.random();
    let k0 = c.round() as i64;
    let mi = m as i64;
    let mut acc = 0.0;
    let mut last = k0;
    for step in 0..m as i64 {
        // 0, 1, -1, 2, -2, ... covers M consecutive residues.
        let offset = if step % 2 == 1 { (step + 1) / 2 } else { -(step / 2) };
        let k = k0 + offset;
        acc += fejer(k as f64 - c, mf);
        last = k;
        if acc > u {
            break;
        }
    }
    last.rem_euclid(mi) as u64
}

/// Smallest `c` such that, for every amplitude in `grid`, the scaled error
/// `2 M |a_hat - a|` is at most `c` with probability at least `quantile`.
/// The factor two converts amplitude error into error of the rescaled sum.
pub fn calibrate_constant(m: u64, grid: &[f64], quantile: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &a in grid {
        let pmf = amplitude_estimation_pmf(a, m)?;
        let mut pairs: Vec<(f64, f64)> =
            pmf.iter().enumerate().map(|(y, &p)| (2.0 * m as f64 * (decode(y as u64, m) - a).abs(), p)).collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut acc = 0.0;
        for (err, p) in pairs {
            acc += p;
            if acc >= quantile {
                worst = worst.max(err);
                break;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn pmf_sums_to_one() {
        for m in [2u64, 4, 32, 1024] {
            for a in [0.0, 0.013, 0.3, 0.5, 0.77, 1.0] {
                let s: f64 = amplitude_estimation_pmf(a, m).unwrap().iter().sum();
                assert!((s - 1.0).abs() < 1e-12, "m={m} a={a} sum={s}");
            }
        }
    }

    #[test]
    fn grid_amplitudes_are_exact() {
        let m = 16;
        for k in 0..=8u64 {
            let a = decode(k, m);
            let pmf = amplitude_estimation_pmf(a, m).unwrap();
            let mass = pmf[k as usize] + if k % 8 != 0 { pmf[(m - k) as usize] } else { 0.0 };
            assert!((mass - 1.0).abs() < 1e-12, "k={k}");
        }
        let zero = amplitude_estimation_pmf(0.0, 8).unwrap();
        assert_eq!(zero[0], 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(amplitude_estimation_pmf(1.5, 8).is_err());
        assert!(amplitude_estimation_pmf(0.5, 12).is_err());
    }

    #[test]
    fn sampler_matches_pmf() {
        let (a, m) = (0.2345, 32u64);
        let pmf = amplitude_estimation_pmf(a, m).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let draws = 200_000;
        let mut counts = vec![0u64; m as usize];
        for _ in 0..draws {
            counts[sample_outcome(a, m, &mut rng) as usize] += 1;
        }
        for (y, &p) in pmf.iter().enumerate() {
            let freq = counts[y] as f64 / draws as f64;
            let sd = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((freq - p).abs() <= 5.0 * sd + 1e-9, "y={y} freq={freq} p={p}");
        }
    }

    #[test]
    fn calibration_is_near_two_pi() {
        let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        let c = calibrate_constant(256, &grid, 0.75).unwrap();
        assert!(c > 1.0 && c < 2.0 * PI * (1.0 + PI / 256.0) + 1e-9, "c = {c}");
        for m in [16, 64, 1024] {
            assert!(calibrate_constant(m, &grid, 0.8).unwrap() <= crate::quantum::summation::QSUM_CONSTANT);
        }
    }
}

