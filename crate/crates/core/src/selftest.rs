//! A quick run of the reference oracles against the production code.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::fourier::FourierPolynomial;
use crate::index_set::IndexSet;
use crate::lattice::{self, LatticeRule, SearchMode};
use crate::oracles;
use crate::quantum::amplitude_estimation_pmf;
use crate::space::{SpaceDescriptor, WeightSchedule};
use crate::tractability::{verdict, Setting};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

fn check(name: &str, run: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let (passed, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { name: name.into(), passed, detail }
}

fn index_sets() -> Result<(bool, String)> {
    let mut mismatches = 0;
    let mut cases = 0;
    for kappa in [0.0, 1.0, 2.0] {
        for alpha in [1.5, 2.0, 4.0] {
            let s = SpaceDescriptor::polynomial(2, alpha, 1.0, kappa)?;
            for k in 1..=4 {
                let eps = 0.5f64.powi(k);
                let dfs = IndexSet::enumerate(&s, eps)?;
                let scan = oracles::brute_force_index_set(&s, eps, 10_000_000)?;
                cases += 1;
                if dfs.members() != scan.as_slice() {
                    mismatches += 1;
                }
            }
        }
    }
    Ok((mismatches == 0, format!("{mismatches} mismatches in {cases} cases")))
}

fn pmf() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in [4u64, 16, 64] {
        for i in 0..=20 {
            let a = i as f64 / 20.0;
            let sv = oracles::statevector_phase_estimation(a, m as usize)?;
            let cf = amplitude_estimation_pmf(a, m)?;
            worst = sv.iter().zip(&cf).map(|(p, q)| (p - q).abs()).fold(worst, f64::max);
        }
    }
    Ok((worst <= 1e-10, format!("max deviation {worst:e}")))
}

fn lattice_errors() -> Result<(bool, String)> {
    let s = SpaceDescriptor::new(1, 2.0, WeightSchedule::explicit(vec![1.0])?)?;
    let rule = LatticeRule::new(5, vec![1])?;
    let e = lattice::worst_case_int_error(&s, &rule)?;
    let expected = std::f64::consts::PI / 75f64.sqrt();
    let s2 = SpaceDescriptor::polynomial(2, 2.0, 1.0, 1.0)?;
    let rule2 = lattice::search_generator(&s2, 101, SearchMode::Cbc)?;
    let kernel = lattice::certify(&s2, &rule2)?;
    let dual = lattice::worst_case_int_error_dual(&s2, &rule2)?;
    let ok = (e - expected).abs() <= 1e-12 && (kernel - dual).abs() <= 1e-8 * kernel;
    Ok((ok, format!("e(5) = {e}, kernel/dual = {kernel}/{dual}")))
}

fn lattice_sums() -> Result<(bool, String)> {
    let s = SpaceDescriptor::polynomial(2, 2.0, 1.0, 1.0)?;
    let f = FourierPolynomial::random_unit(&s, 12, 6, 3)?;
    let rule = LatticeRule::new(31, vec![1, 12])?;
    let direct = oracles::direct_lattice_sum(&f, 31, rule.z());
    let alias = rule.alias_sum(&f)?;
    let nodes = rule.integrate(|x| Ok(f.evaluate_unchecked(x)))?;
    let dev = (direct - alias).norm().max((direct - nodes).norm());
    Ok((dev <= 1e-12, format!("max deviation {dev:e}")))
}

fn primes() -> Result<(bool, String)> {
    let bad = (0..5000u64).filter(|&n| lattice::is_prime(n) != oracles::trial_division_is_prime(n)).count();
    Ok((bad == 0, format!("{bad} disagreements below 5000")))
}

fn parseval() -> Result<(bool, String)> {
    let s = SpaceDescriptor::polynomial(2, 2.0, 1.0, 1.0)?;
    let f = FourierPolynomial::random_unit(&s, 10, 5, 1)?;
    let g = FourierPolynomial::random_unit(&s, 10, 5, 2)?.scale(Complex64::new(0.5, 0.0));
    let exact = f.l2_distance(&g)?.powi(2);
    let grid = oracles::grid_l2_distance_sq(&f, &g, 32)?;
    let dev = (exact - grid).abs();
    Ok((dev <= 1e-8, format!("Parseval {exact}, grid {grid}")))
}

fn verdicts() -> Result<(bool, String)> {
    let mut ok = true;
    for kappa in [0.0, 0.5, 1.0, 2.0] {
        for alpha in [0.5, 2.0] {
            let s = SpaceDescriptor::polynomial(3, alpha, 1.0, kappa)?;
            for setting in Setting::ALL {
                let v = verdict(&s, setting)?;
                ok &= (!v.strongly_tractable || v.tractable) && v.exponent_low <= v.exponent_high;
            }
        }
    }
    Ok((ok, "strong => tractable, low <= high".into()))
}

/// Runs every check; takes well under a second in release builds.
pub fn run() -> SelfTestReport {
    let checks = vec![
        check("index_set_vs_box_scan", index_sets),
        check("pmf_vs_statevector", pmf),
        check("lattice_error_forms", lattice_errors),
        check("lattice_sum_routes", lattice_sums),
        check("primality_vs_trial_division", primes),
        check("parseval_vs_grid_quadrature", parseval),
        check("verdict_invariants", verdicts),
    ];
    let all_passed = checks.iter().all(|c| c.passed);
    SelfTestReport { checks, all_passed }
}
