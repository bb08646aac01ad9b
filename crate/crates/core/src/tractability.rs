//! Tractability conditions for the polynomial weight family
//! `gamma_j = c j^{-kappa}`, growth of `|R(eps, d)|`, and cost comparisons
//! between the randomized and the quantum algorithm.

use serde::{Deserialize, Serialize};

use crate::error::{KorobovError, Result};
use crate::format::fmt_f64;
use crate::index_set;
use crate::quantum::resources::cost_model_quantum;
use crate::randomized::cost_model_randomized;
use crate::space::{self, SpaceDescriptor, WeightSchedule};
use crate::stats::inverse_power_exponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// Worst case, arbitrary linear functionals.
    WorstAll,
    /// Worst case, function values.
    WorstStd,
    /// Randomized, function values.
    RandomizedStd,
    /// Quantum, function values.
    QuantumStd,
}

impl Setting {
    pub const ALL: [Setting; 4] = [Setting::WorstAll, Setting::WorstStd, Setting::RandomizedStd, Setting::QuantumStd];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TractabilityVerdict {
    pub setting: Setting,
    pub strongly_tractable: bool,
    pub tractable: bool,
    pub exponent_low: f64,
    pub exponent_high: f64,
    pub notes: String,
}

fn polynomial_params(space: &SpaceDescriptor) -> Result<(f64, f64)> {
    match space.weights() {
        WeightSchedule::Polynomial { c, kappa } => Ok((*c, *kappa)),
        WeightSchedule::Explicit { .. } => Err(KorobovError::InvalidParameter(
            "tractability needs the polynomial weight family".into(),
        )),
    }
}

/// `p*(all) = 2 max(s_gamma, 1/alpha)`; infinite when `kappa = 0` or `alpha = 0`.
pub fn exponent_all(space: &SpaceDescriptor) -> Result<f64> {
    polynomial_params(space)?;
    let s = space::sum_exponent(space.weights())?;
    let alpha = space.alpha();
    if alpha == 0.0 || !s.is_finite() {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * s.max(1.0 / alpha))
}

fn intractable(setting: Setting, notes: String) -> TractabilityVerdict {
    TractabilityVerdict {
        setting,
        strongly_tractable: false,
        tractable: false,
        exponent_low: f64::INFINITY,
        exponent_high: f64::INFINITY,
        notes,
    }
}

/// Analytic verdict for one setting.
pub fn verdict(space: &SpaceDescriptor, setting: Setting) -> Result<TractabilityVerdict> {
    let (c, kappa) = polynomial_params(space)?;
    let alpha = space.alpha();
    let p = exponent_all(space)?;
    let all_ok = alpha > 0.0 && kappa > 0.0;
    let why_not = if alpha == 0.0 {
        "alpha = 0: every eigenvalue equals one".to_string()
    } else {
        "kappa = 0: the sum-exponent is infinite".to_string()
    };
    let v = match setting {
        Setting::WorstAll => {
            if !all_ok {
                return Ok(intractable(setting, why_not));
            }
            TractabilityVerdict {
                setting,
                strongly_tractable: true,
                tractable: true,
                exponent_low: p,
                exponent_high: p,
                notes: "strong tractability and tractability are equivalent".into(),
            }
        }
        Setting::WorstStd => {
            if alpha <= 1.0 {
                return Ok(intractable(setting, "alpha <= 1: function values are not continuous".into()));
            }
            if kappa > 1.0 {
                TractabilityVerdict {
                    setting,
                    strongly_tractable: true,
                    tractable: true,
                    exponent_low: p,
                    exponent_high: p + 2.0,
                    notes: "sum of weights finite".into(),
                }
            } else if kappa == 1.0 {
                let a = c;
                TractabilityVerdict {
                    setting,
                    strongly_tractable: false,
                    tractable: true,
                    exponent_low: p,
                    exponent_high: 2.0,
                    notes: format!(
                        "sum of weights grows like {a} ln d; cost <= C eps^-(2+delta) d^({}+delta)",
                        4.0 * space::zeta(alpha)? * a
                    ),
                }
            } else {
                intractable(setting, "sum of weights grows faster than ln d".into())
            }
        }
        Setting::RandomizedStd => {
            if !all_ok {
                return Ok(intractable(setting, why_not));
            }
            let mut notes = "same conditions as for arbitrary functionals".to_string();
            if alpha <= 1.0 {
                notes.push_str("; alpha <= 1 allowed with random points from [0,1]");
            }
            TractabilityVerdict {
                setting,
                strongly_tractable: true,
                tractable: true,
                exponent_low: p,
                exponent_high: p + 2.0,
                notes,
            }
        }
        Setting::QuantumStd => {
            if alpha <= 1.0 || kappa == 0.0 {
                return Ok(intractable(
                    setting,
                    "no quantum upper bound: needs alpha > 1 and a finite sum-exponent".into(),
                ));
            }
            TractabilityVerdict {
                setting,
                strongly_tractable: true,
                tractable: true,
                exponent_low: 0.0,
                exponent_high: 1.0 + 1.5 * p,
                notes: "upper bound only: total cost exponent of eps^-1".into(),
            }
        }
    };
    Ok(v)
}

/// One row of a growth study; `r_size` is `None` when the cap was hit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub epsilon: f64,
    pub d: usize,
    pub r_size: Option<u64>,
    /// Fitted exponent of `|R|` in `1/eps` for this row's dimension.
    pub fitted_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthStudy {
    pub rows: Vec<GrowthRow>,
    /// Dimensions whose fitted slope exceeds `p* + 0.5`.
    pub flagged: Vec<usize>,
}

/// `|R(eps, d)|` over a grid, with a log-log slope per dimension.
pub fn growth_study(space: &SpaceDescriptor, epsilons: &[f64], dims: &[usize], cap: u64) -> Result<GrowthStudy> {
    let p = exponent_all(space)?;
    let mut rows = Vec::new();
    let mut flagged = Vec::new();
    for &d in dims {
        let s = space.with_dimension(d)?;
        let mut block: Vec<GrowthRow> = Vec::new();
        for &eps in epsilons {
            let r_size = match index_set::count(&s, eps, cap) {
                Ok(n) => Some(n),
                Err(KorobovError::CapExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            block.push(GrowthRow { epsilon: eps, d, r_size, fitted_slope: None });
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            block.iter().filter_map(|r| r.r_size.map(|n| (r.epsilon, n as f64))).unzip();
        let slope = (xs.len() >= 2).then(|| inverse_power_exponent(&xs, &ys));
        if slope.is_some_and(|v| v > p + 0.5) {
            flagged.push(d);
        }
        for r in &mut block {
            r.fitted_slope = slope;
        }
        rows.extend(block);
    }
    Ok(GrowthStudy { rows, flagged })
}

impl GrowthStudy {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,d,R_size,fitted_slope\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(r.epsilon),
                r.d,
                r.r_size.map(|n| n.to_string()).unwrap_or_else(|| "skipped".into()),
                r.fitted_slope.map(fmt_f64).unwrap_or_default()
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupRow {
    pub epsilon: f64,
    pub cost_rand: f64,
    pub cost_quantum: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupTable {
    pub rows: Vec<SpeedupRow>,
    pub rand_exponent: f64,
    pub quantum_exponent: f64,
    pub ratio_exponent: f64,
}

/// Randomized against quantum total cost from the two cost models.
pub fn speedup_table(space: &SpaceDescriptor, epsilons: &[f64], c_of_d: impl Fn(usize) -> f64) -> Result<SpeedupTable> {
    space.require_kernel()?;
    if epsilons.len() < 2 {
        return Err(KorobovError::InvalidParameter("need at least two epsilon values".into()));
    }
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let cost_rand = cost_model_randomized(space, eps, &c_of_d)?.total;
        let cost_quantum = cost_model_quantum(space, eps, &c_of_d)?.total_cost;
        rows.push(SpeedupRow { epsilon: eps, cost_rand, cost_quantum, ratio: cost_rand / cost_quantum });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    let fit = |f: fn(&SpeedupRow) -> f64| inverse_power_exponent(&x, &rows.iter().map(f).collect::<Vec<_>>());
    Ok(SpeedupTable {
        rand_exponent: fit(|r| r.cost_rand),
        quantum_exponent: fit(|r| r.cost_quantum),
        ratio_exponent: fit(|r| r.ratio),
        rows,
    })
}

impl SpeedupTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,cost_rand,cost_quantum,ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(r.epsilon),
                fmt_f64(r.cost_rand),
                fmt_f64(r.cost_quantum),
                fmt_f64(r.ratio)
            ));
        }
        out
    }
}
