//! Weighted Korobov space descriptors.
//!
//! A space is fixed by its dimension `d`, smoothness `alpha >= 0` and a
//! non-increasing weight sequence `1 >= gamma_1 >= gamma_2 >= ... > 0`.
//! The norm weights the Fourier coefficient at `h` by
//! `r_alpha(gamma, h) = prod_j r_alpha(gamma_j, h_j)` where each factor is
//! `1` for `h_j = 0` and `|h_j|^alpha / gamma_j` otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{KorobovError, Result};
use crate::special;

/// The weight sequence `gamma_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawWeights")]
pub enum WeightSchedule {
    /// A finite list `gamma_1, ..., gamma_k`.
    Explicit { gammas: Vec<f64> },
    /// `gamma_j = c * j^{-kappa}`.
    Polynomial { c: f64, kappa: f64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawWeights {
    Explicit { gammas: Vec<f64> },
    Polynomial { c: f64, kappa: f64 },
}

impl TryFrom<RawWeights> for WeightSchedule {
    type Error = KorobovError;

    fn try_from(raw: RawWeights) -> Result<Self> {
        match raw {
            RawWeights::Explicit { gammas } => WeightSchedule::explicit(gammas),
            RawWeights::Polynomial { c, kappa } => WeightSchedule::polynomial(c, kappa),
        }
    }
}

impl WeightSchedule {
    pub fn explicit(gammas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(KorobovError::InvalidWeights("empty weight list".into()));
        }
        for (j, &g) in gammas.iter().enumerate() {
            if !(g > 0.0 && g <= 1.0) {
                return Err(KorobovError::InvalidWeights(format!(
                    "gamma_{} = {g} is outside (0, 1]",
                    j + 1
                )));
            }
        }
        if let Some(j) = gammas.windows(2).position(|w| w[1] > w[0]) {
            return Err(KorobovError::InvalidWeights(format!(
                "weights must be non-increasing: gamma_{} = {} < gamma_{} = {}",
                j + 1,
                gammas[j],
                j + 2,
                gammas[j + 1]
            )));
        }
        Ok(WeightSchedule::Explicit { gammas })
    }

    pub fn polynomial(c: f64, kappa: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(KorobovError::InvalidWeights(format!("scale c = {c} is outside (0, 1]")));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(KorobovError::InvalidWeights(format!("decay kappa = {kappa} must be >= 0")));
        }
        Ok(WeightSchedule::Polynomial { c, kappa })
    }

    /// Constant weights `gamma_j = c`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::polynomial(c, 0.0)
    }

    /// `gamma_j` for the 1-based coordinate index `j`, or `None` past the end
    /// of an explicit list.
    pub fn gamma(&self, j: usize) -> Option<f64> {
        assert!(j >= 1, "weights are indexed from 1");
        match self {
            WeightSchedule::Explicit { gammas } => gammas.get(j - 1).copied(),
            WeightSchedule::Polynomial { c, kappa } => Some(c * (j as f64).powf(-kappa)),
        }
    }

    /// Number of weights available, `None` for the infinite polynomial family.
    pub fn len(&self) -> Option<usize> {
        match self {
            WeightSchedule::Explicit { gammas } => Some(gammas.len()),
            WeightSchedule::Polynomial { .. } => None,
        }
    }
}

/// Sum-exponent `s_gamma = inf { s > 0 : sum_j gamma_j^s < inf }`.
///
/// Only the polynomial family carries an infinite sequence; for
/// `gamma_j = c j^{-kappa}` the value is `1/kappa` (infinite when `kappa = 0`).
pub fn sum_exponent(weights: &WeightSchedule) -> Result<f64> {
    match weights {
        WeightSchedule::Explicit { .. } => Err(KorobovError::InvalidParameter(
            "sum-exponent undefined for finite schedules".into(),
        )),
        WeightSchedule::Polynomial { kappa, .. } => {
            Ok(if *kappa == 0.0 { f64::INFINITY } else { 1.0 / kappa })
        }
    }
}

/// Riemann zeta `sum_{h>=1} h^{-alpha}` for `alpha > 1`.
pub fn zeta(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(KorobovError::Domain(format!(
            "zeta({alpha}) diverges: the series needs alpha > 1"
        )));
    }
    Ok(special::riemann_zeta(alpha))
}

/// One kernel factor `1 + 2 gamma sum_{h>=1} cos(2 pi h t)/h^alpha`.
pub fn kernel_factor(alpha: f64, gamma: f64, t: f64) -> f64 {
    1.0 + 2.0 * gamma * special::cosine_series(alpha, t)
}

/// `prod_j (1 + 2 gamma_j zeta(alpha))`; the empty product is 1.
pub fn kernel_diag_product(gammas: &[f64], alpha: f64) -> Result<f64> {
    let z = zeta(alpha)?;
    Ok(gammas.iter().map(|g| 1.0 + 2.0 * g * z).product())
}

/// A weighted Korobov space `H_d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceDescriptor {
    d: usize,
    alpha: f64,
    weights: WeightSchedule,
    #[serde(skip)]
    gammas: Vec<f64>,
    #[serde(skip)]
    inv_gammas: Vec<f64>,
}

impl SpaceDescriptor {
    pub fn new(d: usize, alpha: f64, weights: WeightSchedule) -> Result<Self> {
        if d == 0 {
            return Err(KorobovError::InvalidParameter("dimension d must be >= 1".into()));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(KorobovError::InvalidParameter(format!(
                "smoothness alpha = {alpha} must be a finite value >= 0"
            )));
        }
        if let Some(len) = weights.len() {
            if len < d {
                return Err(KorobovError::InvalidWeights(format!(
                    "{len} explicit weights given for dimension {d}"
                )));
            }
        }
        let gammas: Vec<f64> = (1..=d).map(|j| weights.gamma(j).expect("length checked")).collect();
        let inv_gammas = gammas.iter().map(|g| 1.0 / g).collect();
        Ok(Self { d, alpha, weights, gammas, inv_gammas })
    }

    /// Shorthand for `gamma_j = c j^{-kappa}`.
    pub fn polynomial(d: usize, alpha: f64, c: f64, kappa: f64) -> Result<Self> {
        Self::new(d, alpha, WeightSchedule::polynomial(c, kappa)?)
    }

    /// Same smoothness and schedule in another dimension.
    pub fn with_dimension(&self, d: usize) -> Result<Self> {
        Self::new(d, self.alpha, self.weights.clone())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weights(&self) -> &WeightSchedule {
        &self.weights
    }

    /// `gamma_1, ..., gamma_d`.
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// Fails unless `alpha > 1`, the range where point evaluation is continuous.
    pub fn require_kernel(&self) -> Result<()> {
        if self.alpha > 1.0 {
            Ok(())
        } else {
            Err(KorobovError::Domain(format!(
                "alpha = {} but the reproducing kernel needs alpha > 1",
                self.alpha
            )))
        }
    }

    pub(crate) fn check_dim(&self, len: usize) -> Result<()> {
        if len == self.d {
            Ok(())
        } else {
            Err(KorobovError::DimensionMismatch { expected: self.d, found: len })
        }
    }

    /// `r_alpha(gamma_j, h)` for the 0-based coordinate `coord`.
    ///
    /// For `alpha = 0` every factor is 1.
    #[inline]
    pub fn weight_factor(&self, coord: usize, h: i64) -> f64 {
        if h == 0 || self.alpha == 0.0 {
            1.0
        } else {
            self.inv_gammas[coord] * (h.unsigned_abs() as f64).powf(self.alpha)
        }
    }

    /// `r_alpha(gamma, h)`, multiplied left to right over the coordinates.
    ///
    /// # Panics
    /// If `h.len() != d`.
    pub fn weight_product(&self, h: &[i64]) -> f64 {
        assert_eq!(h.len(), self.d, "frequency vector has the wrong length");
        h.iter()
            .enumerate()
            .fold(1.0, |acc, (coord, &hj)| acc * self.weight_factor(coord, hj))
    }

    /// Reproducing kernel `K_d(x, y)`; real and translation invariant.
    pub fn kernel_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.require_kernel()?;
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(self
            .gammas
            .iter()
            .zip(x.iter().zip(y))
            .map(|(&g, (&xj, &yj))| kernel_factor(self.alpha, g, xj - yj))
            .product())
    }

    /// `K_d(y, y) = prod_j (1 + 2 gamma_j zeta(alpha))`.
    pub fn kernel_diag(&self) -> Result<f64> {
        self.require_kernel()?;
        kernel_diag_product(&self.gammas, self.alpha)
    }

    /// `exp(zeta(alpha) sum_j gamma_j)`, a bound on `|f(y)|` over the unit ball.
    pub fn sup_norm_bound(&self) -> Result<f64> {
        self.require_kernel()?;
        let z = zeta(self.alpha)?;
        Ok((z * self.gammas.iter().sum::<f64>()).exp())
    }

    /// The sharper bound `K_d(y, y)^{1/2}` on `|f(y)|` over the unit ball.
    pub fn sup_norm_bound_sharp(&self) -> Result<f64> {
        Ok(self.kernel_diag()?.sqrt())
    }

    /// `C(d) = 2^{d max(1, alpha/2)} prod_j (1 + 2 gamma_j zeta(alpha))^{1/2}`,
    /// the constant in `||f g||_d <= C(d) ||f||_d ||g||_d`.
    pub fn algebra_constant(&self) -> Result<f64> {
        let diag = self.kernel_diag()?;
        let exponent = self.d as f64 * f64::max(1.0, self.alpha / 2.0);
        Ok(2f64.powf(exponent) * diag.sqrt())
    }

    /// `(r_alpha(gamma, h) prod_m max(1, gamma_m 2^alpha))^{1/2}`, an upper
    /// bound on `||f_h||_d / ||f||_d` for the modulated function
    /// `f_h(x) = f(x) exp(-2 pi i h.x)`.
    pub fn shifted_norm_bound(&self, h: &[i64]) -> f64 {
        let two_alpha = 2f64.powf(self.alpha);
        let spread: f64 = self.gammas.iter().map(|g| f64::max(1.0, g * two_alpha)).product();
        (self.weight_product(h) * spread).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn explicit(d: usize, alpha: f64, gammas: &[f64]) -> SpaceDescriptor {
        SpaceDescriptor::new(d, alpha, WeightSchedule::explicit(gammas.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn weight_factor_examples() {
        let s = explicit(1, 2.0, &[0.5]);
        assert_eq!(s.weight_factor(0, 3), 18.0);
        assert_eq!(s.weight_factor(0, 0), 1.0);
        let s0 = explicit(1, 0.0, &[0.5]);
        assert_eq!(s0.weight_factor(0, 7), 1.0);
    }

    #[test]
    fn weight_product_examples() {
        assert_eq!(explicit(2, 2.0, &[1.0, 1.0]).weight_product(&[2, 3]), 36.0);
        assert_eq!(explicit(2, 2.0, &[1.0, 0.25]).weight_product(&[1, 1]), 4.0);
        assert_eq!(explicit(3, 1.7, &[0.9, 0.3, 0.1]).weight_product(&[0, 0, 0]), 1.0);
    }

    #[test]
    fn weights_are_validated() {
        assert!(WeightSchedule::explicit(vec![0.5, 0.7]).is_err());
        assert!(WeightSchedule::explicit(vec![1.5]).is_err());
        assert!(WeightSchedule::explicit(vec![0.0]).is_err());
        assert!(WeightSchedule::polynomial(0.0, 1.0).is_err());
        assert!(WeightSchedule::polynomial(1.0, -1.0).is_err());
        assert!(SpaceDescriptor::new(3, 2.0, WeightSchedule::explicit(vec![1.0, 0.5]).unwrap()).is_err());
        assert!(SpaceDescriptor::polynomial(0, 2.0, 1.0, 1.0).is_err());
        assert!(SpaceDescriptor::polynomial(1, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn constant_weights_from_zero_decay() {
        let w = WeightSchedule::polynomial(0.7, 0.0).unwrap();
        assert_eq!(w.gamma(1), Some(0.7));
        assert_eq!(w.gamma(50), Some(0.7));
    }

    #[test]
    fn weights_deserialize_with_validation() {
        let w: WeightSchedule = serde_json::from_str(r#"{"kind":"polynomial","c":1.0,"kappa":2.0}"#).unwrap();
        assert_eq!(w, WeightSchedule::Polynomial { c: 1.0, kappa: 2.0 });
        let bad = serde_json::from_str::<WeightSchedule>(r#"{"kind":"explicit","gammas":[0.2,0.4]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn zeta_domain() {
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
        assert!((zeta(2.0).unwrap() - 1.644_934_066_848_226_4).abs() < 1e-15);
        assert!((zeta(4.0).unwrap() - 1.082_323_233_711_138_2).abs() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        let s = explicit(1, 2.0, &[1.0]);
        let diag = 1.0 + 2.0 * PI * PI / 6.0;
        assert!((s.kernel_eval(&[0.3], &[0.3]).unwrap() - diag).abs() < 1e-12);
        let half = 1.0 + 2.0 * PI * PI * (0.25 - 0.5 + 1.0 / 6.0);
        assert!((s.kernel_eval(&[0.75], &[0.25]).unwrap() - half).abs() < 1e-12);
        assert!((half + 0.644_934_066_848).abs() < 1e-9);
        let s2 = explicit(2, 2.0, &[1.0, 1.0]);
        assert!((s2.kernel_eval(&[0.1, 0.2], &[0.1, 0.2]).unwrap() - diag * diag).abs() < 1e-11);
        assert!(explicit(1, 1.0, &[1.0]).kernel_eval(&[0.0], &[0.0]).is_err());
        assert!(s.kernel_eval(&[0.0, 0.1], &[0.0]).is_err());
    }

    #[test]
    fn kernel_diag_examples() {
        let s = explicit(1, 2.0, &[1.0]);
        assert!((s.kernel_diag().unwrap() - 4.289_868_133_696_453).abs() < 1e-12);
        let s3 = SpaceDescriptor::polynomial(3, 2.0, 1.0, 2.0).unwrap();
        let z = PI * PI / 6.0;
        let expected = (1.0 + 2.0 * z) * (1.0 + 2.0 * z / 4.0) * (1.0 + 2.0 * z / 9.0);
        assert!((s3.kernel_diag().unwrap() - expected).abs() < 1e-12);
        assert_eq!(kernel_diag_product(&[], 2.0).unwrap(), 1.0);
    }

    #[test]
    fn sup_norm_bounds() {
        let s = explicit(1, 2.0, &[1.0]);
        assert!((s.sup_norm_bound().unwrap() - (PI * PI / 6.0).exp()).abs() < 1e-12);
        assert!((s.sup_norm_bound_sharp().unwrap() - 2.071_199_6).abs() < 1e-6);
        let tiny = explicit(2, 2.0, &[1e-14, 1e-14]);
        assert!((tiny.sup_norm_bound().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn algebra_constant_examples() {
        let s = explicit(1, 2.0, &[1.0]);
        assert!((s.algebra_constant().unwrap() - 2.0 * 4.289_868_133_696_453f64.sqrt()).abs() < 1e-12);
        let s3 = explicit(2, 3.0, &[1.0, 1.0]);
        let expected = 8.0 * (1.0 + 2.0 * 1.202_056_903_159_594_2);
        assert!((s3.algebra_constant().unwrap() - expected).abs() < 1e-11);
        assert!((expected - 27.233).abs() < 1e-3);
        // log2 C(d) is linear in d for constant weights.
        let logs: Vec<f64> = (1..6)
            .map(|d| SpaceDescriptor::polynomial(d, 2.0, 1.0, 0.0).unwrap().algebra_constant().unwrap().log2())
            .collect();
        let steps: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.iter().all(|s| (s - steps[0]).abs() < 1e-12));
    }

    #[test]
    fn sum_exponent_examples() {
        let poly = |k| WeightSchedule::polynomial(1.0, k).unwrap();
        assert_eq!(sum_exponent(&poly(2.0)).unwrap(), 0.5);
        assert_eq!(sum_exponent(&poly(1.0)).unwrap(), 1.0);
        assert_eq!(sum_exponent(&poly(0.0)).unwrap(), f64::INFINITY);
        assert!(sum_exponent(&WeightSchedule::explicit(vec![1.0]).unwrap()).is_err());
    }

    /// Direct maximisation of `r(j) / r(h + j)` over `|j| <= 10^4`.
    fn shifted_ratio_oracle(alpha: f64, gamma: f64, h: i64) -> f64 {
        let r = |k: i64| if k == 0 { 1.0 } else { (k.abs() as f64).powf(alpha) / gamma };
        (-10_000..=10_000).map(|j| r(j) / r(h + j)).fold(0.0, f64::max)
    }

    #[test]
    fn shifted_norm_bound_examples() {
        let s = explicit(1, 2.0, &[1.0]);
        assert!((s.shifted_norm_bound(&[1]) - 2.0).abs() < 1e-15);
        assert!((shifted_ratio_oracle(2.0, 1.0, 1).sqrt() - 2.0).abs() < 1e-12);

        let s = explicit(1, 2.0, &[0.1]);
        assert!((s.shifted_norm_bound(&[2]) - 40f64.sqrt()).abs() < 1e-12);
        assert!(shifted_ratio_oracle(2.0, 0.1, 2).sqrt() <= 40f64.sqrt() + 1e-12);

        let s = explicit(2, 2.0, &[1.0, 0.1]);
        let spread: f64 = 4.0 * 1.0;
        assert!((s.shifted_norm_bound(&[0, 0]) - spread.sqrt()).abs() < 1e-15);
    }
}
