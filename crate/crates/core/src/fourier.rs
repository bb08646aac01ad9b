//! Sparse trigonometric polynomials on the unit cube.
//!
//! A [`FourierPolynomial`] stores finitely many coefficients `f^(h)`; every
//! norm and distance is then an exact finite sum by Parseval.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{KorobovError, Result};
use crate::space::SpaceDescriptor;

/// Integer frequency vector `h` in `Z^d`.
pub type Frequency = Vec<i64>;

/// `exp(2 pi i t)` with `t` reduced modulo one first.
#[inline]
pub fn unit_phase(t: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * (t - t.floor())).sin_cos();
    Complex64::new(c, s)
}

/// `h . x` accumulated in double precision.
#[inline]
pub fn dot(h: &[i64], x: &[f64]) -> f64 {
    h.iter().zip(x).map(|(&hj, &xj)| hj as f64 * xj).sum()
}

/// A point of `[0,1)^d`; coordinates are reduced modulo one on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationPoint(Vec<f64>);

impl EvaluationPoint {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        let mut coords = coords.into();
        for c in coords.iter_mut() {
            *c -= c.floor();
            if *c >= 1.0 {
                *c = 0.0;
            }
        }
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Finite Fourier series `sum_h f^(h) exp(2 pi i h.x)` on `[0,1]^d`.
///
/// Zero coefficients are never stored and iteration is in lexicographic
/// order of the frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolynomialJson", try_from = "PolynomialJson")]
pub struct FourierPolynomial {
    d: usize,
    coeffs: BTreeMap<Frequency, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    h: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    d: usize,
    terms: Vec<TermJson>,
}

impl From<FourierPolynomial> for PolynomialJson {
    fn from(f: FourierPolynomial) -> Self {
        PolynomialJson {
            d: f.d,
            terms: f
                .coeffs
                .into_iter()
                .map(|(h, c)| TermJson { h, re: c.re, im: c.im })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for FourierPolynomial {
    type Error = KorobovError;

    fn try_from(json: PolynomialJson) -> Result<Self> {
        FourierPolynomial::from_terms(
            json.d,
            json.terms.into_iter().map(|t| (t.h, Complex64::new(t.re, t.im))),
        )
    }
}

impl FourierPolynomial {
    /// The zero polynomial in dimension `d`.
    pub fn zero(d: usize) -> Self {
        Self { d, coeffs: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: Complex64) -> Self {
        let mut f = Self::zero(d);
        f.add_term(vec![0; d], c);
        f
    }

    /// Builds a polynomial from `(h, coefficient)` pairs; repeated
    /// frequencies are summed.
    pub fn from_terms<I>(d: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Frequency, Complex64)>,
    {
        let mut f = Self::zero(d);
        for (h, c) in terms {
            if h.len() != d {
                return Err(KorobovError::DimensionMismatch { expected: d, found: h.len() });
            }
            f.add_term(h, c);
        }
        Ok(f)
    }

    /// Unit-norm basis function `f_h(x) = exp(2 pi i h.x) / r_alpha(gamma, h)^{1/2}`.
    pub fn basis(space: &SpaceDescriptor, h: &[i64]) -> Result<Self> {
        space.check_dim(h.len())?;
        let c = 1.0 / space.weight_product(h).sqrt();
        Ok(Self::constant_at(h.to_vec(), Complex64::new(c, 0.0)))
    }

    /// A single term `c exp(2 pi i h.x)`.
    pub fn constant_at(h: Frequency, c: Complex64) -> Self {
        let mut f = Self::zero(h.len());
        f.add_term(h, c);
        f
    }

    fn add_term(&mut self, h: Frequency, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(h) {
            Entry::Vacant(v) => {
                if c != Complex64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(KorobovError::DimensionMismatch { expected: self.d, found: other.d })
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of stored (non-zero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient `f^(h)`, zero when absent.
    pub fn coeff(&self, h: &[i64]) -> Complex64 {
        self.coeffs.get(h).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Frequency, &Complex64)> {
        self.coeffs.iter()
    }

    /// `f(x) = sum_h f^(h) exp(2 pi i h.x)`.
    pub fn evaluate(&self, x: &EvaluationPoint) -> Result<Complex64> {
        if x.dim() != self.d {
            return Err(KorobovError::DimensionMismatch { expected: self.d, found: x.dim() });
        }
        Ok(self.evaluate_unchecked(x.coords()))
    }

    /// Evaluation without the dimension check; `x` must have length `d`.
    #[inline]
    pub fn evaluate_unchecked(&self, x: &[f64]) -> Complex64 {
        self.coeffs.iter().map(|(h, c)| c * unit_phase(dot(h, x))).sum()
    }

    /// `||f||_d = (sum_h r_alpha(gamma, h) |f^(h)|^2)^{1/2}`.
    pub fn korobov_norm(&self, space: &SpaceDescriptor) -> Result<f64> {
        space.check_dim(self.d)?;
        Ok(self
            .coeffs
            .iter()
            .map(|(h, c)| space.weight_product(h) * c.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `L_2` norm, `(sum_h |f^(h)|^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||f - g||_{L_2}` over the union of the supports.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        let keys: BTreeSet<&Frequency> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        Ok(keys
            .into_iter()
            .map(|h| (self.coeff(h) - other.coeff(h)).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Pointwise product, i.e. the exact convolution of the coefficients.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut acc: BTreeMap<Frequency, Complex64> = BTreeMap::new();
        for (j, a) in &self.coeffs {
            for (k, b) in &other.coeffs {
                let h: Frequency = j.iter().zip(k).map(|(x, y)| x + y).collect();
                *acc.entry(h).or_default() += a * b;
            }
        }
        acc.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        Ok(Self { d: self.d, coeffs: acc })
    }

    /// Complex conjugate function: `conj(f)^(h) = conj(f^(-h))`.
    pub fn conjugate(&self) -> Self {
        Self {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .map(|(h, c)| (h.iter().map(|x| -x).collect(), c.conj()))
                .collect(),
        }
    }

    /// `|f|^2 = f * conj(f)`.
    pub fn abs_squared(&self) -> Self {
        self.multiply(&self.conjugate()).expect("same dimension")
    }

    /// `f(x) exp(-2 pi i h.x)`: every frequency `k` moves to `k - h`.
    pub fn modulate(&self, h: &[i64]) -> Result<Self> {
        if h.len() != self.d {
            return Err(KorobovError::DimensionMismatch { expected: self.d, found: h.len() });
        }
        Ok(Self {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.iter().zip(h).map(|(a, b)| a - b).collect(), *c))
                .collect(),
        })
    }

    /// `INT_d(f) = f^(0)`.
    pub fn integral(&self) -> Complex64 {
        self.coeffs.get(&vec![0; self.d]).copied().unwrap_or_default()
    }

    /// Scales every coefficient.
    pub fn scale(&self, factor: Complex64) -> Self {
        let mut coeffs: BTreeMap<_, _> = self.coeffs.iter().map(|(h, c)| (h.clone(), c * factor)).collect();
        coeffs.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        Self { d: self.d, coeffs }
    }

    /// Keeps only the coefficients whose frequency satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[i64]) -> bool) -> Self {
        Self {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(h, _)| keep(h))
                .map(|(h, c)| (h.clone(), *c))
                .collect(),
        }
    }

    /// Random polynomial with `support_size` distinct frequencies drawn from
    /// the box `[-max_freq, max_freq]^d` and complex Gaussian coefficients,
    /// rescaled to unit Korobov norm. Deterministic in `seed`.
    pub fn random_unit(space: &SpaceDescriptor, support_size: usize, max_freq: u32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        Self::random_unit_with(space, support_size, max_freq, &mut rng)
    }

    pub fn random_unit_with<R: Rng + ?Sized>(
        space: &SpaceDescriptor,
        support_size: usize,
        max_freq: u32,
        rng: &mut R,
    ) -> Result<Self> {
        if support_size == 0 {
            return Err(KorobovError::InvalidParameter("support_size must be >= 1".into()));
        }
        let d = space.dim();
        let side = 2 * max_freq as u64 + 1;
        let total = (side as f64).powi(d as i32);
        if support_size as f64 > total {
            return Err(KorobovError::InvalidParameter(format!(
                "support_size {support_size} exceeds the {total} lattice points of the box"
            )));
        }
        let decode = |mut idx: u64| -> Frequency {
            (0..d)
                .map(|_| {
                    let digit = idx % side;
                    idx /= side;
                    digit as i64 - max_freq as i64
                })
                .collect()
        };
        let freqs: Vec<Frequency> = if total <= (1u64 << 24) as f64 {
            index::sample(rng, total as usize, support_size)
                .into_iter()
                .map(|i| decode(i as u64))
                .collect()
        } else {
            let mut seen = BTreeSet::new();
            let mut out = Vec::with_capacity(support_size);
            while out.len() < support_size {
                let h: Frequency = (0..d)
                    .map(|_| rng.random_range(-(max_freq as i64)..=max_freq as i64))
                    .collect();
                if seen.insert(h.clone()) {
                    out.push(h);
                }
            }
            out
        };
        let mut terms = Vec::with_capacity(support_size);
        for h in freqs {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            terms.push((h, Complex64::new(re, im)));
        }
        let f = Self::from_terms(d, terms)?;
        let norm = f.korobov_norm(space)?;
        Ok(f.scale(Complex64::new(1.0 / norm, 0.0)))
    }
}
