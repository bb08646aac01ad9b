//! Special functions backing the kernel and zeta computations.
//!
//! Everything here works in `f64`. The Hurwitz zeta function is computed by
//! Euler-Maclaurin summation; the Riemann zeta function reuses it for
//! `s >= 0` and the functional equation for `s < 0`. The periodic cosine
//! series `sum_{h>=1} cos(2 pi h t) / h^s` has three evaluation paths:
//! Bernoulli polynomials for small even `s`, the expansion of the
//! polylogarithm around `|z| = 1` for other moderate `s`, and certified
//! direct summation otherwise.

use std::f64::consts::PI;

/// `B_{2j}` for `j = 1..=15`.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Largest even exponent evaluated through Bernoulli polynomials.
pub(crate) const MAX_CLOSED_FORM_EVEN: u32 = 12;

/// Largest exponent evaluated through the polylogarithm expansion; above it
/// direct summation converges in a handful of terms.
const MAX_EXPANSION_EXPONENT: f64 = 12.0;

/// Distance to an odd integer below which the non-integer expansion loses
/// too many digits to cancellation.
const ODD_INTEGER_GUARD: f64 = 1e-6;

const DIRECT_SUM_TOLERANCE: f64 = 1e-13;

/// Bernoulli number `B_n` for `n <= 30`.
pub fn bernoulli_number(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => -0.5,
        n if n % 2 == 1 => 0.0,
        n if n <= 30 => BERNOULLI_EVEN[n / 2 - 1],
        _ => panic!("Bernoulli numbers are tabulated up to n = 30"),
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Bernoulli polynomial `B_n(x)` for `n <= 30`.
pub fn bernoulli_polynomial(n: usize, x: f64) -> f64 {
    // Horner over the expansion sum_k C(n,k) B_k x^{n-k}.
    (0..=n).fold(0.0, |acc, k| acc * x + binomial(n, k) * bernoulli_number(k))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on the real line (Lanczos approximation with reflection).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        let series = LANCZOS_COEFFS[1..]
            .iter()
            .enumerate()
            .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (x + (i + 1) as f64));
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * series
    }
}

/// Hurwitz zeta `sum_{k>=0} (k+q)^{-s}` for `s != 1`, `q > 0`.
///
/// Euler-Maclaurin with the direct part running until `k + q >= 16 + |s|`.
/// For `s < 1` the result is the analytic continuation.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(q > 0.0);
    if s == 1.0 {
        return f64::INFINITY;
    }
    let n = (16.0 + s.abs()).ceil() as usize;
    let mut direct: f64 = (0..n).rev().map(|k| (k as f64 + q).powf(-s)).sum();
    let a = n as f64 + q;
    let mut tail = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    let mut factor = s * a.powf(-s - 1.0);
    let inv_a2 = 1.0 / (a * a);
    let mut fact = 2.0; // (2j)!
    for j in 1..=BERNOULLI_EVEN.len() {
        let term = BERNOULLI_EVEN[j - 1] / fact * factor;
        tail += term;
        if term.abs() < 1e-18 * (direct + tail).abs() {
            break;
        }
        let jj = 2.0 * j as f64;
        factor *= (s + jj - 1.0) * (s + jj) * inv_a2;
        fact *= (jj + 1.0) * (jj + 2.0);
    }
    direct += tail;
    direct
}

/// Riemann zeta on the real line, including the analytic continuation.
pub fn riemann_zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s >= 0.0 {
        return hurwitz_zeta(s, 1.0);
    }
    if s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return 0.0;
    }
    // Functional equation.
    2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(1.0 - s) * riemann_zeta(1.0 - s)
}

/// Harmonic number `H_n`.
fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Evaluation path used by [`cosine_series`]; exposed so tests can force
/// one path against another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosineSeriesPath {
    Bernoulli,
    PolylogExpansion,
    PolylogOddInteger,
    Direct,
}

/// Which path [`cosine_series`] takes for exponent `s`.
pub fn cosine_series_path(s: f64) -> CosineSeriesPath {
    let rounded = s.round();
    let is_int = s == rounded;
    if is_int && rounded as i64 % 2 == 0 && rounded <= MAX_CLOSED_FORM_EVEN as f64 {
        CosineSeriesPath::Bernoulli
    } else if s > MAX_EXPANSION_EXPONENT {
        CosineSeriesPath::Direct
    } else if is_int {
        CosineSeriesPath::PolylogOddInteger
    } else if rounded as i64 % 2 == 1 && (s - rounded).abs() < ODD_INTEGER_GUARD && s >= 2.0 {
        CosineSeriesPath::Direct
    } else {
        CosineSeriesPath::PolylogExpansion
    }
}

/// `sum_{h>=1} cos(2 pi h t) / h^s` for `s > 1`, any real `t`.
pub fn cosine_series(s: f64, t: f64) -> f64 {
    debug_assert!(s > 1.0);
    let mut t = t - t.floor();
    if t >= 1.0 {
        t = 0.0;
    }
    // Even in t about 1/2.
    if t > 0.5 {
        t = 1.0 - t;
    }
    match cosine_series_path(s) {
        CosineSeriesPath::Bernoulli => cosine_series_bernoulli(s as u32, t),
        CosineSeriesPath::PolylogExpansion => cosine_series_expansion(s, t),
        CosineSeriesPath::PolylogOddInteger => cosine_series_odd_integer(s as u32, t),
        CosineSeriesPath::Direct => {
            cosine_series_truncated(s, t, DIRECT_SUM_TOLERANCE, u64::MAX)
                .expect("uncapped direct summation")
                .0
        }
    }
}

/// Closed form for even exponent `2k`, valid for `t` in `[0, 1]`.
pub fn cosine_series_bernoulli(two_k: u32, t: f64) -> f64 {
    debug_assert!(two_k % 2 == 0 && two_k >= 2);
    let k = two_k / 2;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let fact: f64 = (1..=two_k).map(f64::from).product();
    sign * (2.0 * PI).powi(two_k as i32) / (2.0 * fact) * bernoulli_polynomial(two_k as usize, t)
}

/// Real part of the expansion
/// `Li_s(e^mu) = Gamma(1-s)(-mu)^{s-1} + sum_k zeta(s-k) mu^k / k!`
/// at `mu = 2 pi i t`, non-integer `s`, `0 <= t <= 1/2`.
fn cosine_series_expansion(s: f64, t: f64) -> f64 {
    let x = 2.0 * PI * t;
    let singular = if t == 0.0 {
        0.0
    } else {
        gamma(1.0 - s) * x.powf(s - 1.0) * (PI * (s - 1.0) / 2.0).cos()
    };
    singular + even_power_series(s, x, None)
}

/// `sum_{m>=0, 2m != skip} zeta(s-2m) (-1)^m x^{2m} / (2m)!`.
fn even_power_series(s: f64, x: f64, skip: Option<u32>) -> f64 {
    let x2 = x * x;
    let mut power = 1.0; // (-1)^m x^{2m} / (2m)!
    let mut total = 0.0;
    for m in 0..200u32 {
        if skip != Some(2 * m) {
            let term = riemann_zeta(s - 2.0 * m as f64) * power;
            total += term;
            if m > 2 && term.abs() < 1e-17 * total.abs().max(1e-300) {
                break;
            }
        }
        let k = 2.0 * m as f64;
        power *= -x2 / ((k + 1.0) * (k + 2.0));
        if power == 0.0 {
            break;
        }
    }
    total
}

/// Odd integer `n >= 3`: the pole of `zeta(s-k)` at `k = n-1` merges with the
/// Gamma pole into a logarithmic term.
fn cosine_series_odd_integer(n: u32, t: f64) -> f64 {
    if t == 0.0 {
        return riemann_zeta(n as f64);
    }
    let x = 2.0 * PI * t;
    let q = (n - 1) / 2;
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let fact: f64 = (1..=2 * q).map(f64::from).product();
    let log_term = sign * x.powi(2 * q as i32) / fact * (harmonic(2 * q) - x.ln());
    log_term + even_power_series(n as f64, x, Some(n - 1))
}

/// Direct summation `sum_{h=1}^{H} cos(2 pi h t) / h^s` with `H` chosen so
/// that the tail is certified below `tol`, using the smaller of the bounds
/// `H^{1-s}/(s-1)` (absolute convergence) and `(H+1)^{-s}/|sin(pi t)|`
/// (Dirichlet test). Returns `(value, H)` or `None` if `H` would exceed
/// `max_terms`.
pub fn cosine_series_truncated(s: f64, t: f64, tol: f64, max_terms: u64) -> Option<(f64, u64)> {
    debug_assert!(s > 1.0 && tol > 0.0);
    let h_abs = (1.0 / ((s - 1.0) * tol)).powf(1.0 / (s - 1.0)).ceil();
    let sin = (PI * t).sin().abs();
    let h_dir = if sin > 0.0 {
        ((1.0 / (tol * sin)).powf(1.0 / s) - 1.0).max(1.0).ceil()
    } else {
        f64::INFINITY
    };
    let h = h_abs.min(h_dir).max(1.0);
    if !h.is_finite() || h > max_terms as f64 {
        return None;
    }
    let h = h as u64;
    let value = (1..=h)
        .rev()
        .map(|k| {
            let kf = k as f64;
            // Reduce k t modulo 1 before taking the cosine.
            let phase = (kf * t).fract();
            (2.0 * PI * phase).cos() / kf.powf(s)
        })
        .sum();
    Some((value, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_factorials_and_half_integers() {
        for n in 1..15u32 {
            let fact: f64 = (1..n).map(f64::from).product();
            assert!((gamma(n as f64) / fact - 1.0).abs() < 1e-13, "n={n}");
        }
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn zeta_known_values() {
        assert!((riemann_zeta(2.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((riemann_zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((riemann_zeta(0.0) + 0.5).abs() < 1e-14);
        assert!((riemann_zeta(-1.0) + 1.0 / 12.0).abs() < 1e-14);
        assert!((riemann_zeta(-3.0) - 1.0 / 120.0).abs() < 1e-14);
        assert_eq!(riemann_zeta(-2.0), 0.0);
        assert!((riemann_zeta(0.5) + 1.460_354_508_809_586_8).abs() < 1e-13);
    }

    #[test]
    fn hurwitz_reduces_to_riemann_shift() {
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        for &s in &[1.5, 2.0, 3.3, 6.0] {
            let lhs = hurwitz_zeta(s, 0.5);
            let rhs = (2f64.powf(s) - 1.0) * riemann_zeta(s);
            assert!((lhs - rhs).abs() < 1e-13 * rhs.abs(), "s={s}");
        }
    }

    #[test]
    fn bernoulli_polynomials_low_order() {
        let x: f64 = 0.3;
        assert!((bernoulli_polynomial(2, x) - (x * x - x + 1.0 / 6.0)).abs() < 1e-15);
        let b4 = x.powi(4) - 2.0 * x.powi(3) + x * x - 1.0 / 30.0;
        assert!((bernoulli_polynomial(4, x) - b4).abs() < 1e-15);
    }

    #[test]
    fn closed_form_at_half_for_square() {
        let v = cosine_series_bernoulli(2, 0.5);
        assert!((v - PI * PI * (0.25 - 0.5 + 1.0 / 6.0)).abs() < 1e-15);
        assert!((cosine_series(2.0, 0.0) - PI * PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn all_paths_agree_with_certified_direct_sum() {
        let ts = [0.0, 0.03, 0.17, 0.25, 0.4, 0.5, 0.61, 0.93];
        for &s in &[1.5, 2.0, 2.5, 3.0, 3.7, 4.0, 5.0, 7.25, 11.0, 13.5] {
            for &t in &ts {
                let fast = cosine_series(s, t);
                let Some((oracle, _)) = cosine_series_truncated(s, t, 1e-11, 50_000_000) else {
                    continue;
                };
                assert!((fast - oracle).abs() < 1e-10, "s={s} t={t} fast={fast} oracle={oracle}");
            }
        }
    }

    #[test]
    fn path_dispatch() {
        assert_eq!(cosine_series_path(2.0), CosineSeriesPath::Bernoulli);
        assert_eq!(cosine_series_path(3.0), CosineSeriesPath::PolylogOddInteger);
        assert_eq!(cosine_series_path(2.5), CosineSeriesPath::PolylogExpansion);
        assert_eq!(cosine_series_path(3.0 + 1e-8), CosineSeriesPath::Direct);
        assert_eq!(cosine_series_path(14.0), CosineSeriesPath::Direct);
    }
}
