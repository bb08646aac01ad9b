//! Rank-1 lattice rules `Q(f) = N^{-1} sum_j f({j z / N})` with prime `N`.
//!
//! The worst-case error over the unit ball of `H_d` is available in two
//! independent forms. The kernel form averages `K_d(x_j, 0)` over the nodes.
//! The dual form sums `r_alpha^{-1}(gamma, h)` over the dual lattice
//! `{h : h.z = 0 mod N}`, grouped by residue classes of `h mod N`, where each
//! class sum is a pair of Hurwitz zeta values.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KorobovError, Result};
use crate::fourier::FourierPolynomial;
use crate::space::{self, SpaceDescriptor};
use crate::special;
use crate::stats::{compensated_sum_complex, CompensatedSum};

/// Largest number of generators the exhaustive search will try.
pub const EXHAUSTIVE_CAP: u64 = 1_000_000;

/// Largest number of residue vectors the dual-form error will visit.
pub const DUAL_CAP: u64 = 50_000_000;

/// Relative tolerance under which two squared errors count as a tie.
const TIE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRule")]
pub struct LatticeRule {
    #[serde(rename = "N")]
    n: u64,
    z: Vec<u64>,
}

#[derive(Deserialize)]
struct RawRule {
    #[serde(rename = "N")]
    n: u64,
    z: Vec<u64>,
}

impl TryFrom<RawRule> for LatticeRule {
    type Error = KorobovError;

    fn try_from(raw: RawRule) -> Result<Self> {
        LatticeRule::new(raw.n, raw.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Cbc,
}

impl LatticeRule {
    pub fn new(n: u64, z: Vec<u64>) -> Result<Self> {
        if !is_prime(n) {
            return Err(KorobovError::NotPrime(n));
        }
        if z.is_empty() {
            return Err(KorobovError::InvalidParameter("generator must have at least one entry".into()));
        }
        if let Some(bad) = z.iter().find(|&&zj| zj == 0 || zj >= n) {
            return Err(KorobovError::InvalidParameter(format!(
                "generator entry {bad} outside [1, {}]",
                n - 1
            )));
        }
        Ok(Self { n, z })
    }

    /// The Korobov-type generator `(1, a, a^2, ...) mod N`.
    pub fn korobov(n: u64, a: u64, d: usize) -> Result<Self> {
        if a % n == 0 {
            return Err(KorobovError::InvalidParameter(format!("multiplier {a} is 0 mod {n}")));
        }
        let mut z = Vec::with_capacity(d);
        let mut p = 1u64;
        for _ in 0..d {
            z.push(p);
            p = mulmod(p, a % n, n);
        }
        Self::new(n, z)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn z(&self) -> &[u64] {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// Node `x_j = {j z / N}`.
    pub fn node(&self, j: u64) -> Vec<f64> {
        let n = self.n as f64;
        self.z.iter().map(|&zj| mulmod(j % self.n, zj, self.n) as f64 / n).collect()
    }

    /// All `N` nodes, `j = 0, ..., N - 1`.
    pub fn nodes(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.n as usize);
        self.for_each_node(|x| {
            out.push(x.to_vec());
            Ok(())
        })
        .expect("infallible visitor");
        out
    }

    fn for_each_node(&self, mut visit: impl FnMut(&[f64]) -> Result<()>) -> Result<()> {
        let n = self.n as f64;
        let mut idx = vec![0u64; self.dim()];
        let mut x = vec![0.0; self.dim()];
        for _ in 0..self.n {
            for (m, i) in idx.iter().enumerate() {
                x[m] = *i as f64 / n;
            }
            visit(&x)?;
            for (i, &zj) in idx.iter_mut().zip(&self.z) {
                *i = addmod(*i, zj, self.n);
            }
        }
        Ok(())
    }

    /// Equal-weight average of `f` over the nodes.
    pub fn integrate<F>(&self, mut f: F) -> Result<Complex64>
    where
        F: FnMut(&[f64]) -> Result<Complex64>,
    {
        let mut values = Vec::with_capacity(self.n as usize);
        self.for_each_node(|x| {
            values.push(f(x)?);
            Ok(())
        })?;
        Ok(compensated_sum_complex(values) / self.n as f64)
    }

    /// Whether `h` lies in the dual lattice, `h.z = 0 mod N`.
    pub fn in_dual(&self, h: &[i64]) -> bool {
        let n = self.n as i128;
        let s: i128 = h.iter().zip(&self.z).map(|(&hj, &zj)| (hj as i128 * zj as i128).rem_euclid(n)).sum();
        s.rem_euclid(n) == 0
    }

    /// `sum_{h.z = 0 mod N} f^(h)`: what the rule returns for a polynomial,
    /// computed from the coefficients alone.
    pub fn alias_sum(&self, f: &FourierPolynomial) -> Result<Complex64> {
        if f.dim() != self.dim() {
            return Err(KorobovError::DimensionMismatch { expected: self.dim(), found: f.dim() });
        }
        Ok(compensated_sum_complex(f.terms().filter(|(h, _)| self.in_dual(h)).map(|(_, c)| *c)))
    }

    /// What the rule returns for `x -> f(x) exp(-2 pi i h.x)`:
    /// `sum_{(k - h).z = 0 mod N} f^(k)`.
    pub fn shifted_alias_sum(&self, f: &FourierPolynomial, h: &[i64]) -> Result<Complex64> {
        if f.dim() != self.dim() || h.len() != self.dim() {
            return Err(KorobovError::DimensionMismatch { expected: self.dim(), found: f.dim().min(h.len()) });
        }
        let n = self.n as i128;
        let target: i128 = h.iter().zip(&self.z).map(|(&hj, &zj)| (hj as i128 * zj as i128).rem_euclid(n)).sum::<i128>().rem_euclid(n);
        let residue = |k: &[i64]| -> i128 {
            k.iter().zip(&self.z).map(|(&kj, &zj)| (kj as i128 * zj as i128).rem_euclid(n)).sum::<i128>().rem_euclid(n)
        };
        Ok(compensated_sum_complex(f.terms().filter(|(k, _)| residue(k) == target).map(|(_, c)| *c)))
    }
}

/// `(a + b) mod n` for `a, b < n`.
#[inline]
fn addmod(a: u64, b: u64, n: u64) -> u64 {
    let s = a as u128 + b as u128;
    if s >= n as u128 {
        (s - n as u128) as u64
    } else {
        s as u64
    }
}

#[inline]
fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, n);
        }
        base = mulmod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n.max(2);
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// `F(k/N) = sum_{h>=1} cos(2 pi h k / N) / h^alpha` for `k = 0, ..., N - 1`.
fn cosine_table(alpha: f64, n: u64) -> Vec<f64> {
    let n_us = n as usize;
    let half = n_us / 2;
    let mut table = vec![0.0; n_us];
    let head: Vec<f64> = (0..=half)
        .into_par_iter()
        .map(|k| special::cosine_series(alpha, k as f64 / n as f64))
        .collect();
    for (k, v) in head.into_iter().enumerate() {
        table[k] = v;
        if k > 0 {
            table[n_us - k] = v;
        }
    }
    table
}

/// Cosine-series values on the grid `k/N`; the kernel at a node is
/// `prod_m (1 + 2 gamma_m F(k_m / N))`.
struct KernelTable {
    n: u64,
    cos: Vec<f64>,
}

impl KernelTable {
    fn new(space: &SpaceDescriptor, n: u64) -> Self {
        Self { n, cos: cosine_table(space.alpha(), n) }
    }

    /// `N e^2 = sum_j (prod_m (1 + 2 gamma_m F(j z_m / N)) - 1)`.
    fn scaled_sq_error(&self, gammas: &[f64], z: &[u64]) -> f64 {
        let mut idx = vec![0u64; z.len()];
        let mut sum = CompensatedSum::new();
        for _ in 0..self.n {
            // prod(1 + a_m) - 1 accumulated without forming the product first.
            let mut excess = 0.0;
            for ((i, &zm), &g) in idx.iter_mut().zip(z).zip(gammas) {
                let a = 2.0 * g * self.cos[*i as usize];
                excess = excess * (1.0 + a) + a;
                *i = addmod(*i, zm, self.n);
            }
            sum.add(excess);
        }
        sum.value()
    }
}

fn check_rule(space: &SpaceDescriptor, rule: &LatticeRule) -> Result<()> {
    space.require_kernel()?;
    if rule.dim() != space.dim() {
        return Err(KorobovError::DimensionMismatch { expected: space.dim(), found: rule.dim() });
    }
    Ok(())
}

/// Exact worst-case integration error over the unit ball, kernel form.
pub fn worst_case_int_error(space: &SpaceDescriptor, rule: &LatticeRule) -> Result<f64> {
    check_rule(space, rule)?;
    let table = KernelTable::new(space, rule.n);
    let e2 = table.scaled_sq_error(space.gammas(), &rule.z) / rule.n as f64;
    Ok(e2.max(0.0).sqrt())
}

/// Exact worst-case integration error, dual-lattice form. Visits
/// `N^{d-1}` residue vectors, so it is limited to small `N^{d-1}`.
pub fn worst_case_int_error_dual(space: &SpaceDescriptor, rule: &LatticeRule) -> Result<f64> {
    check_rule(space, rule)?;
    let n = rule.n;
    let d = rule.dim();
    let visits = (n as f64).powi(d as i32 - 1);
    if visits > DUAL_CAP as f64 {
        return Err(KorobovError::CapExceeded { what: "dual-lattice residue vectors".into(), cap: DUAL_CAP });
    }
    let alpha = space.alpha();
    let scale = (n as f64).powf(-alpha);
    let zeta = space::zeta(alpha)?;
    // t[m][b]: sum of r^{-1}(gamma_m, h) over h = b mod N, h != 0 included for b = 0.
    let tables: Vec<Vec<f64>> = space
        .gammas()
        .iter()
        .map(|&g| {
            let mut row = Vec::with_capacity(n as usize);
            row.push(2.0 * g * zeta * scale);
            for b in 1..n {
                let q = b as f64 / n as f64;
                row.push(g * scale * (special::hurwitz_zeta(alpha, q) + special::hurwitz_zeta(alpha, 1.0 - q)));
            }
            row
        })
        .collect();

    // Zero residue vector: prod (1 + t_m(0)) - 1.
    let mut zero_excess = 0.0;
    for row in &tables {
        zero_excess = zero_excess * (1.0 + row[0]) + row[0];
    }

    let factor = |m: usize, b: u64| if b == 0 { 1.0 + tables[m][0] } else { tables[m][b as usize] };
    let z_last_inv = powmod(rule.z[d - 1], n - 2, n);
    let mut sum = CompensatedSum::new();
    // Mixed-radix walk over (b_1, ..., b_{d-1}); b_d is fixed by b.z = 0 mod N.
    let mut b = vec![0u64; d - 1];
    loop {
        let residue = b.iter().zip(&rule.z).fold(0u64, |acc, (&bj, &zj)| addmod(acc, mulmod(bj, zj, n), n));
        let b_last = mulmod((n - residue) % n, z_last_inv, n);
        if residue != 0 || b.iter().any(|&x| x != 0) {
            let mut p = factor(d - 1, b_last);
            for (m, &bj) in b.iter().enumerate() {
                p *= factor(m, bj);
            }
            sum.add(p);
        }
        let mut m = 0;
        loop {
            if m == d - 1 {
                return Ok((zero_excess + sum.value()).sqrt());
            }
            b[m] += 1;
            if b[m] < n {
                break;
            }
            b[m] = 0;
            m += 1;
        }
    }
}

/// `prod_j (1 + 2 gamma_j)^{1/2} / sqrt(N)`, the error level that some
/// lattice rule with `N` points is known to achieve.
pub fn int_error_bound(space: &SpaceDescriptor, n: u64) -> f64 {
    let p: f64 = space.gammas().iter().map(|g| 1.0 + 2.0 * g).product();
    (p / n as f64).sqrt()
}

/// Worst-case error of `rule`, or [`KorobovError::BoundViolation`] when it
/// exceeds [`int_error_bound`].
pub fn certify(space: &SpaceDescriptor, rule: &LatticeRule) -> Result<f64> {
    let e = worst_case_int_error(space, rule)?;
    let bound = int_error_bound(space, rule.n);
    if e <= bound {
        Ok(e)
    } else {
        Err(KorobovError::BoundViolation { value: e, bound })
    }
}

/// Index of the smallest value; values within the tie tolerance of the
/// current best keep the earlier index.
fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] - TIE_TOLERANCE * values[best].abs() {
            best = i;
        }
    }
    best
}

/// Generator minimising the worst-case error, by full search or
/// component by component.
pub fn search_generator(space: &SpaceDescriptor, n: u64, mode: SearchMode) -> Result<LatticeRule> {
    space.require_kernel()?;
    if !is_prime(n) {
        return Err(KorobovError::NotPrime(n));
    }
    if n == 2 {
        return LatticeRule::new(n, vec![1; space.dim()]);
    }
    let table = KernelTable::new(space, n);
    match mode {
        SearchMode::Exhaustive => exhaustive(space, &table),
        SearchMode::Cbc => cbc(space, &table),
    }
}

fn exhaustive(space: &SpaceDescriptor, table: &KernelTable) -> Result<LatticeRule> {
    let n = table.n;
    let d = space.dim();
    let total = (n - 1)
        .checked_pow(d as u32)
        .filter(|&t| t <= EXHAUSTIVE_CAP)
        .ok_or(KorobovError::CapExceeded { what: "exhaustive generator search".into(), cap: EXHAUSTIVE_CAP })?;
    // Lexicographic order: the last coordinate varies fastest.
    let decode = |mut k: u64| {
        let mut z = vec![0u64; d];
        for zj in z.iter_mut().rev() {
            *zj = k % (n - 1) + 1;
            k /= n - 1;
        }
        z
    };
    let errors: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|k| table.scaled_sq_error(space.gammas(), &decode(k)))
        .collect();
    LatticeRule::new(n, decode(argmin_first(&errors) as u64))
}

fn cbc(space: &SpaceDescriptor, table: &KernelTable) -> Result<LatticeRule> {
    let n = table.n;
    let nn = n as usize;
    let mut prod = vec![1.0; nn];
    let mut z = Vec::with_capacity(space.dim());
    for &g in space.gammas() {
        let errors: Vec<f64> = (1..n)
            .into_par_iter()
            .map(|c| {
                let mut sum = CompensatedSum::new();
                let mut i = 0u64;
                for p in &prod {
                    sum.add(p * (1.0 + 2.0 * g * table.cos[i as usize]) - 1.0);
                    i = addmod(i, c, n);
                }
                sum.value()
            })
            .collect();
        let c = argmin_first(&errors) as u64 + 1;
        let mut i = 0u64;
        for p in prod.iter_mut() {
            *p *= 1.0 + 2.0 * g * table.cos[i as usize];
            i = addmod(i, c, n);
        }
        z.push(c);
    }
    LatticeRule::new(n, z)
}

/// Best Korobov-type rule `(1, a, a^2, ...)` over the given multipliers;
/// ties keep the earlier multiplier.
pub fn search_korobov(space: &SpaceDescriptor, n: u64, multipliers: &[u64]) -> Result<LatticeRule> {
    space.require_kernel()?;
    if !is_prime(n) {
        return Err(KorobovError::NotPrime(n));
    }
    if multipliers.is_empty() {
        return Err(KorobovError::InvalidParameter("no Korobov multipliers given".into()));
    }
    let table = KernelTable::new(space, n);
    let rules = multipliers
        .iter()
        .map(|&a| LatticeRule::korobov(n, a, space.dim()))
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = rules.par_iter().map(|r| table.scaled_sq_error(space.gammas(), &r.z)).collect();
    Ok(rules[argmin_first(&errors)].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::WeightSchedule;
    use std::f64::consts::PI;

    fn explicit(gammas: &[f64], alpha: f64) -> SpaceDescriptor {
        SpaceDescriptor::new(gammas.len(), alpha, WeightSchedule::explicit(gammas.to_vec()).unwrap()).unwrap()
    }

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
    }

    #[test]
    fn primes() {
        assert_eq!(next_prime(10), 11);
        assert_eq!(next_prime(17), 17);
        let p = next_prime(243 * 10_000);
        assert!(trial_division(p));
        assert!(((243 * 10_000)..p).all(|k| !trial_division(k)));
        for k in 0..5000 {
            assert_eq!(is_prime(k), trial_division(k), "{k}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn nodes_small() {
        let r = LatticeRule::new(5, vec![2]).unwrap();
        let got: Vec<f64> = r.nodes().into_iter().map(|x| x[0]).collect();
        assert_eq!(got, vec![0.0, 0.4, 0.8, 0.2, 0.6]);
        assert_eq!(r.node(3), vec![0.2]);
        let mut a: Vec<u64> = r.nodes().iter().map(|x| (x[0] * 5.0).round() as u64).collect();
        let mut b: Vec<u64> = LatticeRule::new(5, vec![4]).unwrap().nodes().iter().map(|x| (x[0] * 5.0).round() as u64).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(matches!(LatticeRule::new(15, vec![1]), Err(KorobovError::NotPrime(15))));
        assert!(LatticeRule::new(7, vec![0]).is_err());
        assert!(LatticeRule::new(7, vec![7]).is_err());
        let s = explicit(&[1.0], 1.0);
        assert!(matches!(
            worst_case_int_error(&s, &LatticeRule::new(5, vec![1]).unwrap()),
            Err(KorobovError::Domain(_))
        ));
        let s2 = explicit(&[1.0, 1.0], 2.0);
        assert!(matches!(search_generator(&s2, 16, SearchMode::Cbc), Err(KorobovError::NotPrime(16))));
        assert!(matches!(
            search_generator(&s2, 1009, SearchMode::Exhaustive),
            Err(KorobovError::CapExceeded { .. })
        ));
    }

    #[test]
    fn one_dimensional_error() {
        let s = explicit(&[1.0], 2.0);
        let expected = PI / 75f64.sqrt();
        for z in 1..5 {
            let r = LatticeRule::new(5, vec![z]).unwrap();
            assert!((worst_case_int_error(&s, &r).unwrap() - expected).abs() < 1e-14);
            assert!((worst_case_int_error_dual(&s, &r).unwrap() - expected).abs() < 1e-14);
        }
        let s3 = explicit(&[0.7], 3.0);
        for n in [7u64, 31, 101] {
            let r = LatticeRule::new(n, vec![1]).unwrap();
            let e2 = 2.0 * 0.7 * special::riemann_zeta(3.0) / (n as f64).powi(3);
            assert!((worst_case_int_error(&s3, &r).unwrap().powi(2) / e2 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_and_dual_forms_agree() {
        for (gammas, alpha, n, z) in [
            (vec![1.0, 0.5], 2.0, 17u64, vec![1u64, 5]),
            (vec![0.9, 0.4, 0.3], 1.5, 13, vec![1, 3, 9]),
            (vec![1.0, 0.25, 0.1], 3.3, 31, vec![1, 12, 20]),
            (vec![1.0, 1.0], 4.0, 101, vec![1, 40]),
        ] {
            let s = explicit(&gammas, alpha);
            let r = LatticeRule::new(n, z).unwrap();
            let a = worst_case_int_error(&s, &r).unwrap();
            let b = worst_case_int_error_dual(&s, &r).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn search_modes() {
        let s = explicit(&[1.0, 0.5], 2.0);
        let ex = search_generator(&s, 17, SearchMode::Exhaustive).unwrap();
        let cb = search_generator(&s, 17, SearchMode::Cbc).unwrap();
        let e_ex = certify(&s, &ex).unwrap();
        let e_cb = certify(&s, &cb).unwrap();
        assert!(e_cb >= e_ex * (1.0 - 1e-12));
        assert_eq!(ex.z()[0], 1);
        for z1 in 1..17 {
            for z2 in 1..17 {
                let e = worst_case_int_error(&s, &LatticeRule::new(17, vec![z1, z2]).unwrap()).unwrap();
                assert!(e >= e_ex * (1.0 - 1e-9));
            }
        }
        let one = search_generator(&explicit(&[1.0], 2.0), 5, SearchMode::Exhaustive).unwrap();
        assert_eq!(one.z(), &[1]);
    }

    #[test]
    fn korobov_rules() {
        let r = LatticeRule::korobov(101, 10, 4).unwrap();
        assert_eq!(r.z(), &[1, 10, 100, 91]);
        let s = explicit(&[1.0, 0.5, 0.25, 0.125], 2.0);
        let best = search_korobov(&s, 101, &[2, 10, 37, 44]).unwrap();
        assert!(certify(&s, &best).is_ok());
    }

    #[test]
    fn aliasing() {
        let r = LatticeRule::new(7, vec![1]).unwrap();
        let f = FourierPolynomial::constant_at(vec![7], Complex64::new(0.25, -1.0));
        let q = r.integrate(|x| Ok(f.evaluate_unchecked(x))).unwrap();
        assert!((q - Complex64::new(0.25, -1.0)).norm() < 1e-14);
        assert_eq!(r.alias_sum(&f).unwrap(), Complex64::new(0.25, -1.0));
        let c = r.integrate(|_| Ok(Complex64::new(3.0, 2.0))).unwrap();
        assert!((c - Complex64::new(3.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn json_layout() {
        let r = LatticeRule::new(17, vec![1, 5]).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"N": 17, "z": [1, 5]}));
        let back: LatticeRule = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_value::<LatticeRule>(serde_json::json!({"N": 18, "z": [1]})).is_err());
    }
}
