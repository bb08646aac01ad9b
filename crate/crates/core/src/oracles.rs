//! Slow reference computations used by the tests and by `selftest`.
//! Each one takes a different route from the production code.

use num_complex::Complex64;

use crate::error::{KorobovError, Result};
use crate::fourier::{unit_phase, FourierPolynomial, Frequency};
use crate::space::SpaceDescriptor;

/// Members of `R(eps, d)` by scanning the whole box
/// `|h_j| <= (eps^{-2} gamma_j)^{1/alpha}`, in lexicographic order.
pub fn brute_force_index_set(space: &SpaceDescriptor, epsilon: f64, max_points: u64) -> Result<Vec<Frequency>> {
    if !(epsilon > 0.0 && epsilon < 1.0) || space.alpha() == 0.0 {
        return Err(KorobovError::InvalidParameter("box scan needs eps in (0, 1) and alpha > 0".into()));
    }
    let limit = 1.0 / (epsilon * epsilon);
    let alpha = space.alpha();
    let inv: Vec<f64> = space.gammas().iter().map(|g| 1.0 / g).collect();
    let radii: Vec<i64> = space.gammas().iter().map(|g| (limit * g).powf(1.0 / alpha).floor() as i64 + 1).collect();
    let points: f64 = radii.iter().map(|&r| (2 * r + 1) as f64).product();
    if points > max_points as f64 {
        return Err(KorobovError::CapExceeded { what: "box scan".into(), cap: max_points });
    }
    let d = space.dim();
    let mut h: Vec<i64> = radii.iter().map(|r| -r).collect();
    let mut out = Vec::new();
    loop {
        let mut product = 1.0;
        for (j, &hj) in h.iter().enumerate() {
            if hj != 0 {
                product *= inv[j] * (hj.unsigned_abs() as f64).powf(alpha);
            }
        }
        if product < limit {
            out.push(h.clone());
        }
        // odometer, last coordinate fastest
        let mut j = d;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if h[j] < radii[j] {
                h[j] += 1;
                break;
            }
            h[j] = -radii[j];
        }
    }
}

/// Outcome distribution of phase estimation on the Grover operator of
/// amplitude `a`, from an explicit state vector: the two-dimensional
/// good/bad subspace, `M` register states, controlled powers of
/// `Q = -A S_0 A^dagger S_chi` and an inverse DFT of size `M`.
pub fn statevector_phase_estimation(a: f64, m: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&a) || !(2..=64).contains(&m) {
        return Err(KorobovError::InvalidParameter(format!("statevector oracle needs a in [0, 1], 2 <= M <= 64; got a = {a}, M = {m}")));
    }
    type M2 = [[f64; 2]; 2];
    let mul = |x: &M2, y: &M2| -> M2 {
        let mut r = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        r
    };
    // Basis (bad, good); A|0> = sqrt(1-a)|bad> + sqrt(a)|good>.
    let (c, s) = ((1.0 - a).sqrt(), a.sqrt());
    let a_op: M2 = [[c, -s], [s, c]];
    let a_dag: M2 = [[c, s], [-s, c]];
    let s0: M2 = [[-1.0, 0.0], [0.0, 1.0]];
    let s_chi: M2 = [[1.0, 0.0], [0.0, -1.0]];
    let mut q = mul(&mul(&mul(&a_op, &s0), &a_dag), &s_chi);
    for row in &mut q {
        for v in row.iter_mut() {
            *v = -*v;
        }
    }

    // Register y holds Q^y A|0> / sqrt(M).
    let mut branch = vec![[0.0f64; 2]; m];
    let mut v = [c, s];
    for slot in branch.iter_mut() {
        *slot = v;
        v = [q[0][0] * v[0] + q[0][1] * v[1], q[1][0] * v[0] + q[1][1] * v[1]];
    }
    let norm = 1.0 / m as f64;
    Ok((0..m)
        .map(|k| {
            let mut amp = [Complex64::new(0.0, 0.0); 2];
            for (y, b) in branch.iter().enumerate() {
                let w = unit_phase(-(((y * k) % m) as f64) / m as f64);
                amp[0] += w * b[0];
                amp[1] += w * b[1];
            }
            (amp[0].norm_sqr() + amp[1].norm_sqr()) * norm * norm
        })
        .collect())
}

/// `int |f - g|^2` by the rectangle rule on an `n^d` grid; exact for
/// polynomials whose difference has frequencies below `n / 2`.
pub fn grid_l2_distance_sq(f: &FourierPolynomial, g: &FourierPolynomial, n: usize) -> Result<f64> {
    if f.dim() != g.dim() {
        return Err(KorobovError::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    let d = f.dim();
    let total = n.checked_pow(d as u32).ok_or_else(|| KorobovError::InvalidParameter("grid too large".into()))?;
    let mut x = vec![0.0; d];
    let mut acc = 0.0;
    for idx in 0..total {
        let mut rest = idx;
        for xj in x.iter_mut() {
            *xj = (rest % n) as f64 / n as f64;
            rest /= n;
        }
        acc += (f.evaluate_unchecked(&x) - g.evaluate_unchecked(&x)).norm_sqr();
    }
    Ok(acc / total as f64)
}

/// Primality by trial division.
pub fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// `(1/N) sum_j f(x_j)` by visiting every node.
pub fn direct_lattice_sum(f: &FourierPolynomial, n: u64, z: &[u64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut x = vec![0.0; z.len()];
    for j in 0..n {
        for (xi, &zi) in x.iter_mut().zip(z) {
            *xi = ((j as u128 * zi as u128) % n as u128) as f64 / n as f64;
        }
        acc += f.evaluate_unchecked(&x);
    }
    acc / n as f64
}
