//! The eigenvalue index set `R(eps, d) = { h : r_alpha(gamma, h)^{-1} > eps^2 }`
//! and the optimal worst-case algorithm built on it.
//!
//! Enumeration is a depth-first search over the coordinates that may carry a
//! non-zero entry. Every weight factor is at least one and the factors
//! `1/gamma_j` are non-decreasing in `j`, so a branch is abandoned as soon as
//! the running product reaches `eps^{-2}`. Each node of the search tree is a
//! distinct member, which makes the cost linear in `|R(eps, d)|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KorobovError, Result};
use crate::fourier::{FourierPolynomial, Frequency};
use crate::space::SpaceDescriptor;

/// Default bound on the number of enumerated members.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// `eps^{-2}`; membership is `r_alpha(gamma, h) < threshold(eps)`.
pub fn threshold(epsilon: f64) -> f64 {
    1.0 / (epsilon * epsilon)
}

fn validate(space: &SpaceDescriptor, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(KorobovError::InvalidParameter(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    if space.alpha() == 0.0 {
        return Err(KorobovError::NotSolvable(
            "infinitely many unit eigenvalues for alpha = 0".into(),
        ));
    }
    Ok(())
}

/// Whether `h` belongs to `R(eps, d)`; the product is formed in the same
/// order as during enumeration so both agree bit for bit.
pub fn is_member(space: &SpaceDescriptor, epsilon: f64, h: &[i64]) -> bool {
    space.weight_product(h) < threshold(epsilon)
}

/// Walks every non-zero member below `start`, calling `visit` with the
/// current vector and its weight product.
struct Walker<'a, F> {
    space: &'a SpaceDescriptor,
    limit: f64,
    visit: F,
}

impl<F: FnMut(&[i64]) -> Result<()>> Walker<'_, F> {
    fn walk(&mut self, start: usize, product: f64, current: &mut Vec<i64>) -> Result<()> {
        for coord in start..self.space.dim() {
            if product * self.space.weight_factor(coord, 1) >= self.limit {
                break;
            }
            for m in 1i64.. {
                let p = product * self.space.weight_factor(coord, m);
                if p >= self.limit {
                    break;
                }
                for value in [m, -m] {
                    current[coord] = value;
                    (self.visit)(current)?;
                    self.walk(coord + 1, p, current)?;
                }
                current[coord] = 0;
            }
        }
        Ok(())
    }
}

/// `R(eps, d)` with its members in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSet {
    space: SpaceDescriptor,
    epsilon: f64,
    members: Vec<Frequency>,
}

#[derive(Serialize, Deserialize)]
struct IndexSetJson {
    epsilon: f64,
    d: usize,
    members: Vec<Frequency>,
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IndexSetJson { epsilon: self.epsilon, d: self.space.dim(), members: self.members.clone() }
            .serialize(serializer)
    }
}

impl IndexSet {
    /// Enumerates `R(eps, d)` with the default cap.
    pub fn enumerate(space: &SpaceDescriptor, epsilon: f64) -> Result<Self> {
        Self::enumerate_with_cap(space, epsilon, DEFAULT_CAP)
    }

    pub fn enumerate_with_cap(space: &SpaceDescriptor, epsilon: f64, cap: u64) -> Result<Self> {
        validate(space, epsilon)?;
        let mut members = vec![vec![0; space.dim()]];
        let mut walker = Walker {
            space,
            limit: threshold(epsilon),
            visit: |h: &[i64]| {
                if members.len() as u64 >= cap {
                    return Err(cap_error(cap));
                }
                members.push(h.to_vec());
                Ok(())
            },
        };
        walker.walk(0, 1.0, &mut vec![0; space.dim()])?;
        members.sort_unstable();
        Ok(Self { space: space.clone(), epsilon, members })
    }

    /// Same result as [`IndexSet::enumerate_with_cap`], with the subtrees
    /// below each first non-zero entry explored in parallel.
    pub fn enumerate_parallel(space: &SpaceDescriptor, epsilon: f64, cap: u64) -> Result<Self> {
        validate(space, epsilon)?;
        let d = space.dim();
        let limit = threshold(epsilon);
        let mut roots = Vec::new();
        for coord in 0..d {
            if space.weight_factor(coord, 1) >= limit {
                break;
            }
            for m in 1i64.. {
                let p = space.weight_factor(coord, m);
                if p >= limit {
                    break;
                }
                roots.push((coord, m, p));
                roots.push((coord, -m, p));
            }
        }
        let parts: Vec<Vec<Frequency>> = roots
            .par_iter()
            .map(|&(coord, value, p)| {
                let mut current = vec![0; d];
                current[coord] = value;
                let mut out = vec![current.clone()];
                let mut walker = Walker {
                    space,
                    limit,
                    visit: |h: &[i64]| {
                        if out.len() as u64 >= cap {
                            return Err(cap_error(cap));
                        }
                        out.push(h.to_vec());
                        Ok(())
                    },
                };
                walker.walk(coord + 1, p, &mut current)?;
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let total: usize = 1 + parts.iter().map(Vec::len).sum::<usize>();
        if total as u64 > cap {
            return Err(cap_error(cap));
        }
        let mut members = Vec::with_capacity(total);
        members.push(vec![0; d]);
        members.extend(parts.into_iter().flatten());
        members.sort_unstable();
        Ok(Self { space: space.clone(), epsilon, members })
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn members(&self) -> &[Frequency] {
        &self.members
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, h: &[i64]) -> bool {
        self.members.binary_search_by(|m| m.as_slice().cmp(h)).is_ok()
    }

    /// Restriction of `f` to this set.
    pub fn truncate(&self, f: &FourierPolynomial) -> Result<FourierPolynomial> {
        self.space.check_dim(f.dim())?;
        Ok(f.filter(|h| self.contains(h)))
    }
}

fn cap_error(cap: u64) -> KorobovError {
    KorobovError::CapExceeded { what: "index set cardinality".into(), cap }
}

/// `|R(eps, d)|` without materialising the members. Works for large `d`.
pub fn count(space: &SpaceDescriptor, epsilon: f64, cap: u64) -> Result<u64> {
    validate(space, epsilon)?;
    let mut n: u64 = 1;
    let mut walker = Walker {
        space,
        limit: threshold(epsilon),
        visit: |_: &[i64]| {
            n += 1;
            if n > cap {
                Err(cap_error(cap))
            } else {
                Ok(())
            }
        },
    };
    walker.walk(0, 1.0, &mut vec![0; space.dim()])?;
    Ok(n)
}

/// Worst-case information complexity `comp^wor(eps, H_d, Lambda^all) = |R(eps, d)|`.
pub fn comp_wor_all(space: &SpaceDescriptor, epsilon: f64) -> Result<u64> {
    count(space, epsilon, DEFAULT_CAP)
}

/// The optimal worst-case algorithm: keep the Fourier coefficients in `R(eps, d)`.
pub fn truncate(space: &SpaceDescriptor, epsilon: f64, f: &FourierPolynomial) -> Result<FourierPolynomial> {
    validate(space, epsilon)?;
    space.check_dim(f.dim())?;
    Ok(f.filter(|h| is_member(space, epsilon, h)))
}

/// Exact `L_2` error of [`truncate`]: `(sum_{h not in R} |f^(h)|^2)^{1/2}`.
pub fn truncation_error(space: &SpaceDescriptor, epsilon: f64, f: &FourierPolynomial) -> Result<f64> {
    validate(space, epsilon)?;
    space.check_dim(f.dim())?;
    Ok(f.terms()
        .filter(|(h, _)| !is_member(space, epsilon, h))
        .fold(0.0, |acc, (_, c)| acc + c.norm_sqr())
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::WeightSchedule;
    use num_complex::Complex64;

    fn explicit(gammas: &[f64], alpha: f64) -> SpaceDescriptor {
        SpaceDescriptor::new(gammas.len(), alpha, WeightSchedule::explicit(gammas.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn two_dimensional_example() {
        let s = explicit(&[1.0, 1.0], 2.0);
        let r = IndexSet::enumerate(&s, 0.5).unwrap();
        let mut expected = vec![];
        for a in -1..=1 {
            for b in -1..=1 {
                expected.push(vec![a, b]);
            }
        }
        assert_eq!(r.members(), expected.as_slice());
        assert_eq!(comp_wor_all(&s, 0.5).unwrap(), 9);
    }

    #[test]
    fn small_weight_forces_zero() {
        let s = explicit(&[0.25], 2.0);
        let r = IndexSet::enumerate(&s, 0.5).unwrap();
        assert_eq!(r.members(), &[vec![0]]);
    }

    #[test]
    fn epsilon_near_one_keeps_only_zero() {
        let s = SpaceDescriptor::polynomial(4, 1.5, 0.9, 0.0).unwrap();
        assert_eq!(count(&s, 0.999_999, DEFAULT_CAP).unwrap(), 1);
        let unit = SpaceDescriptor::polynomial(4, 1.5, 1.0, 0.0).unwrap();
        assert_eq!(count(&unit, 0.999_999, DEFAULT_CAP).unwrap(), 81);
    }

    #[test]
    fn one_dimensional_count() {
        let s = explicit(&[1.0], 2.0);
        assert_eq!(comp_wor_all(&s, 0.1).unwrap(), 19);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s0 = explicit(&[1.0], 0.0);
        assert!(matches!(IndexSet::enumerate(&s0, 0.5), Err(KorobovError::NotSolvable(_))));
        let s = explicit(&[1.0], 2.0);
        assert!(IndexSet::enumerate(&s, 1.0).is_err());
        assert!(IndexSet::enumerate(&s, 0.0).is_err());
        let big = SpaceDescriptor::polynomial(3, 0.5, 1.0, 0.0).unwrap();
        assert!(matches!(
            IndexSet::enumerate_with_cap(&big, 0.1, 1000),
            Err(KorobovError::CapExceeded { .. })
        ));
        assert!(count(&big, 0.1, 1000).is_err());
    }

    #[test]
    fn parallel_matches_serial() {
        let s = SpaceDescriptor::polynomial(4, 2.0, 1.0, 1.0).unwrap();
        let a = IndexSet::enumerate(&s, 0.05).unwrap();
        let b = IndexSet::enumerate_parallel(&s, 0.05, DEFAULT_CAP).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cardinality() as u64, count(&s, 0.05, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn truncate_examples() {
        let s = SpaceDescriptor::polynomial(2, 2.0, 1.0, 1.0).unwrap();
        let eps = 0.3;
        let r = IndexSet::enumerate(&s, eps).unwrap();
        let inside = FourierPolynomial::from_terms(2, vec![(vec![1, 0], Complex64::new(0.2, 0.1)), (vec![0, 0], Complex64::new(1.0, 0.0))]).unwrap();
        assert_eq!(truncate(&s, eps, &inside).unwrap(), inside);
        assert_eq!(r.truncate(&inside).unwrap(), inside);
        assert_eq!(truncation_error(&s, eps, &inside).unwrap(), 0.0);

        let outside = FourierPolynomial::basis(&s, &[3, 2]).unwrap();
        assert!(!r.contains(&[3, 2]));
        assert!(truncate(&s, eps, &outside).unwrap().is_empty());
        let err = truncation_error(&s, eps, &outside).unwrap();
        assert!((err - s.weight_product(&[3, 2]).powf(-0.5)).abs() < 1e-15);
        assert!(err <= eps);

        let b = FourierPolynomial::constant_at(vec![5, 5], Complex64::new(0.3, -0.4));
        assert!((truncation_error(&s, eps, &b).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_layout() {
        let s = explicit(&[0.25], 2.0);
        let r = IndexSet::enumerate(&s, 0.5).unwrap();
        assert_eq!(
            serde_json::to_value(&r).unwrap(),
            serde_json::json!({"epsilon": 0.5, "d": 1, "members": [[0]]})
        );
    }
}
