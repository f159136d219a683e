//! Enumeration of short vectors and of saturated sublattices of bounded
//! covolume.
//!
//! Short vectors come from Fincke–Pohst enumeration on a floating-point copy
//! of the exact `LDLᵀ` decomposition with a widened radius; every candidate is
//! then filtered with exact rational norms, so floats never decide membership.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::intmat::{column_reduce, gcd_of, IntMatrix};
use super::{rat, LatticeRecord, Sublattice};
use crate::error::{Error, Result};
use crate::linalg::{inverse, quadratic_form, Matrix};
use crate::Rational;

const WIDEN: f64 = 1e-9;

/// `γ_k^k` for the Hermite constants, `k = 1..=4`.
const HERMITE_POW: [f64; 5] = [1.0, 1.0, 4.0 / 3.0, 2.0, 4.0];

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// All nonzero `x ∈ ℤ^r`, up to sign, with `xᵀ G x ≤ bound` (or `<` when
/// `strict`), first nonzero coordinate positive.
pub fn short_vectors(gram: &Matrix<Rational>, bound: &Rational, strict: bool) -> Vec<Vec<i64>> {
    let b = to_f64(bound);
    let keep = |v: &[i64]| {
        let n = quadratic_form(gram, &v.iter().map(|&x| rat(x)).collect::<Vec<_>>());
        if strict {
            n < *bound
        } else {
            n <= *bound
        }
    };
    fincke_pohst(gram, b * (1.0 + WIDEN) + WIDEN).into_iter().filter(|v| keep(v)).collect()
}

/// Candidates with `xᵀGx ≤ b` in floating point, widened; no exact filter.
fn fincke_pohst(gram: &Matrix<Rational>, b: f64) -> Vec<Vec<i64>> {
    let r = gram.len();
    let mut q: Matrix<Rational> = gram.clone();
    for i in 0..r {
        for j in i + 1..r {
            let t = q[i][j].clone();
            q[j][i] = t.clone();
            q[i][j] = t / q[i][i].clone();
        }
        for k in i + 1..r {
            for l in k..r {
                let t = q[k][i].clone() * q[i][l].clone();
                q[k][l] = q[k][l].clone() - t;
            }
        }
    }
    let qf: Vec<Vec<f64>> = q.iter().map(|row| row.iter().map(to_f64).collect()).collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; r];
    recurse(&qf, r, b, &mut x, &mut out);
    out.retain(|v| {
        let first = v.iter().find(|&&c| c != 0);
        matches!(first, Some(&c) if c > 0)
    });
    out
}

fn recurse(q: &[Vec<f64>], level: usize, remaining: f64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if level == 0 {
        if x.iter().any(|&c| c != 0) {
            out.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    let r = q.len();
    let center: f64 = -(i + 1..r).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let rad = (remaining.max(0.0) / q[i][i]).sqrt();
    let slack = WIDEN * (1.0 + rad + center.abs());
    let lo = (center - rad - slack).ceil() as i64;
    let hi = (center + rad + slack).floor() as i64;
    for v in lo..=hi {
        let d = v as f64 - center;
        let rest = remaining - q[i][i] * d * d;
        if rest < -WIDEN * (1.0 + remaining.abs()) {
            continue;
        }
        x[i] = v;
        recurse(q, i, rest, x, out);
    }
    x[i] = 0;
}

/// Primitive vectors with exact norm `< bound`, up to sign.
fn primitive_lines(l: &LatticeRecord, bound: &Rational) -> Vec<Sublattice> {
    short_vectors(l.gram(), bound, true)
        .into_iter()
        .filter(|v| gcd_of(v) == 1)
        .map(|v| Sublattice::from_rows(&[v]))
        .collect()
}

fn check_args(l: &LatticeRecord, k: usize, bound: &Rational) -> Result<()> {
    if !bound.is_positive() {
        return Err(Error::InvalidLattice("volume bound must be positive".into()));
    }
    if k == 0 || k >= l.rank() {
        return Err(Error::IndexOutOfRange { index: k, rank: l.rank() });
    }
    Ok(())
}

/// All saturated rank-`k` sublattices with `Vol² < volsq_bound`.
///
/// Lines come from primitive short vectors, corank-one sublattices from
/// primitive short vectors of the dual, and the remaining case (rank 2 in
/// rank 4) from [`enumerate_by_flags`].
pub fn enumerate_saturated_sublattices(l: &LatticeRecord, k: usize, volsq_bound: &Rational) -> Result<Vec<Sublattice>> {
    check_args(l, k, volsq_bound)?;
    let mut out = if k == 1 {
        primitive_lines(l, volsq_bound)
    } else if k + 1 == l.rank() {
        by_dual(l, volsq_bound)?
    } else {
        return enumerate_by_flags(l, k, volsq_bound);
    };
    out.sort();
    Ok(out)
}

fn by_dual(l: &LatticeRecord, bound: &Rational) -> Result<Vec<Sublattice>> {
    let r = l.rank();
    let det = l.volume_squared();
    let dual = inverse(l.gram()).ok_or_else(|| Error::Internal("singular Gram".into()))?;
    let dual_bound = bound / &det;
    let mut out = Vec::new();
    for w in short_vectors(&dual, &dual_bound, true) {
        if gcd_of(&w) != 1 {
            continue;
        }
        let red = column_reduce(&vec![w.clone()], r).ok_or_else(|| Error::Internal("zero dual vector".into()))?;
        let kernel: IntMatrix = (1..r).map(|j| (0..r).map(|i| red.u[i][j]).collect()).collect();
        let sub = Sublattice::from_rows(&kernel);
        debug_assert_eq!(
            l.sublattice_volume_squared(&sub),
            det.clone() * quadratic_form(&dual, &w.iter().map(|&x| rat(x)).collect::<Vec<_>>())
        );
        out.push(sub);
    }
    Ok(out)
}

/// General enumeration: every saturated rank-`k` sublattice `L` with
/// `Vol(L)² < B` contains a primitive `v` with `|v|² ≤ γ_k B^{1/k}`, and
/// `L/⟨v⟩` is a saturated rank-`(k-1)` sublattice of `Λ/⟨v⟩` with
/// `Vol² < B/|v|²`.
pub fn enumerate_by_flags(l: &LatticeRecord, k: usize, volsq_bound: &Rational) -> Result<Vec<Sublattice>> {
    check_args(l, k, volsq_bound)?;
    let mut found = BTreeSet::new();
    collect_by_flags(l, k, volsq_bound, &mut found)?;
    Ok(found.into_iter().collect())
}

fn collect_by_flags(l: &LatticeRecord, k: usize, bound: &Rational, found: &mut BTreeSet<Sublattice>) -> Result<()> {
    if k == 1 {
        found.extend(primitive_lines(l, bound));
        return Ok(());
    }
    let b = to_f64(bound);
    let radius = (HERMITE_POW[k] * b).powf(1.0 / k as f64);
    let gram = l.gram();
    for v in fincke_pohst(gram, radius * (1.0 + WIDEN) + WIDEN) {
        if gcd_of(&v) != 1 {
            continue;
        }
        let line = Sublattice::from_rows(&[v.clone()]);
        let norm = l.norm(&v);
        let rest = bound / &norm;
        let quotient = l.quotient(&line)?;
        let mut inner = BTreeSet::new();
        if k - 1 == quotient.lattice.rank() {
            if quotient.lattice.volume_squared() < rest {
                inner.insert(quotient.lattice.whole());
            }
        } else {
            collect_by_flags(&quotient.lattice, k - 1, &rest, &mut inner)?;
        }
        for m in inner {
            let sub = quotient.lift(&m);
            if l.sublattice_volume_squared(&sub) < *bound {
                found.insert(sub);
            }
        }
    }
    Ok(())
}

/// Squared length of a shortest nonzero vector.
pub fn minimum(l: &LatticeRecord) -> Rational {
    let mut bound = l.gram().iter().enumerate().map(|(i, row)| row[i].clone()).min().expect("rank >= 1");
    if bound.is_zero() {
        bound = rat(1);
    }
    short_vectors(l.gram(), &bound, false)
        .iter()
        .map(|v| l.norm(v))
        .min()
        .expect("basis vectors are within the bound")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn standard_plane() {
        let z2 = LatticeRecord::standard(2).unwrap();
        assert!(enumerate_saturated_sublattices(&z2, 1, &rat(1)).unwrap().is_empty());
        let subs = enumerate_saturated_sublattices(&z2, 1, &q(1001, 1000)).unwrap();
        assert_eq!(subs.len(), 2);
        let d = LatticeRecord::diagonal(&[q(1, 4), rat(4)]).unwrap();
        let subs = enumerate_saturated_sublattices(&d, 1, &rat(1)).unwrap();
        assert_eq!(subs, vec![Sublattice::from_rows(&[vec![1, 0]])]);
        assert!(enumerate_saturated_sublattices(&d, 2, &rat(1)).is_err());
        assert!(enumerate_saturated_sublattices(&d, 1, &rat(0)).is_err());
    }

    #[test]
    fn brute_force_lines() {
        let l = LatticeRecord::new(vec![
            vec![rat(3), q(1, 2), rat(-1)],
            vec![q(1, 2), rat(2), q(1, 3)],
            vec![rat(-1), q(1, 3), rat(4)],
        ])
        .unwrap();
        let bound = rat(9);
        let mut brute = BTreeSet::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    let v = vec![a, b, c];
                    if gcd_of(&v) == 1 && l.norm(&v) < bound {
                        brute.insert(Sublattice::from_rows(&[v]));
                    }
                }
            }
        }
        let got: BTreeSet<_> = enumerate_saturated_sublattices(&l, 1, &bound).unwrap().into_iter().collect();
        assert_eq!(got, brute);
        let flags: BTreeSet<_> = enumerate_by_flags(&l, 2, &rat(12)).unwrap().into_iter().collect();
        let dual: BTreeSet<_> = enumerate_saturated_sublattices(&l, 2, &rat(12)).unwrap().into_iter().collect();
        assert_eq!(flags, dual);
        assert!(!dual.is_empty());
    }

    #[test]
    fn lattice_minimum() {
        let l = LatticeRecord::from_integers(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(minimum(&l), rat(2));
    }
}
