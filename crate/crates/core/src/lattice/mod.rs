//! Euclidean lattices of small rank over ℚ, given by exact Gram matrices.
//!
//! Sublattices are integer row matrices in the coordinates of the ambient
//! basis, kept in row Hermite normal form so that equal sublattices compare
//! equal.

pub mod enumerate;
pub mod fundrel;
pub mod hn;
pub mod intmat;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, mat_mul, transpose, Matrix};
use crate::Rational;
use intmat::{column_reduce, row_hnf, IntMatrix};

pub use enumerate::{enumerate_by_flags, enumerate_saturated_sublattices, short_vectors};
pub use fundrel::{fundamental_relation_check, FundamentalRelation};
pub use hn::{
    canonical_filtration, canonical_polygon, is_semistable, mu_max, mu_refined_parabolic, CanonicalPolygon, MuMax,
};

pub const MAX_RANK: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeRecord {
    gram: Matrix<Rational>,
}

/// A saturated sublattice, rows in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sublattice {
    rows: IntMatrix,
}

/// `0 ⊊ Λ_1 ⊊ ... ⊊ Λ_s = Λ`, the zero lattice omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    pub chain: Vec<Sublattice>,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn int_to_rat(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

/// `ln` of a positive rational, accurate for huge numerators/denominators.
pub fn ln_rational(x: &Rational) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

impl LatticeRecord {
    pub fn new(gram: Matrix<Rational>) -> Result<Self> {
        let r = gram.len();
        if r == 0 || r > MAX_RANK {
            return Err(Error::InvalidLattice(format!("rank {r} outside 1..={MAX_RANK}")));
        }
        if gram.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidLattice("Gram matrix is not square".into()));
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
                }
            }
        }
        for k in 1..=r {
            let minor: Matrix<Rational> = gram[..k].iter().map(|row| row[..k].to_vec()).collect();
            if !determinant(&minor).is_positive() {
                return Err(Error::InvalidLattice("Gram matrix is not positive definite".into()));
            }
        }
        Ok(Self { gram })
    }

    pub fn from_integers(gram: &[Vec<i64>]) -> Result<Self> {
        Self::new(gram.iter().map(|row| int_to_rat(row)).collect())
    }

    pub fn diagonal(entries: &[Rational]) -> Result<Self> {
        let r = entries.len();
        Self::new(
            (0..r)
                .map(|i| (0..r).map(|j| if i == j { entries[i].clone() } else { Rational::zero() }).collect())
                .collect(),
        )
    }

    pub fn standard(rank: usize) -> Result<Self> {
        Self::diagonal(&vec![Rational::one(); rank])
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix<Rational> {
        &self.gram
    }

    pub fn volume_squared(&self) -> Rational {
        determinant(&self.gram)
    }

    pub fn degree(&self) -> f64 {
        -0.5 * ln_rational(&self.volume_squared())
    }

    pub fn slope(&self) -> f64 {
        self.degree() / self.rank() as f64
    }

    /// `Λ[t]`: Gram matrix multiplied by `t²`.
    pub fn scale(&self, t: &Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::InvalidLattice("scale factor must be positive".into()));
        }
        let t2 = t * t;
        Ok(Self { gram: self.gram.iter().map(|row| row.iter().map(|x| x * &t2).collect()).collect() })
    }

    /// Rescale so that the volume is 1; needs `Vol²^{1/r}` rational.
    pub fn normalized(&self) -> Result<Self> {
        let v = self.volume_squared();
        let r = self.rank();
        let root = rational_root(&v, r as u32)
            .ok_or_else(|| Error::InvalidLattice("volume has no rational r-th root".into()))?;
        Ok(Self { gram: self.gram.iter().map(|row| row.iter().map(|x| x / &root).collect()).collect() })
    }

    /// Gram matrix `A G Aᵀ` of the lattice spanned by integer rows `A`.
    pub fn sub_gram(&self, rows: &IntMatrix) -> Matrix<Rational> {
        let a: Matrix<Rational> = rows.iter().map(|r| int_to_rat(r)).collect();
        mat_mul(&mat_mul(&a, &self.gram), &transpose(&a))
    }

    pub fn norm(&self, v: &[i64]) -> Rational {
        crate::linalg::quadratic_form(&self.gram, &int_to_rat(v))
    }

    pub fn sublattice_volume_squared(&self, sub: &Sublattice) -> Rational {
        determinant(&self.sub_gram(&sub.rows))
    }

    pub fn sublattice_degree(&self, sub: &Sublattice) -> f64 {
        -0.5 * ln_rational(&self.sublattice_volume_squared(sub))
    }

    /// The lattice structure induced on a sublattice, in its own row basis.
    pub fn restrict(&self, sub: &Sublattice) -> Self {
        Self { gram: self.sub_gram(&sub.rows) }
    }

    pub fn whole(&self) -> Sublattice {
        Sublattice { rows: intmat::identity(self.rank()) }
    }

    /// Saturation `(ℚ·gens) ∩ Λ` of the span of independent generators.
    pub fn saturate(&self, generators: &IntMatrix) -> Result<Sublattice> {
        let r = self.rank();
        if generators.is_empty() || generators.iter().any(|g| g.len() != r) {
            return Err(Error::InvalidLattice("generator rows must have length r".into()));
        }
        let red = column_reduce(generators, r).ok_or_else(|| Error::Degenerate("dependent generators".into()))?;
        Ok(Sublattice::from_rows(&red.v[..generators.len()]))
    }

    pub fn is_saturated(&self, generators: &IntMatrix) -> Result<bool> {
        let red = column_reduce(generators, self.rank()).ok_or_else(|| Error::Degenerate("dependent generators".into()))?;
        Ok((0..generators.len()).all(|i| red.lower[i][i] == 1))
    }

    /// `Λ / Λ_1` with Gram matrix the Schur complement of `Λ_1` in a basis
    /// extending it, i.e. the orthogonal projection away from `Λ_1`.
    pub fn quotient(&self, sub: &Sublattice) -> Result<Quotient> {
        let r = self.rank();
        let k = sub.rank();
        if sub.rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidLattice("sublattice rank mismatch".into()));
        }
        let red = column_reduce(&sub.rows, r).ok_or_else(|| Error::Degenerate("dependent generators".into()))?;
        if (0..k).any(|i| red.lower[i][i] != 1) {
            return Err(Error::InvalidLattice("sublattice is not saturated".into()));
        }
        let mut basis = sub.rows.clone();
        basis.extend(red.v[k..].iter().cloned());
        let g = self.sub_gram(&basis);
        let block = |rs: std::ops::Range<usize>, cs: std::ops::Range<usize>| -> Matrix<Rational> {
            g[rs].iter().map(|row| row[cs.clone()].to_vec()).collect()
        };
        let g11 = block(0..k, 0..k);
        let g12 = block(0..k, k..r);
        let g21 = block(k..r, 0..k);
        let g22 = block(k..r, k..r);
        let inv = inverse(&g11).ok_or_else(|| Error::Internal("singular sublattice Gram".into()))?;
        let corr = mat_mul(&mat_mul(&g21, &inv), &g12);
        let gram = g22
            .iter()
            .zip(&corr)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(Quotient { lattice: Self { gram }, sub: sub.clone(), lift: red.v[k..].to_vec() })
    }
}

/// `Λ / Λ_1` together with the data needed to pull sublattices back to `Λ`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub lattice: LatticeRecord,
    pub sub: Sublattice,
    lift: IntMatrix,
}

impl Quotient {
    /// Preimage in `Λ` of a sublattice of the quotient given in its coordinates.
    pub fn lift(&self, m: &Sublattice) -> Sublattice {
        let mut rows = self.sub.rows.clone();
        rows.extend(intmat::mul(&m.rows, &self.lift));
        Sublattice::from_rows(&rows)
    }

    pub fn lift_vector(&self, v: &[i64]) -> Vec<i64> {
        intmat::mul(&vec![v.to_vec()], &self.lift).remove(0)
    }
}

impl Sublattice {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        Self { rows: row_hnf(&rows.to_vec()) }
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Whether `self ⊆ other`, both given in the same ambient coordinates.
    pub fn is_contained_in(&self, other: &Sublattice) -> bool {
        let mut stacked = other.rows.clone();
        stacked.extend(self.rows.iter().cloned());
        row_hnf(&stacked) == other.rows
    }

    /// Coordinates of `self` in the row basis of `outer`.
    pub fn coordinates_in(&self, outer: &Sublattice) -> Result<IntMatrix> {
        let a: Matrix<Rational> = outer.rows.iter().map(|r| int_to_rat(r)).collect();
        let at = transpose(&a);
        let gram = mat_mul(&a, &at);
        let inv = inverse(&gram).ok_or_else(|| Error::Internal("degenerate outer sublattice".into()))?;
        let mut out = Vec::with_capacity(self.rank());
        for row in &self.rows {
            let x = mat_mul(&mat_mul(&vec![int_to_rat(row)], &at), &inv).remove(0);
            let mut ints = Vec::with_capacity(x.len());
            for c in &x {
                if !c.is_integer() {
                    return Err(Error::InvalidLattice("sublattice not contained in outer lattice".into()));
                }
                ints.push(c.to_integer().to_i64().ok_or_else(|| Error::Internal("coordinate overflow".into()))?);
            }
            out.push(ints);
        }
        let check = intmat::mul(&out, &outer.rows);
        if check != self.rows {
            return Err(Error::InvalidLattice("sublattice not contained in outer lattice".into()));
        }
        Ok(out)
    }

    /// Re-express a sublattice of `self` (given in `self`'s row coordinates)
    /// in ambient coordinates.
    pub fn push_forward(&self, inner: &Sublattice) -> Sublattice {
        Sublattice::from_rows(&intmat::mul(&inner.rows, &self.rows))
    }
}

impl Filtration {
    pub fn ranks(&self) -> Vec<usize> {
        self.chain.iter().map(|s| s.rank()).collect()
    }

    /// Validate a flag of `l`: strictly increasing ranks, each step saturated
    /// in `Λ`, nested, ending at `Λ` (appended when missing).
    pub fn validated(l: &LatticeRecord, chain: Vec<Sublattice>) -> Result<Self> {
        let mut chain: Vec<Sublattice> = chain.into_iter().map(|s| Sublattice::from_rows(&s.rows)).collect();
        if chain.last().map_or(true, |s| s.rank() != l.rank()) {
            chain.push(l.whole());
        }
        for (i, s) in chain.iter().enumerate() {
            if s.rows.iter().any(|r| r.len() != l.rank()) || !l.is_saturated(&s.rows)? {
                return Err(Error::InvalidLattice(format!("flag step {i} is not a saturated sublattice")));
            }
            if i > 0 && (s.rank() <= chain[i - 1].rank() || !chain[i - 1].is_contained_in(s)) {
                return Err(Error::InvalidLattice("flag is not strictly increasing".into()));
            }
        }
        Ok(Self { chain })
    }
}

/// Exact `k`-th root of a positive rational, if it exists.
pub fn rational_root(x: &Rational, k: u32) -> Option<Rational> {
    let n = x.numer().nth_root(k);
    let d = x.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *x.numer() && num_traits::pow(d.clone(), k as usize) == *x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn volumes() {
        let z3 = LatticeRecord::standard(3).unwrap();
        assert_eq!(z3.volume_squared(), rat(1));
        assert_eq!(z3.degree(), 0.0);
        let d = LatticeRecord::diagonal(&[q(1, 4), q(4, 1)]).unwrap();
        assert_eq!(d.volume_squared(), rat(1));
        let z2 = LatticeRecord::standard(2).unwrap();
        let s = Sublattice::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert_eq!(z2.sublattice_volume_squared(&s), rat(4));
        assert_eq!(z2.scale(&rat(2)).unwrap().volume_squared(), rat(16));
        assert!(z2.scale(&rat(0)).is_err());
        assert!(LatticeRecord::from_integers(&[vec![1, 2], vec![2, 1]]).is_err());
        assert!(LatticeRecord::from_integers(&[vec![1, 0], vec![1, 1]]).is_err());
    }

    #[test]
    fn saturation_and_quotient() {
        let z2 = LatticeRecord::standard(2).unwrap();
        let s = z2.saturate(&vec![vec![2, 0]]).unwrap();
        assert_eq!(s.rows(), &vec![vec![1, 0]]);
        let qt = z2.quotient(&s).unwrap();
        assert_eq!(qt.lattice.volume_squared(), rat(1));
        assert!(z2.quotient(&Sublattice { rows: vec![vec![2, 0]] }).is_err());
        assert!(z2.saturate(&vec![vec![1, 1], vec![2, 2]]).is_err());

        let l = LatticeRecord::new(vec![
            vec![rat(2), rat(1), rat(0)],
            vec![rat(1), rat(3), q(1, 2)],
            vec![rat(0), q(1, 2), rat(5)],
        ])
        .unwrap();
        let s = l.saturate(&vec![vec![2, 4, 6]]).unwrap();
        assert_eq!(s.rows(), &vec![vec![1, 2, 3]]);
        let qt = l.quotient(&s).unwrap();
        assert_eq!(l.sublattice_volume_squared(&s) * qt.lattice.volume_squared(), l.volume_squared());
        let lifted = qt.lift(&Sublattice::from_rows(&[vec![1, 0]]));
        assert_eq!(lifted.rank(), 2);
        assert!(s.is_contained_in(&lifted));
        assert!(l.is_saturated(lifted.rows()).unwrap());
    }

    #[test]
    fn coordinates() {
        let outer = Sublattice::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let inner = Sublattice::from_rows(&[vec![1, 1, 2]]);
        let c = inner.coordinates_in(&outer).unwrap();
        assert_eq!(c, vec![vec![1, 1]]);
        assert_eq!(outer.push_forward(&Sublattice::from_rows(&c)), inner);
        assert!(Sublattice::from_rows(&[vec![1, 0, 0]]).coordinates_in(&outer).is_err());
    }

    #[test]
    fn roots_and_logs() {
        assert_eq!(rational_root(&q(27, 8), 3), Some(q(3, 2)));
        assert_eq!(rational_root(&q(2, 1), 2), None);
        assert!((ln_rational(&q(1, 4)) + 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
        let big = Rational::from_integer(num_traits::pow(BigInt::from(10), 400));
        assert!((ln_rational(&big) - 400.0 * std::f64::consts::LN_10).abs() < 1e-9);
    }
}
