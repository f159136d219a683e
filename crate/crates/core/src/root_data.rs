//! The SL_r apartment: compositions, standard parabolics, roots, weights and
//! coroots with exact coefficients.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{int, sum, OrderedField, OrderedRing};

/// A composition of `r`, i.e. a standard parabolic subgroup of SL_r.
///
/// Stored as the bit set of its cuts `r_i = d_1 + ... + d_i`, bit `c` for
/// `1 <= c <= r - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParabolicIndex {
    rank: usize,
    cuts: u64,
}

impl ParabolicIndex {
    pub const MAX_RANK: usize = 63;

    pub fn new(blocks: &[usize]) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|&d| d == 0) {
            return Err(Error::InvalidComposition(format!("{blocks:?}")));
        }
        let rank: usize = blocks.iter().sum();
        if rank > Self::MAX_RANK {
            return Err(Error::InvalidComposition(format!("rank {rank} too large")));
        }
        let mut cuts = 0u64;
        let mut acc = 0;
        for &d in &blocks[..blocks.len() - 1] {
            acc += d;
            cuts |= 1 << acc;
        }
        Ok(Self { rank, cuts })
    }

    pub fn from_cuts(rank: usize, cuts: &[usize]) -> Result<Self> {
        check_rank(rank)?;
        let mut mask = 0u64;
        for &c in cuts {
            if c == 0 || c >= rank {
                return Err(Error::IndexOutOfRange { index: c, rank });
            }
            mask |= 1 << c;
        }
        Ok(Self { rank, cuts: mask })
    }

    /// The parabolic `P_I` attached to a subset `I` of the simple roots.
    pub fn from_subset(rank: usize, subset: &[usize]) -> Result<Self> {
        check_rank(rank)?;
        let mut mask = full_mask(rank);
        for &i in subset {
            if i == 0 || i >= rank {
                return Err(Error::IndexOutOfRange { index: i, rank });
            }
            mask &= !(1 << i);
        }
        Ok(Self { rank, cuts: mask })
    }

    pub(crate) fn from_mask(rank: usize, cuts: u64) -> Self {
        debug_assert_eq!(cuts & !full_mask(rank), 0);
        Self { rank, cuts }
    }

    pub fn borel(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self { rank, cuts: full_mask(rank) })
    }

    pub fn whole(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self { rank, cuts: 0 })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mask(&self) -> u64 {
        self.cuts
    }

    /// Number of blocks `|P|`.
    pub fn len(&self) -> usize {
        self.cuts.count_ones() as usize + 1
    }

    pub fn is_whole(&self) -> bool {
        self.cuts == 0
    }

    pub fn is_borel(&self) -> bool {
        self.cuts == full_mask(self.rank)
    }

    pub fn is_cut(&self, c: usize) -> bool {
        c < 64 && self.cuts >> c & 1 == 1
    }

    pub fn cuts(&self) -> Vec<usize> {
        (1..self.rank).filter(|&c| self.is_cut(c)).collect()
    }

    pub fn blocks(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut prev = 0;
        for c in self.cuts().into_iter().chain(std::iter::once(self.rank)) {
            out.push(c - prev);
            prev = c;
        }
        out
    }

    /// `I(P)`: the simple roots that are not cuts.
    pub fn subset(&self) -> Vec<usize> {
        (1..self.rank).filter(|&c| !self.is_cut(c)).collect()
    }

    /// Block boundaries `0 = r_0 < r_1 < ... < r_n = r`.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut out = vec![0];
        out.extend(self.cuts());
        out.push(self.rank);
        out
    }

    /// `self ⊂ other`: every cut of `other` is a cut of `self`.
    pub fn is_contained_in(&self, other: &Self) -> bool {
        self.rank == other.rank && other.cuts & !self.cuts == 0
    }

    /// Nearest boundaries `a < c < b` of `self` around a position `c` that is
    /// not itself one of its cuts.
    pub fn enclosing(&self, c: usize) -> (usize, usize) {
        let below = self.cuts & ((1u64 << c) - 1);
        let a = if below == 0 { 0 } else { 63 - below.leading_zeros() as usize };
        let above = self.cuts & !((1u64 << (c + 1)) - 1);
        let b = if above == 0 { self.rank } else { above.trailing_zeros() as usize };
        (a, b)
    }

    /// All `R` with `self ⊂ R ⊂ upper`, in lexicographic order of cut sets.
    pub fn between(&self, upper: &Self) -> Result<Vec<Self>> {
        ensure_nested(self, upper)?;
        let free = self.cuts & !upper.cuts;
        let mut out: Vec<Self> = submasks(free)
            .map(|m| Self { rank: self.rank, cuts: upper.cuts | m })
            .collect();
        out.sort();
        Ok(out)
    }
}

impl Ord for ParabolicIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.cuts().cmp(&other.cuts()))
    }
}

impl PartialOrd for ParabolicIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ParabolicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", self.blocks())
    }
}

impl fmt::Display for ParabolicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks().iter().map(|d| d.to_string()).collect();
        write!(f, "({})", blocks.join(","))
    }
}

fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 || rank > ParabolicIndex::MAX_RANK {
        return Err(Error::InvalidComposition(format!("rank {rank}")));
    }
    Ok(())
}

fn full_mask(rank: usize) -> u64 {
    if rank <= 1 {
        0
    } else {
        ((1u64 << rank) - 1) & !1
    }
}

/// Iterate over every submask of `mask`, including 0 and `mask` itself.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

pub(crate) fn ensure_nested(q: &ParabolicIndex, p: &ParabolicIndex) -> Result<()> {
    if q.rank != p.rank {
        return Err(Error::RankMismatch { expected: q.rank, got: p.rank });
    }
    if !q.is_contained_in(p) {
        return Err(Error::NotNested(format!("{q} is not contained in {p}")));
    }
    Ok(())
}

pub fn standard_parabolics(rank: usize) -> Result<Vec<ParabolicIndex>> {
    check_rank(rank)?;
    ParabolicIndex::borel(rank)?.between(&ParabolicIndex::whole(rank)?)
}

/// A point of the apartment: `r` coordinates summing to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ApartmentVector<S> {
    coords: Vec<S>,
}

impl<S: OrderedRing> ApartmentVector<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidComposition("empty vector".into()));
        }
        if !sum(&coords).is_zero() {
            return Err(Error::NotInApartment);
        }
        Ok(Self { coords })
    }

    pub fn zero(rank: usize) -> Self {
        Self { coords: vec![S::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other.rank())?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Self { coords })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other.rank())?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { coords })
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scale(&self, t: &S) -> Self {
        Self { coords: self.coords.iter().map(|a| a.clone() * t.clone()).collect() }
    }

    /// Partial sums `H_1 + ... + H_k` for `k = 0..=r`.
    pub fn partial_sums(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.coords.len() + 1);
        let mut acc = S::zero();
        out.push(acc.clone());
        for h in &self.coords {
            acc = acc + h.clone();
            out.push(acc.clone());
        }
        out
    }

    pub(crate) fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, got: self.rank() });
        }
        Ok(())
    }
}

/// A linear form on the apartment, stored with coefficients summing to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<S> {
    coeffs: Vec<S>,
}

impl<S: OrderedField> LinearForm<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidComposition("empty form".into()));
        }
        let mean = sum(&coeffs) / int::<S>(coeffs.len());
        Ok(Self { coeffs: coeffs.into_iter().map(|c| c - mean.clone()).collect() })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn eval(&self, h: &ApartmentVector<S>) -> Result<S> {
        h.check_rank(self.rank())?;
        Ok(self.eval_coords(h.coords()))
    }

    pub(crate) fn eval_coords(&self, h: &[S]) -> S {
        self.coeffs
            .iter()
            .zip(h)
            .fold(S::zero(), |acc, (c, x)| acc + c.clone() * x.clone())
    }

    /// Coefficients `c_1..c_{r-1}` with `self = Σ c_k α_k` on the apartment.
    pub fn simple_root_coefficients(&self) -> Vec<S> {
        let mut acc = S::zero();
        self.coeffs[..self.rank() - 1]
            .iter()
            .map(|f| {
                acc = acc.clone() + f.clone();
                acc.clone()
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: other.rank() });
        }
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn scale(&self, t: &S) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.clone() * t.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }
}

fn check_index(i: usize, rank: usize) -> Result<()> {
    if i == 0 || i >= rank {
        return Err(Error::IndexOutOfRange { index: i, rank });
    }
    Ok(())
}

pub fn simple_root<S: OrderedField>(i: usize, rank: usize) -> Result<LinearForm<S>> {
    check_index(i, rank)?;
    let mut c = vec![S::zero(); rank];
    c[i - 1] = S::one();
    c[i] = -S::one();
    LinearForm::new(c)
}

pub fn fundamental_weight<S: OrderedField>(i: usize, rank: usize) -> Result<LinearForm<S>> {
    check_index(i, rank)?;
    let mut c = vec![S::zero(); rank];
    for x in &mut c[..i] {
        *x = S::one();
    }
    LinearForm::new(c)
}

pub fn coroot<S: OrderedRing>(i: usize, rank: usize) -> Result<ApartmentVector<S>> {
    check_index(i, rank)?;
    let mut c = vec![S::zero(); rank];
    c[i - 1] = S::one();
    c[i] = -S::one();
    Ok(ApartmentVector { coords: c })
}

pub fn half_sum_positive_roots<S: OrderedField>(rank: usize) -> Result<LinearForm<S>> {
    check_rank(rank)?;
    let two = int::<S>(2);
    let c = (0..rank)
        .map(|k| (int::<S>(rank) - int::<S>(2 * k + 1)) / two.clone())
        .collect();
    LinearForm::new(c)
}

/// Split `H = H_P + H_0^P` into its block-mean part and the remainder.
pub fn project<S: OrderedField>(
    h: &ApartmentVector<S>,
    p: &ParabolicIndex,
) -> Result<(ApartmentVector<S>, ApartmentVector<S>)> {
    h.check_rank(p.rank())?;
    let bounds = p.boundaries();
    let mut hp = Vec::with_capacity(h.rank());
    for w in bounds.windows(2) {
        let mean = sum(&h.coords[w[0]..w[1]]) / int::<S>(w[1] - w[0]);
        hp.extend(std::iter::repeat(mean).take(w[1] - w[0]));
    }
    let hp = ApartmentVector { coords: hp };
    let h0 = h.sub(&hp)?;
    Ok((hp, h0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q64;

    fn q(n: i64, d: i64) -> Q64 {
        Q64::new(n, d)
    }

    fn v(xs: &[(i64, i64)]) -> ApartmentVector<Q64> {
        ApartmentVector::new(xs.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn compositions_of_two_and_three() {
        let ps = standard_parabolics(2).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].blocks(), vec![2]);
        assert_eq!(ps[0].subset(), vec![1]);
        assert_eq!(ps[1].blocks(), vec![1, 1]);
        assert!(ps[1].subset().is_empty());

        let p = ParabolicIndex::new(&[1, 2]).unwrap();
        assert_eq!(p.subset(), vec![2]);
        assert!(ParabolicIndex::new(&[1, 1, 1]).unwrap().subset().is_empty());
        let cuts: Vec<Vec<usize>> = standard_parabolics(3).unwrap().iter().map(|p| p.cuts()).collect();
        assert_eq!(cuts, vec![vec![], vec![1], vec![1, 2], vec![2]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(standard_parabolics(0).is_err());
        assert!(ParabolicIndex::new(&[2, 0]).is_err());
        assert!(simple_root::<Q64>(3, 3).is_err());
        assert!(coroot::<Q64>(0, 3).is_err());
        assert!(ApartmentVector::new(vec![q(1, 1), q(1, 1)]).is_err());
        let p = ParabolicIndex::new(&[1, 1]).unwrap();
        assert!(project(&v(&[(1, 1), (0, 1), (-1, 1)]), &p).is_err());
    }

    #[test]
    fn weights_and_coroots() {
        let h = v(&[(1, 1), (0, 1), (-1, 1)]);
        assert_eq!(fundamental_weight::<Q64>(1, 3).unwrap().eval(&h).unwrap(), q(1, 1));
        for i in 1..3 {
            for j in 1..3 {
                let w = fundamental_weight::<Q64>(i, 3).unwrap();
                let val = w.eval(&coroot(j, 3).unwrap()).unwrap();
                assert_eq!(val, q((i == j) as i64, 1));
            }
        }
        let t = v(&[(3, 7), (-3, 7)]);
        assert_eq!(simple_root::<Q64>(1, 2).unwrap().eval(&t).unwrap(), q(6, 7));
    }

    #[test]
    fn rho_coordinates() {
        assert_eq!(half_sum_positive_roots::<Q64>(2).unwrap().coeffs(), &[q(1, 2), q(-1, 2)]);
        assert_eq!(half_sum_positive_roots::<Q64>(3).unwrap().coeffs(), &[q(1, 1), q(0, 1), q(-1, 1)]);
    }

    #[test]
    fn rho_is_half_sum() {
        for r in 2..=6 {
            let mut acc = LinearForm::new(vec![q(0, 1); r]).unwrap();
            for i in 0..r {
                for j in i + 1..r {
                    let mut c = vec![q(0, 1); r];
                    c[i] = q(1, 1);
                    c[j] = q(-1, 1);
                    acc = acc.add(&LinearForm::new(c).unwrap()).unwrap();
                }
            }
            assert_eq!(acc.scale(&q(1, 2)), half_sum_positive_roots(r).unwrap());
        }
    }

    #[test]
    fn projection_example() {
        let p = ParabolicIndex::new(&[2, 1]).unwrap();
        let (hp, h0) = project(&v(&[(1, 1), (0, 1), (-1, 1)]), &p).unwrap();
        assert_eq!(hp, v(&[(1, 2), (1, 2), (-1, 1)]));
        assert_eq!(h0, v(&[(1, 2), (-1, 2), (0, 1)]));

        let h = v(&[(2, 3), (-1, 1), (1, 3)]);
        let (hp, h0) = project(&h, &ParabolicIndex::borel(3).unwrap()).unwrap();
        assert_eq!(hp, h);
        assert_eq!(h0, ApartmentVector::zero(3));
        let (hp, _) = project(&h, &ParabolicIndex::whole(3).unwrap()).unwrap();
        assert_eq!(hp, ApartmentVector::zero(3));
    }

    #[test]
    fn enclosing_boundaries() {
        let p = ParabolicIndex::new(&[2, 3, 1]).unwrap();
        assert_eq!(p.enclosing(1), (0, 2));
        assert_eq!(p.enclosing(3), (2, 5));
        assert_eq!(p.enclosing(4), (2, 5));
        let g = ParabolicIndex::whole(4).unwrap();
        assert_eq!(g.enclosing(2), (0, 4));
    }

    #[test]
    fn form_equality_is_structural() {
        let a = LinearForm::new(vec![q(1, 1), q(2, 1), q(3, 1)]).unwrap();
        let b = LinearForm::new(vec![q(0, 1), q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(a, b);
    }
}
