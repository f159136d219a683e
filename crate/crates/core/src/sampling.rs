//! Seeded random inputs for the identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polygon::Polygon;
use crate::root_data::{ApartmentVector, ParabolicIndex};
use crate::scalar::{int, OrderedField, OrderedRing};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n / d` with `|n| <= num` and `1 <= d <= den`.
pub fn rational<S: OrderedField>(rng: &mut SeededRng, num: i64, den: i64) -> S {
    let n = rng.gen_range(-num..=num);
    let d = rng.gen_range(1..=den);
    S::from_int(n) / S::from_int(d)
}

/// Integer vector summing to zero. All chamber predicates are homogeneous, so
/// this covers random rational points after clearing denominators.
pub fn integer_apartment<S: OrderedRing>(rng: &mut SeededRng, rank: usize, bound: i64) -> ApartmentVector<S> {
    let mut coords: Vec<i64> = (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect();
    let total: i64 = coords.iter().sum();
    let mut out: Vec<S> = coords.iter_mut().map(|c| S::from_int(*c * rank as i64)).collect();
    for x in &mut out {
        *x = x.clone() - S::from_int(total);
    }
    ApartmentVector::new(out).expect("sums to zero")
}

pub fn rational_apartment<S: OrderedField>(rng: &mut SeededRng, rank: usize, num: i64, den: i64) -> ApartmentVector<S> {
    let coords: Vec<S> = (0..rank).map(|_| rational(rng, num, den)).collect();
    let mean = coords.iter().fold(S::zero(), |a, b| a + b.clone()) / int::<S>(rank);
    ApartmentVector::new(coords.into_iter().map(|c| c - mean.clone()).collect()).expect("sums to zero")
}

/// A random block-constant point of `𝔞_P`.
pub fn block_apartment<S: OrderedField>(rng: &mut SeededRng, par: &ParabolicIndex, num: i64, den: i64) -> ApartmentVector<S> {
    let blocks = par.blocks();
    let vals: Vec<S> = blocks.iter().map(|_| rational(rng, num, den)).collect();
    let mut coords = Vec::with_capacity(par.rank());
    for (d, v) in blocks.iter().zip(&vals) {
        coords.extend(std::iter::repeat(v.clone()).take(*d));
    }
    let mean = coords.iter().fold(S::zero(), |a, b| a + b.clone()) / int::<S>(par.rank());
    ApartmentVector::new(coords.into_iter().map(|c| c - mean.clone()).collect()).expect("sums to zero")
}

/// Random normalized polygon; convex means non-increasing slopes.
pub fn polygon<S: OrderedField>(rng: &mut SeededRng, rank: usize, convex: bool, num: i64, den: i64) -> Polygon<S> {
    let mut slopes: Vec<S> = (0..rank).map(|_| rational(rng, num, den)).collect();
    if convex {
        slopes.sort_by(|a, b| b.partial_cmp(a).expect("ordered"));
    }
    let mean = slopes.iter().fold(S::zero(), |a, b| a + b.clone()) / int::<S>(rank);
    let mut values = Vec::with_capacity(rank + 1);
    let mut acc = S::zero();
    values.push(acc.clone());
    for (i, s) in slopes.iter().enumerate() {
        acc = acc + s.clone() - mean.clone();
        values.push(if i + 1 == rank { S::zero() } else { acc.clone() });
    }
    Polygon::new(values).expect("normalized")
}

pub fn parabolic(rng: &mut SeededRng, rank: usize) -> ParabolicIndex {
    let all = if rank <= 1 { 0 } else { ((1u64 << rank) - 1) & !1 };
    ParabolicIndex::from_mask(rank, rng.gen::<u64>() & all)
}

/// A random rank-`r` lattice of volume 1: Gram `AᵀA` for an upper triangular
/// rational `A` whose diagonal has product 1, so every isometry class with
/// rational Iwasawa coordinates can occur.
pub fn volume_one_lattice(rng: &mut SeededRng, rank: usize, spread: i64) -> crate::lattice::LatticeRecord {
    use crate::Rational;
    let mut diag: Vec<Rational> = (0..rank.saturating_sub(1))
        .map(|_| {
            let n = rng.gen_range(1..=spread);
            let d = rng.gen_range(1..=spread);
            Rational::new(n.into(), d.into())
        })
        .collect();
    let prod = diag.iter().fold(Rational::from_integer(1.into()), |a, b| a * b);
    diag.push(num_traits::Inv::inv(prod));
    let mut a = vec![vec![Rational::from_integer(0.into()); rank]; rank];
    for i in 0..rank {
        a[i][i] = diag[i].clone();
        for j in i + 1..rank {
            a[i][j] = rational::<Rational>(rng, spread, spread);
        }
    }
    let at = crate::linalg::transpose(&a);
    crate::lattice::LatticeRecord::new(crate::linalg::mat_mul(&at, &a)).expect("positive definite")
}

/// A simplicial cone in dimension `n` with small rational generators and offset.
pub fn cone(rng: &mut SeededRng, n: usize, num: i64, den: i64) -> crate::cone::ConeRecord {
    use crate::Rational;
    loop {
        let gens: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| rational(rng, num, den)).collect()).collect();
        let offset = (0..n).map(|_| rational(rng, num, den)).collect();
        if let Ok(c) = crate::cone::ConeRecord::new(gens, offset) {
            return c;
        }
    }
}

/// `λ = Σ_j c_j μ_j`, so that `⟨λ, e_j⟩ = c_j`; the `c_j` are nonzero, and
/// negative when `negative` is set.
pub fn cone_exponent(rng: &mut SeededRng, cone: &crate::cone::ConeRecord, negative: bool, num: i64, den: i64) -> Vec<crate::Rational> {
    use crate::Rational;
    let n = cone.dim();
    let mut lambda = vec![Rational::from_int(0); n];
    for mu in cone.forms() {
        let mut c: Rational = Rational::from_int(0);
        while c == Rational::from_int(0) {
            c = rational(rng, num, den);
        }
        if negative && c > Rational::from_int(0) {
            c = -c;
        }
        for (l, m) in lambda.iter_mut().zip(mu) {
            *l += &c * m;
        }
    }
    lambda
}

/// A random polynomial in `n` variables of total degree at most `degree`.
pub fn cone_polynomial(rng: &mut SeededRng, n: usize, degree: u32, num: i64, den: i64) -> crate::cone::Polynomial<crate::Rational> {
    let mut terms = Vec::new();
    for _ in 0..3 {
        let mut e = vec![0u32; n];
        let mut left = rng.gen_range(0..=degree);
        while left > 0 {
            e[rng.gen_range(0..n)] += 1;
            left -= 1;
        }
        terms.push((e, rational(rng, num, den)));
    }
    let p = crate::cone::Polynomial::from_terms(n, terms);
    if p.is_zero() {
        crate::cone::Polynomial::one(n)
    } else {
        p
    }
}
