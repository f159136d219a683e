//! Normalized polygons on `[0, r]`, the orders `>_P` and `▷_P`, the character
//! `T(p)` and the cone description of `𝟙(p_P^g >_P p)`.

use crate::error::{Error, Result};
pub use crate::linalg::{determinant, mat_mul, Matrix};
use crate::root_data::{simple_root, ApartmentVector, LinearForm, ParabolicIndex};
use crate::scalar::{int, OrderedField, OrderedRing};
use crate::trunc::tau;

/// Values `p(0), ..., p(r)` with `p(0) = p(r) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon<S> {
    values: Vec<S>,
}

impl<S: OrderedRing> Polygon<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidPolygon("need at least two values".into()));
        }
        if !values[0].is_zero() || !values[values.len() - 1].is_zero() {
            return Err(Error::InvalidPolygon("not normalized: p(0) and p(r) must vanish".into()));
        }
        Ok(Self { values })
    }

    pub fn zero(rank: usize) -> Self {
        Self { values: vec![S::zero(); rank + 1] }
    }

    pub fn rank(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn at(&self, i: usize) -> &S {
        &self.values[i]
    }

    /// Slopes `p(i+1) - p(i)` are non-increasing.
    pub fn is_convex(&self) -> bool {
        self.values.windows(3).all(|w| w[0].clone() + w[2].clone() <= w[1].clone() + w[1].clone())
    }

    fn check(&self, other: &Self, p: &ParabolicIndex) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: other.rank() });
        }
        if p.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: p.rank() });
        }
        Ok(())
    }
}

/// `q >_P p`: `q(r_i) > p(r_i)` at every cut of `P`.
pub fn bigger<S: OrderedRing>(q: &Polygon<S>, p: &Polygon<S>, par: &ParabolicIndex) -> Result<bool> {
    q.check(p, par)?;
    Ok(par.cuts().into_iter().all(|c| q.values[c] > p.values[c]))
}

/// `q ▷_P p`: the averages `(q - p)(r_i) / r_i` decrease strictly along the
/// cuts of `P` down to `(q - p)(r) / r = 0`.
pub fn strongly_bigger<S: OrderedRing>(q: &Polygon<S>, p: &Polygon<S>, par: &ParabolicIndex) -> Result<bool> {
    q.check(p, par)?;
    let bounds = par.boundaries();
    let f = |i: usize| q.values[i].clone() - p.values[i].clone();
    Ok(bounds[1..].windows(2).all(|w| f(w[0]) * int::<S>(w[1]) > f(w[1]) * int::<S>(w[0])))
}

/// `T(p) = (p(1), p(2) - p(1), ..., p(r-1) - p(r-2), -p(r-1))`.
pub fn character_t<S: OrderedRing>(p: &Polygon<S>) -> ApartmentVector<S> {
    let coords = p.values.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    ApartmentVector::new(coords).expect("telescoping sum vanishes")
}

/// The polygon with `p(r_i) = -(H_1 + ... + H_{r_i})` at the cuts of `P`,
/// affine in between.
pub fn polygon_of_apartment<S: OrderedField>(h: &ApartmentVector<S>, par: &ParabolicIndex) -> Result<Polygon<S>> {
    h.check_rank(par.rank())?;
    let ps = h.partial_sums();
    let mut values = vec![S::zero(); par.rank() + 1];
    let bounds = par.boundaries();
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (va, vb) = (-ps[a].clone(), -ps[b].clone());
        for (k, v) in values.iter_mut().enumerate().take(b + 1).skip(a) {
            *v = va.clone() + (vb.clone() - va.clone()) * int::<S>(k - a) / int::<S>(b - a);
        }
    }
    Polygon::new(values)
}

/// Both sides of the bridge between chamber conditions and polygon order:
/// `τ_P(-H - T(p))` and `p_P(H) ▷_P p`. No convexity requirement.
pub fn bridge_sides<S: OrderedField>(
    h: &ApartmentVector<S>,
    p: &Polygon<S>,
    par: &ParabolicIndex,
) -> Result<(bool, bool)> {
    if p.rank() != par.rank() {
        return Err(Error::RankMismatch { expected: par.rank(), got: p.rank() });
    }
    let g = ParabolicIndex::whole(par.rank())?;
    let arg = h.neg().sub(&character_t(p))?;
    let lhs = tau(par, &g, &arg)?;
    let rhs = strongly_bigger(&polygon_of_apartment(h, par)?, p, par)?;
    Ok((lhs, rhs))
}

pub fn bridge_check<S: OrderedField>(
    h: &ApartmentVector<S>,
    p: &Polygon<S>,
    par: &ParabolicIndex,
) -> Result<(bool, bool)> {
    if !p.is_convex() {
        return Err(Error::InvalidPolygon("bridge check needs a convex polygon".into()));
    }
    bridge_sides(h, p, par)
}

/// The `(|P|-1) × (|P|-1)` matrix `M` for the cone of `𝟙(p_P >_P p)`, and its
/// inverse `M^{-1}_{ij} = [j ≤ i] - r_i / r`.
pub fn cone_matrix<S: OrderedField>(par: &ParabolicIndex) -> Result<(Matrix<S>, Matrix<S>)> {
    let n = par.len();
    if n < 2 {
        return Err(Error::InvalidComposition("cone matrix needs |P| >= 2".into()));
    }
    let d = par.blocks();
    let cuts = par.cuts();
    let m = n - 1;
    let dn = int::<S>(d[n - 1]);
    let mut mat = vec![vec![S::zero(); m]; m];
    for j in 0..m {
        mat[j][j] = S::one();
        if j > 0 {
            mat[j][j - 1] = -S::one();
        }
        mat[j][m - 1] = mat[j][m - 1].clone() + int::<S>(d[j]) / dn.clone();
    }
    let r = int::<S>(par.rank());
    let inv = (0..m)
        .map(|i| {
            let ri = int::<S>(cuts[i]) / r.clone();
            (0..m)
                .map(|j| if j <= i { S::one() - ri.clone() } else { -ri.clone() })
                .collect()
        })
        .collect();
    Ok((mat, inv))
}

/// Coefficients of the forms `L_i` in the basis `α_{r_1}, ..., α_{r_{n-1}}`:
/// `L_i = Σ_{j<i} r_j α_{r_j} + Σ_j a_{ji} α_{r_j}` with `A_i = M^{-1} R_i`.
pub fn indicator_cone_coefficients<S: OrderedField>(par: &ParabolicIndex) -> Result<Matrix<S>> {
    let (_, inv) = cone_matrix::<S>(par)?;
    let cuts = par.cuts();
    let m = cuts.len();
    Ok((0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let base = if j < i { int::<S>(cuts[j]) } else { S::zero() };
                    base + inv[j][i].clone() * int::<S>(cuts[i])
                })
                .collect()
        })
        .collect())
}

/// The forms `L_i` and thresholds `p(r_i)`: on `𝔞_P`,
/// `p_P >_P p ⇔ L_i(H) > p(r_i)` for all `i`.
pub fn indicator_cone_forms<S: OrderedField>(par: &ParabolicIndex, p: &Polygon<S>) -> Result<Vec<(LinearForm<S>, S)>> {
    if p.rank() != par.rank() {
        return Err(Error::RankMismatch { expected: par.rank(), got: p.rank() });
    }
    let coeffs = indicator_cone_coefficients::<S>(par)?;
    let cuts = par.cuts();
    let r = par.rank();
    let mut out = Vec::with_capacity(cuts.len());
    for (i, row) in coeffs.iter().enumerate() {
        let mut form = LinearForm::new(vec![S::zero(); r])?;
        for (j, a) in row.iter().enumerate() {
            form = form.add(&simple_root::<S>(cuts[j], r)?.scale(a))?;
        }
        out.push((form, p.values[cuts[i]].clone()));
    }
    Ok(out)
}
