//! The Fundamental Relation for volume-one lattices of rank at most 3:
//! `𝟙(p̄ ≤ p) = Σ_P (-1)^{|P|-1} #{flags of type P with deg Λ_i > p(r_i)}`.
//!
//! Cosets `P(ℤ)\G(ℤ)` are realized as flags of saturated sublattices.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::hn::{canonical_polygon, ln_compare};
use super::{LatticeRecord, Sublattice};
use crate::error::{Error, Result};
use crate::polygon::Polygon;
use crate::root_data::{standard_parabolics, ParabolicIndex};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalRelation {
    pub lhs: bool,
    pub rhs: i64,
    /// Flag counts per parabolic, `P = G` included with count 1.
    pub counts: Vec<(ParabolicIndex, usize)>,
}

pub fn fundamental_relation_check(l: &LatticeRecord, p: &Polygon<Rational>) -> Result<FundamentalRelation> {
    let r = l.rank();
    if r > 3 {
        return Err(Error::InvalidLattice("fundamental relation check supports rank <= 3".into()));
    }
    if l.volume_squared() != Rational::one() {
        return Err(Error::InvalidLattice("lattice must have volume 1".into()));
    }
    if p.rank() != r {
        return Err(Error::RankMismatch { expected: r, got: p.rank() });
    }
    if !p.is_convex() {
        return Err(Error::InvalidPolygon("polygon must be convex".into()));
    }
    let canon = canonical_polygon(l)?;
    let mut lhs = true;
    for i in 1..r {
        lhs &= canon.le_at(i, p.at(i))?;
    }
    let mut rhs = 0;
    let mut counts = Vec::new();
    for par in standard_parabolics(r)? {
        let n = count_flags(l, &par, p)?;
        rhs += if par.len() % 2 == 1 { n as i64 } else { -(n as i64) };
        counts.push((par, n));
    }
    Ok(FundamentalRelation { lhs, rhs, counts })
}

/// `deg Λ_i > p(r_i)`, i.e. `ln Vol(Λ_i)² < -2 p(r_i)`.
fn degree_exceeds(volsq: &Rational, p_i: &Rational) -> Result<bool> {
    ln_compare(volsq, &(-p_i * Rational::from_integer(BigInt::from(2))), true)
}

/// Number of flags of type `par` with `deg Λ_i > p(r_i)` at every cut.
pub fn count_flags(l: &LatticeRecord, par: &ParabolicIndex, p: &Polygon<Rational>) -> Result<usize> {
    let cuts = par.cuts();
    let mut count = 0;
    extend_flags(l, &cuts, p, None, &mut |_| count += 1)?;
    Ok(count)
}

/// All flags of type `par` meeting the degree conditions.
pub fn flags(l: &LatticeRecord, par: &ParabolicIndex, p: &Polygon<Rational>) -> Result<Vec<Vec<Sublattice>>> {
    let cuts = par.cuts();
    let mut out = Vec::new();
    extend_flags(l, &cuts, p, None, &mut |f: &[Sublattice]| out.push(f.to_vec()))?;
    Ok(out)
}

fn extend_flags(
    l: &LatticeRecord,
    cuts: &[usize],
    p: &Polygon<Rational>,
    prefix: Option<Vec<Sublattice>>,
    visit: &mut dyn FnMut(&[Sublattice]),
) -> Result<()> {
    let prefix = prefix.unwrap_or_default();
    let depth = prefix.len();
    if depth == cuts.len() {
        visit(&prefix);
        return Ok(());
    }
    let target = cuts[depth];
    let p_i = p.at(target);
    let limit = (-2.0 * p_i.to_f64().expect("finite")).exp();
    let candidates: Vec<Sublattice> = match prefix.last() {
        None => {
            let bound = Rational::from_float(limit * (1.0 + 1e-6) + 1e-12).expect("finite");
            super::enumerate_saturated_sublattices(l, target, &bound)?
        }
        Some(cur) => {
            let q = l.quotient(cur)?;
            let base = l.sublattice_volume_squared(cur);
            let rel = limit / base.to_f64().expect("finite");
            let bound = Rational::from_float(rel * (1.0 + 1e-6) + 1e-12).expect("finite");
            super::enumerate_saturated_sublattices(&q.lattice, target - cur.rank(), &bound)?
                .iter()
                .map(|m| q.lift(m))
                .collect()
        }
    };
    for sub in candidates {
        if degree_exceeds(&l.sublattice_volume_squared(&sub), p_i)? {
            let mut next = prefix.clone();
            next.push(sub);
            extend_flags(l, cuts, p, Some(next), visit)?;
        }
    }
    Ok(())
}
