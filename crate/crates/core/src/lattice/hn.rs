//! Semistability, maximal destabilizing sublattices and the canonical
//! (Harder–Narasimhan) filtration.
//!
//! Slopes are compared exactly: `μ(A) > μ(B)` iff `Vol(A)^{2 rk B} < Vol(B)^{2 rk A}`.

use std::cmp::Ordering;

use num_traits::{One, ToPrimitive, Zero};

use super::{ln_rational, pow, Filtration, LatticeRecord, Sublattice};
use crate::error::{Error, Result};
use crate::polygon::Polygon;
use crate::Rational;

/// `Greater` when the slope of `(va, ka)` exceeds the slope of `(vb, kb)`;
/// `v` are squared volumes, `k` ranks.
pub fn compare_slopes(va: &Rational, ka: usize, vb: &Rational, kb: usize) -> Ordering {
    pow(vb, ka).cmp(&pow(va, kb))
}

/// A rational strictly above `v^{num/den}`.
pub(crate) fn upper_power_bound(v: &Rational, num: usize, den: usize) -> Rational {
    let f = v.to_f64().expect("finite").powf(num as f64 / den as f64);
    Rational::from_float(f * (1.0 + 1e-6) + 1e-12).expect("finite bound")
}

/// Decide `ln x < c` (or `≤` when `!strict`); exact when `c = 0`.
pub fn ln_compare(x: &Rational, c: &Rational, strict: bool) -> Result<bool> {
    if c.is_zero() {
        let one = Rational::one();
        return Ok(if strict { *x < one } else { *x <= one });
    }
    let lx = ln_rational(x);
    let cf = c.to_f64().expect("finite");
    if (lx - cf).abs() <= 1e-9 * (1.0 + cf.abs()) {
        return Err(Error::Undecidable(format!("ln({x}) against {c} is within float resolution")));
    }
    Ok(lx < cf)
}

/// Saturated rank-`k` sublattices with slope at least `μ(Λ)` (strictly above
/// when `strict`).
fn candidates(l: &LatticeRecord, k: usize, strict: bool) -> Result<Vec<(Sublattice, Rational)>> {
    let r = l.rank();
    let total = l.volume_squared();
    let bound = upper_power_bound(&total, k, r);
    let target = pow(&total, k);
    let mut out = Vec::new();
    for sub in super::enumerate_saturated_sublattices(l, k, &bound)? {
        let v = l.sublattice_volume_squared(&sub);
        let p = pow(&v, r);
        if p < target || (!strict && p == target) {
            out.push((sub, v));
        }
    }
    Ok(out)
}

pub fn is_semistable(l: &LatticeRecord) -> Result<bool> {
    Ok(destabilizing(l)?.is_none())
}

/// Some proper sublattice of slope strictly above `μ(Λ)`, if any.
pub fn destabilizing(l: &LatticeRecord) -> Result<Option<Sublattice>> {
    for k in 1..l.rank() {
        if let Some((s, _)) = candidates(l, k, true)?.into_iter().next() {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuMax {
    pub slope: f64,
    pub volume_squared: Rational,
    pub rank: usize,
    pub witness: Sublattice,
}

/// The sublattice of maximal slope, of maximal rank among those; remaining
/// ties go to the lexicographically smallest Hermite normal form.
pub fn mu_max(l: &LatticeRecord) -> Result<MuMax> {
    let r = l.rank();
    let mut best = (l.whole(), l.volume_squared(), r);
    for k in 1..r {
        for (sub, v) in candidates(l, k, false)? {
            let ord = compare_slopes(&v, k, &best.1, best.2)
                .then(k.cmp(&best.2))
                .then_with(|| best.0.cmp(&sub));
            if ord == Ordering::Greater {
                best = (sub, v, k);
            }
        }
    }
    let (witness, v, rank) = best;
    Ok(MuMax { slope: -0.5 * ln_rational(&v) / rank as f64, volume_squared: v, rank, witness })
}

/// Greedy construction: `Λ_1` is the maximal destabilizing sublattice, then
/// recurse on `Λ/Λ_1` and pull back.
pub fn canonical_filtration(l: &LatticeRecord) -> Result<Filtration> {
    let mut chain: Vec<Sublattice> = Vec::new();
    loop {
        let next = match chain.last() {
            None => mu_max(l)?.witness,
            Some(cur) => {
                let q = l.quotient(cur)?;
                q.lift(&mu_max(&q.lattice)?.witness)
            }
        };
        let done = next.rank() == l.rank();
        chain.push(next);
        if done {
            return Ok(Filtration { chain });
        }
    }
}

/// The canonical polygon, with its vertices kept exactly as
/// `(rank, Vol²)` pairs including `(0, 1)` and `(r, Vol(Λ)²)`.
#[derive(Clone, Debug)]
pub struct CanonicalPolygon {
    pub vertices: Vec<(usize, Rational)>,
    pub polygon: Polygon<f64>,
}

pub fn canonical_polygon(l: &LatticeRecord) -> Result<CanonicalPolygon> {
    let filt = canonical_filtration(l)?;
    Ok(polygon_of_flag(l, &filt))
}

/// The polygon of a flag: `p(rk Λ_i) = deg Λ_i - rk Λ_i · deg Λ / r`, affine in between.
pub fn polygon_of_flag(l: &LatticeRecord, filt: &Filtration) -> CanonicalPolygon {
    let r = l.rank();
    let mut vertices = vec![(0, Rational::one())];
    vertices.extend(filt.chain.iter().map(|s| (s.rank(), l.sublattice_volume_squared(s))));
    let deg_total = l.degree();
    let deg: Vec<(usize, f64)> = vertices.iter().map(|(k, v)| (*k, -0.5 * ln_rational(v))).collect();
    let mut values = vec![0.0; r + 1];
    for w in deg.windows(2) {
        let ((a, da), (b, db)) = (w[0], w[1]);
        for (i, val) in values.iter_mut().enumerate().take(b + 1).skip(a) {
            let t = (i - a) as f64 / (b - a) as f64;
            *val = da + t * (db - da) - i as f64 * deg_total / r as f64;
        }
    }
    values[0] = 0.0;
    values[r] = 0.0;
    CanonicalPolygon { vertices, polygon: Polygon::new(values).expect("endpoints vanish") }
}

impl CanonicalPolygon {
    fn segment(&self, i: usize) -> (&(usize, Rational), &(usize, Rational)) {
        let j = self.vertices.iter().position(|(k, _)| *k >= i).expect("i <= r");
        if self.vertices[j].0 == i || j == 0 {
            (&self.vertices[j], &self.vertices[j])
        } else {
            (&self.vertices[j - 1], &self.vertices[j])
        }
    }

    /// Exactly: a rank-`k` sublattice of squared volume `v` has degree at most
    /// the polygon's (unnormalized) value at `k`.
    pub fn dominates(&self, k: usize, v: &Rational) -> bool {
        let ((a, va), (b, vb)) = self.segment(k);
        if a == b {
            return v >= va;
        }
        pow(v, b - a) >= pow(va, b - k) * pow(vb, k - a)
    }

    /// `p̄(i) ≤ p_i`.
    pub fn le_at(&self, i: usize, p_i: &Rational) -> Result<bool> {
        let r = self.vertices.last().expect("nonempty").0;
        let total = self.vertices.last().expect("nonempty").1.clone();
        let ((a, va), (b, vb)) = self.segment(i);
        let (a, b) = (*a, *b);
        let span = if a == b { 1 } else { b - a };
        let (ea, eb) = if a == b { (1, 0) } else { (b - i, i - a) };
        let x = pow(&total, i * span) / (pow(va, r * ea) * pow(vb, r * eb));
        let c = p_i * Rational::from_integer((2 * span * r).into());
        ln_compare(&x, &c, false)
    }
}

/// The `P`-canonical filtration: each step `Λ_{j-1} ⊂ Λ_j` of the flag refined
/// by the canonical filtration of `Λ_j / Λ_{j-1}`. Returns the steps and,
/// for each, whether it belongs to the original flag.
pub fn p_canonical_filtration(l: &LatticeRecord, flag: &Filtration) -> Result<Vec<(Sublattice, bool)>> {
    let flag = Filtration::validated(l, flag.chain.clone())?;
    let mut out = Vec::new();
    let mut prev: Option<&Sublattice> = None;
    for outer in &flag.chain {
        let m = l.restrict(outer);
        let pieces = match prev {
            None => canonical_filtration(&m)?.chain,
            Some(inner) => {
                let coords = Sublattice::from_rows(&inner.coordinates_in(outer)?);
                let q = m.quotient(&coords)?;
                canonical_filtration(&q.lattice)?.chain.iter().map(|s| q.lift(s)).collect()
            }
        };
        let n = pieces.len();
        for (i, s) in pieces.into_iter().enumerate() {
            out.push((outer.push_forward(&s), i + 1 == n));
        }
        prev = Some(outer);
    }
    Ok(out)
}

/// `^μQ̄_P`: the flag of `P` together with the steps of the `P`-canonical
/// filtration whose slope drops by more than `mu`.
pub fn mu_refined_parabolic(l: &LatticeRecord, flag: &Filtration, mu: f64) -> Result<Filtration> {
    if !(mu >= 0.0) {
        return Err(Error::InvalidLattice("mu must be non-negative".into()));
    }
    let steps = p_canonical_filtration(l, flag)?;
    let vols: Vec<(usize, Rational)> = std::iter::once((0, Rational::one()))
        .chain(steps.iter().map(|(s, _)| (s.rank(), l.sublattice_volume_squared(s))))
        .collect();
    let graded = |j: usize| -> (Rational, usize) { (&vols[j].1 / &vols[j - 1].1, vols[j].0 - vols[j - 1].0) };
    let slope = |j: usize| -> f64 {
        let (v, k) = graded(j);
        -0.5 * ln_rational(&v) / k as f64
    };
    let mut chain = Vec::new();
    for (j, (s, in_flag)) in steps.iter().enumerate() {
        let idx = j + 1;
        let keep = *in_flag || idx == steps.len() || {
            if mu == 0.0 {
                let (va, ka) = graded(idx);
                let (vb, kb) = graded(idx + 1);
                compare_slopes(&va, ka, &vb, kb) == Ordering::Greater
            } else {
                slope(idx) - slope(idx + 1) > mu + 1e-12 * (1.0 + mu)
            }
        };
        if keep {
            chain.push(s.clone());
        }
    }
    Ok(Filtration { chain })
}

/// Exact check of the two Harder–Narasimhan conditions on a filtration:
/// semistable graded pieces and strictly decreasing slopes.
pub fn verify_hn(l: &LatticeRecord, filt: &Filtration) -> Result<bool> {
    let mut vols = vec![(0usize, Rational::one())];
    vols.extend(filt.chain.iter().map(|s| (s.rank(), l.sublattice_volume_squared(s))));
    let mut prev: Option<&Sublattice> = None;
    for s in &filt.chain {
        let piece = match prev {
            None => l.restrict(s),
            Some(inner) => {
                let m = l.restrict(s);
                let coords = Sublattice::from_rows(&inner.coordinates_in(s)?);
                m.quotient(&coords)?.lattice
            }
        };
        if !is_semistable(&piece)? {
            return Ok(false);
        }
        prev = Some(s);
    }
    for j in 1..vols.len() - 1 {
        let (va, ka) = (&vols[j].1 / &vols[j - 1].1, vols[j].0 - vols[j - 1].0);
        let (vb, kb) = (&vols[j + 1].1 / &vols[j].1, vols[j + 1].0 - vols[j].0);
        if compare_slopes(&va, ka, &vb, kb) != Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}
