//! Characteristic functions of chambers and cones in the apartment, and the
//! alternating sums built from them.
//!
//! Everything here only compares signs of integer-weighted block sums, so it
//! works over any ordered ring. A block mean comparison `m_j > m_{j+1}` is
//! evaluated as `s_j d_{j+1} > s_{j+1} d_j`.

use crate::error::{Error, Result};
use crate::root_data::{ensure_nested, submasks, ApartmentVector, LinearForm, ParabolicIndex};
use crate::scalar::{int, OrderedField, OrderedRing};

fn sign(exp: usize) -> i64 {
    if exp % 2 == 0 {
        1
    } else {
        -1
    }
}

fn prefix<S: OrderedRing>(h: &ApartmentVector<S>, rank: usize) -> Result<Vec<S>> {
    h.check_rank(rank)?;
    Ok(h.partial_sums())
}

/// `α_c(H) > 0` for the simple root at cut `c` of `q`, restricted to `𝔞_Q`.
fn root_positive<S: OrderedRing>(q: &ParabolicIndex, c: usize, ps: &[S]) -> bool {
    let (a, b) = q.enclosing(c);
    let left = ps[c].clone() - ps[a].clone();
    let right = ps[b].clone() - ps[c].clone();
    left * int::<S>(b - c) > right * int::<S>(c - a)
}

/// `ϖ_c(H) > 0` for the fundamental weight at `c` of the Levi of `p`
/// (`c` not a cut of `p`), up to a positive factor.
fn weight_value<S: OrderedRing>(p: &ParabolicIndex, c: usize, ps: &[S]) -> S {
    let (a, b) = p.enclosing(c);
    (ps[c].clone() - ps[a].clone()) * int::<S>(b - a) - (ps[b].clone() - ps[a].clone()) * int::<S>(c - a)
}

fn free_cuts(q: &ParabolicIndex, p: &ParabolicIndex) -> impl Iterator<Item = usize> {
    let free = q.mask() & !p.mask();
    (1..q.rank()).filter(move |&c| free >> c & 1 == 1)
}

pub(crate) fn tau_ps<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, ps: &[S]) -> bool {
    free_cuts(q, p).all(|c| root_positive(q, c, ps))
}

pub(crate) fn tau_hat_ps<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, ps: &[S]) -> bool {
    free_cuts(q, p).all(|c| weight_value(p, c, ps).is_positive())
}

/// Characteristic function of the positive chamber `{α(H) > 0, α ∈ Δ_Q^P}`.
pub fn tau<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, h: &ApartmentVector<S>) -> Result<bool> {
    ensure_nested(q, p)?;
    Ok(tau_ps(q, p, &prefix(h, q.rank())?))
}

/// Characteristic function of the positive cone `{ϖ(H) > 0, ϖ ∈ Δ̂_Q^P}`.
pub fn tau_hat<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, h: &ApartmentVector<S>) -> Result<bool> {
    ensure_nested(q, p)?;
    Ok(tau_hat_ps(q, p, &prefix(h, q.rank())?))
}

fn intermediates(q: &ParabolicIndex, p: &ParabolicIndex) -> impl Iterator<Item = ParabolicIndex> {
    let rank = q.rank();
    let base = p.mask();
    submasks(q.mask() & !base).map(move |m| ParabolicIndex::from_mask(rank, base | m))
}

/// Arthur's `σ_1^2(H) = Σ_{P_3 ⊃ P_2} (-1)^{|P_3|-|P_2|} τ_1^3(H) τ̂_3(H)`.
pub fn sigma<S: OrderedRing>(p1: &ParabolicIndex, p2: &ParabolicIndex, h: &ApartmentVector<S>) -> Result<i64> {
    ensure_nested(p1, p2)?;
    let ps = prefix(h, p1.rank())?;
    let g = ParabolicIndex::from_mask(p1.rank(), 0);
    let mut total = 0;
    for p3 in intermediates(p2, &g) {
        if tau_ps(p1, &p3, &ps) && tau_hat_ps(&p3, &g, &ps) {
            total += sign(p2.len() - p3.len());
        }
    }
    Ok(total)
}

/// The explicit description of the support of `σ_1^2`.
pub fn sigma_characterization<S: OrderedRing>(
    p1: &ParabolicIndex,
    p2: &ParabolicIndex,
    h: &ApartmentVector<S>,
) -> Result<bool> {
    ensure_nested(p1, p2)?;
    let ps = prefix(h, p1.rank())?;
    let rank = p1.rank();
    let ok = p1.cuts().into_iter().all(|c| {
        let pos = root_positive(p1, c, &ps);
        if p2.is_cut(c) {
            !pos && ps[c].is_positive()
        } else {
            pos
        }
    });
    debug_assert!(ps[rank].is_zero());
    Ok(ok)
}

fn coroot_positive<S: OrderedField>(q: &ParabolicIndex, c: usize, lambda: &LinearForm<S>) -> bool {
    let coeffs = lambda.coeffs();
    let mut ps = Vec::with_capacity(coeffs.len() + 1);
    let mut acc = S::zero();
    ps.push(acc.clone());
    for x in coeffs {
        acc = acc + x.clone();
        ps.push(acc.clone());
    }
    root_positive(q, c, &ps)
}

/// `Λ(α^∨)` for `α ∈ Δ_Q^P`, reported by sign: `true` for `> 0`.
pub fn coroot_signs<S: OrderedField>(
    q: &ParabolicIndex,
    p: &ParabolicIndex,
    lambda: &LinearForm<S>,
) -> Result<Vec<(usize, bool)>> {
    ensure_nested(q, p)?;
    if lambda.rank() != q.rank() {
        return Err(Error::RankMismatch { expected: q.rank(), got: lambda.rank() });
    }
    Ok(free_cuts(q, p).map(|c| (c, coroot_positive(q, c, lambda))).collect())
}

/// True when some `Λ(α^∨)` with `α ∈ Δ_Q^P` vanishes exactly.
pub fn lemma2_boundary<S: OrderedField>(q: &ParabolicIndex, p: &ParabolicIndex, lambda: &LinearForm<S>) -> Result<bool> {
    let neg = lambda.neg();
    let a = coroot_signs(q, p, lambda)?;
    let b = coroot_signs(q, p, &neg)?;
    Ok(a.iter().zip(&b).any(|(x, y)| !x.1 && !y.1))
}

pub fn epsilon<S: OrderedField>(q: &ParabolicIndex, p: &ParabolicIndex, lambda: &LinearForm<S>) -> Result<i64> {
    let nonpos = coroot_signs(q, p, lambda)?.iter().filter(|(_, pos)| !pos).count();
    Ok(sign(nonpos))
}

pub fn phi<S: OrderedField>(
    q: &ParabolicIndex,
    p: &ParabolicIndex,
    lambda: &LinearForm<S>,
    h: &ApartmentVector<S>,
) -> Result<bool> {
    let signs = coroot_signs(q, p, lambda)?;
    let ps = prefix(h, q.rank())?;
    Ok(phi_ps(p, &signs, &ps))
}

fn phi_ps<S: OrderedRing>(p: &ParabolicIndex, signs: &[(usize, bool)], ps: &[S]) -> bool {
    signs.iter().all(|&(c, pos)| {
        if p.is_cut(c) {
            return true;
        }
        let w = weight_value(p, c, ps).is_positive();
        w != pos
    })
}

/// `Σ_{Q ⊂ R ⊂ P} ε_Q^R(Λ) φ_Q^R(Λ, H) τ_R^P(H)`.
pub fn lemma2_sum<S: OrderedField>(
    q: &ParabolicIndex,
    p: &ParabolicIndex,
    lambda: &LinearForm<S>,
    h: &ApartmentVector<S>,
) -> Result<i64> {
    let all = coroot_signs(q, p, lambda)?;
    let ps = prefix(h, q.rank())?;
    let mut total = 0;
    for r in intermediates(q, p) {
        let signs: Vec<(usize, bool)> = all.iter().copied().filter(|&(c, _)| !r.is_cut(c)).collect();
        if phi_ps(&r, &signs, &ps) && tau_ps(&r, p, &ps) {
            total += sign(signs.iter().filter(|s| !s.1).count());
        }
    }
    Ok(total)
}

/// The value `lemma2_sum` must take: 0 if some `Λ(α^∨) ≤ 0`, else 1.
pub fn lemma2_expected<S: OrderedField>(q: &ParabolicIndex, p: &ParabolicIndex, lambda: &LinearForm<S>) -> Result<i64> {
    Ok(coroot_signs(q, p, lambda)?.iter().all(|s| s.1) as i64)
}

/// Both sums of the Langlands combinatorial lemma; each equals `δ_QP`.
pub fn langlands_lemma<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, h: &ApartmentVector<S>) -> Result<(i64, i64)> {
    ensure_nested(q, p)?;
    let ps = prefix(h, q.rank())?;
    let (mut s1, mut s2) = (0, 0);
    for r in intermediates(q, p) {
        if tau_ps(q, &r, &ps) && tau_hat_ps(&r, p, &ps) {
            s1 += sign(r.len() - p.len());
        }
        if tau_hat_ps(q, &r, &ps) && tau_ps(&r, p, &ps) {
            s2 += sign(q.len() - r.len());
        }
    }
    Ok((s1, s2))
}

/// `Σ_{F ⊆ S} (-1)^{|F|}` for a set of the given size, by direct enumeration.
pub fn alternating_subset_sum(size: u32) -> i64 {
    assert!(size < 64);
    submasks(if size == 0 { 0 } else { u64::MAX >> (64 - size) })
        .map(|m| sign(m.count_ones() as usize))
        .sum()
}

#[derive(Clone, Copy)]
enum Kind {
    Gamma,
    Nabla,
    GammaHat,
    NablaHat,
}

fn gamma_family<S: OrderedRing>(
    kind: Kind,
    q: &ParabolicIndex,
    p: &ParabolicIndex,
    h: &ApartmentVector<S>,
    x: &ApartmentVector<S>,
) -> Result<i64> {
    ensure_nested(q, p)?;
    let ps = prefix(h, q.rank())?;
    let psx = prefix(&h.sub(x)?, q.rank())?;
    let mut total = 0;
    for r in intermediates(q, p) {
        let (hit, e) = match kind {
            Kind::Gamma => (tau_ps(q, &r, &ps) && tau_hat_ps(&r, p, &psx), r.len() - p.len()),
            Kind::Nabla => (tau_ps(q, &r, &psx) && tau_hat_ps(&r, p, &ps), q.len() - r.len()),
            Kind::GammaHat => (tau_hat_ps(q, &r, &ps) && tau_ps(&r, p, &psx), r.len() - p.len()),
            Kind::NablaHat => (tau_hat_ps(q, &r, &psx) && tau_ps(&r, p, &ps), q.len() - r.len()),
        };
        if hit {
            total += sign(e);
        }
    }
    Ok(total)
}

/// `Γ_Q^P(H, X) = Σ_R (-1)^{|R|-|P|} τ_Q^R(H) τ̂_R^P(H - X)`.
pub fn gamma<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, h: &ApartmentVector<S>, x: &ApartmentVector<S>) -> Result<i64> {
    gamma_family(Kind::Gamma, q, p, h, x)
}

/// `∇_Q^P(H, X) = Σ_R (-1)^{|Q|-|R|} τ_Q^R(H - X) τ̂_R^P(H)`.
pub fn nabla<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, h: &ApartmentVector<S>, x: &ApartmentVector<S>) -> Result<i64> {
    gamma_family(Kind::Nabla, q, p, h, x)
}

/// `Γ̂_Q^P(H, X) = Σ_R (-1)^{|P|-|R|} τ̂_Q^R(H) τ_R^P(H - X)`.
pub fn gamma_hat<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, h: &ApartmentVector<S>, x: &ApartmentVector<S>) -> Result<i64> {
    gamma_family(Kind::GammaHat, q, p, h, x)
}

/// `∇̂_Q^P(H, X) = Σ_R (-1)^{|Q|-|R|} τ̂_Q^R(H - X) τ_R^P(H)`.
pub fn nabla_hat<S: OrderedRing>(q: &ParabolicIndex, p: &ParabolicIndex, h: &ApartmentVector<S>, x: &ApartmentVector<S>) -> Result<i64> {
    gamma_family(Kind::NablaHat, q, p, h, x)
}

/// A constant `C` with `Γ_P^G(H, X) ≠ 0 ⇒ |H_P|_∞ ≤ C`.
///
/// `Γ_P^G(H, X)` factors over the cuts `c` of `P` as
/// `[α_c(H) > 0] - [ϖ_c(H - X) > 0]`, which pins the partial sums of `H` at
/// the cuts between `min(0, min ϖ_c(X))` and `max(0, max ϖ_c(X))`.
pub fn gamma_support_bound<S: OrderedRing>(p: &ParabolicIndex, x: &ApartmentVector<S>) -> Result<S> {
    if p.is_whole() {
        return Err(Error::InvalidComposition("P = G has no cuts".into()));
    }
    let ps = prefix(x, p.rank())?;
    let mut hi = S::zero();
    let mut lo = S::zero();
    for c in p.cuts() {
        if ps[c] > hi {
            hi = ps[c].clone();
        }
        if ps[c] < lo {
            lo = ps[c].clone();
        }
    }
    Ok(hi - lo)
}

/// Whether every block mean of `H` for the blocks of `p` lies in `[-C, C]`.
pub fn block_means_within<S: OrderedRing>(p: &ParabolicIndex, h: &ApartmentVector<S>, c: &S) -> Result<bool> {
    let ps = prefix(h, p.rank())?;
    Ok(p.boundaries().windows(2).all(|w| {
        let s = ps[w[1]].clone() - ps[w[0]].clone();
        let bound = c.clone() * int::<S>(w[1] - w[0]);
        s <= bound && -s <= bound
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::{half_sum_positive_roots, standard_parabolics};
    use crate::Q64;

    fn iv(xs: &[i64]) -> ApartmentVector<i64> {
        ApartmentVector::new(xs.to_vec()).unwrap()
    }

    fn par(blocks: &[usize]) -> ParabolicIndex {
        ParabolicIndex::new(blocks).unwrap()
    }

    #[test]
    fn rank_two_chamber() {
        let b = par(&[1, 1]);
        let g = par(&[2]);
        let h = iv(&[1, -1]);
        assert!(tau(&b, &g, &h).unwrap());
        assert!(tau_hat(&b, &g, &h).unwrap());
        assert!(tau(&g, &g, &iv(&[5, -5])).unwrap());
        assert!(tau(&g, &b, &h).is_err());
        assert_eq!(langlands_lemma(&b, &g, &h).unwrap(), (0, 0));
        assert_eq!(langlands_lemma(&b, &b, &h).unwrap(), (1, 1));
    }

    #[test]
    fn tau_on_levi_uses_block_means() {
        // Q = (2,1): α at cut 2 compares (H1+H2)/2 with H3.
        let q = par(&[2, 1]);
        let g = par(&[3]);
        assert!(tau(&q, &g, &iv(&[5, -3, -2])).unwrap());
        assert!(!tau(&q, &g, &iv(&[-5, 3, 2])).unwrap());
        // 2*H3 vs H1+H2 with H=(3,-4,1): mean -1/2 < 1.
        assert!(!tau(&q, &g, &iv(&[3, -4, 1])).unwrap());
    }

    #[test]
    fn sigma_small_cases() {
        let h = iv(&[2, 1, -3]);
        let b = par(&[1, 1, 1]);
        let p2 = par(&[2, 1]);
        assert_eq!(sigma(&b, &p2, &h).unwrap() == 1, sigma_characterization(&b, &p2, &h).unwrap());
        for hh in [iv(&[2, 1, -3]), iv(&[-4, 1, 3]), iv(&[1, 1, -2])] {
            assert_eq!(sigma(&p2, &p2, &hh).unwrap(), 0);
            assert!(!sigma_characterization(&p2, &p2, &hh).unwrap());
            let g = par(&[3]);
            assert_eq!(sigma(&g, &g, &hh).unwrap(), 1);
        }
        let b2 = par(&[1, 1]);
        let g2 = par(&[2]);
        for t in -3..=3 {
            let h = iv(&[t, -t]);
            assert_eq!(sigma(&b2, &g2, &h).unwrap(), tau(&b2, &g2, &h).unwrap() as i64);
        }
    }

    #[test]
    fn rho_gives_tau_hat() {
        let rho = half_sum_positive_roots::<Q64>(4).unwrap().neg();
        let h = ApartmentVector::new(vec![Q64::new(3, 2), Q64::new(-1, 1), Q64::new(1, 3), Q64::new(-5, 6)]).unwrap();
        for q in standard_parabolics(4).unwrap() {
            for r in standard_parabolics(4).unwrap() {
                if q.is_contained_in(&r) {
                    assert_eq!(phi(&q, &r, &rho, &h).unwrap(), tau_hat(&q, &r, &h).unwrap());
                }
            }
        }
    }

    #[test]
    fn subset_sum() {
        assert_eq!(alternating_subset_sum(0), 1);
        for n in 1..10 {
            assert_eq!(alternating_subset_sum(n), 0);
        }
    }

    #[test]
    fn gamma_slab_rank_two() {
        let b = par(&[1, 1]);
        let g = par(&[2]);
        // X = (2,-2), α(X) = 4, H = (t,-t).
        let x = iv(&[2, -2]);
        for t in -12..=12 {
            let h = iv(&[t, -t]);
            let val = gamma(&b, &g, &h, &x).unwrap();
            let inside = 0 < 2 * t && 2 * t <= 4;
            assert_eq!(val, inside as i64, "t = {t}");
        }
        assert_eq!(gamma(&g, &g, &iv(&[1, -1]), &x).unwrap(), 1);
    }

    #[test]
    fn support_bound_values() {
        let b = par(&[1, 1]);
        assert_eq!(gamma_support_bound(&b, &iv(&[3, -3])).unwrap(), 3);
        assert_eq!(gamma_support_bound(&b, &iv(&[0, 0])).unwrap(), 0);
        assert!(gamma_support_bound(&par(&[2]), &iv(&[1, -1])).is_err());
        let p = par(&[1, 2, 1]);
        assert_eq!(gamma_support_bound(&p, &iv(&[2, -5, 1, 2])).unwrap(), 4);
    }
}
