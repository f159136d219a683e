//! Independent reference implementations for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nazeta::lattice::{LatticeRecord, Sublattice};
use nazeta::root_data::standard_parabolics;
use nazeta::{ApartmentVector, ParabolicIndex, Rational};
use num_traits::{Signed, ToPrimitive, Zero};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn nested_pairs(rank: usize) -> Vec<(ParabolicIndex, ParabolicIndex)> {
    let all = standard_parabolics(rank).unwrap();
    let mut out = Vec::new();
    for q in &all {
        for p in &all {
            if q.is_contained_in(p) {
                out.push((*q, *p));
            }
        }
    }
    out
}

/// Every `R` with `Q ⊂ R ⊂ P`, built from cut lists.
pub fn intermediate(q: &ParabolicIndex, p: &ParabolicIndex) -> Vec<ParabolicIndex> {
    let free: Vec<usize> = q.cuts().into_iter().filter(|c| !p.is_cut(*c)).collect();
    (0..1usize << free.len())
        .map(|m| {
            let mut cuts = p.cuts();
            cuts.extend(free.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, c)| *c));
            ParabolicIndex::from_cuts(q.rank(), &cuts).unwrap()
        })
        .collect()
}

fn segment_sum(h: &[Rational], a: usize, b: usize) -> Rational {
    h[a..b].iter().fold(Rational::zero(), |s, x| s + x)
}

fn around(par: &ParabolicIndex, c: usize) -> (usize, usize) {
    let bounds = par.boundaries();
    let a = *bounds.iter().filter(|&&x| x < c).max().unwrap();
    let b = *bounds.iter().filter(|&&x| x > c).min().unwrap();
    (a, b)
}

/// `α_c` on the projection of `H` to `𝔞_Q`: difference of adjacent block means.
pub fn alpha(q: &ParabolicIndex, c: usize, h: &[Rational]) -> Rational {
    let (a, b) = around(q, c);
    segment_sum(h, a, c) / r((c - a) as i64, 1) - segment_sum(h, c, b) / r((b - c) as i64, 1)
}

/// `ϖ_c` of the Levi block of `P` containing `c`.
pub fn weight(p: &ParabolicIndex, c: usize, h: &[Rational]) -> Rational {
    let (a, b) = around(p, c);
    segment_sum(h, a, c) - segment_sum(h, a, b) * r((c - a) as i64, (b - a) as i64)
}

fn free(q: &ParabolicIndex, p: &ParabolicIndex) -> Vec<usize> {
    q.cuts().into_iter().filter(|c| !p.is_cut(*c)).collect()
}

pub fn tau(q: &ParabolicIndex, p: &ParabolicIndex, h: &[Rational]) -> bool {
    free(q, p).iter().all(|&c| alpha(q, c, h).is_positive())
}

pub fn tau_hat(q: &ParabolicIndex, p: &ParabolicIndex, h: &[Rational]) -> bool {
    free(q, p).iter().all(|&c| weight(p, c, h).is_positive())
}

fn sign(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn gamma(q: &ParabolicIndex, p: &ParabolicIndex, h: &[Rational], x: &[Rational]) -> i64 {
    let hx: Vec<Rational> = h.iter().zip(x).map(|(a, b)| a - b).collect();
    intermediate(q, p)
        .iter()
        .filter(|rr| tau(q, rr, h) && tau_hat(rr, p, &hx))
        .map(|rr| sign(rr.len() - p.len()))
        .sum()
}

pub fn vec_of(h: &ApartmentVector<Rational>) -> Vec<Rational> {
    h.coords().to_vec()
}

/// Primitive vectors `v` (first nonzero coordinate positive) with
/// `|v|² ≤ bound`, from a coordinate box: `|v_i|² ≤ bound · (G^{-1})_{ii}`.
/// Number of integer points in the coordinate box searched by [`box_vectors`].
pub fn box_size(l: &LatticeRecord, bound: &Rational) -> f64 {
    let inv = nazeta::linalg::inverse(l.gram()).unwrap();
    (0..l.rank()).map(|i| 2.0 * ((bound * &inv[i][i]).to_f64().unwrap().sqrt().floor() + 1.0) + 1.0).product()
}

pub fn box_vectors(l: &LatticeRecord, bound: &Rational) -> Vec<Vec<i64>> {
    let n = l.rank();
    let inv = nazeta::linalg::inverse(l.gram()).unwrap();
    let radius: Vec<i64> = (0..n).map(|i| (bound * &inv[i][i]).to_f64().unwrap().sqrt().floor() as i64 + 1).collect();
    let mut out = Vec::new();
    let mut v = vec![0i64; n];
    fn rec(i: usize, v: &mut Vec<i64>, radius: &[i64], l: &LatticeRecord, bound: &Rational, out: &mut Vec<Vec<i64>>) {
        if i == v.len() {
            let first = v.iter().find(|x| **x != 0);
            if first.map_or(false, |f| *f > 0) && gcd(v) == 1 && l.norm(v) <= *bound {
                out.push(v.clone());
            }
            return;
        }
        for x in -radius[i]..=radius[i] {
            v[i] = x;
            rec(i + 1, v, radius, l, bound, out);
        }
    }
    rec(0, &mut v, &radius, l, bound, &mut out);
    out
}

fn gcd(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &b| num_integer::gcd(a, b))
}

/// Saturated sublattices of rank 1 or 2 with `Vol² < bound`, by brute force.
/// A rank-2 lattice of covolume `V` has a reduced basis with
/// `|v1|²|v2|² ≤ (4/3)V²` and `|v1|² ≥ λ_1²`.
pub fn small_sublattices(l: &LatticeRecord, k: usize, bound: &Rational) -> Vec<Sublattice> {
    let mut found = BTreeSet::new();
    match k {
        1 => {
            for v in box_vectors(l, bound) {
                if l.norm(&v) < *bound {
                    found.insert(Sublattice::from_rows(&[v]));
                }
            }
        }
        2 => {
            let lambda1 = box_vectors(l, &l.gram()[0][0]).iter().map(|v| l.norm(v)).min().unwrap();
            let reach = bound * r(4, 3) / &lambda1;
            let vs = box_vectors(l, &reach);
            let norms: Vec<Rational> = vs.iter().map(|v| l.norm(v)).collect();
            let cap = bound * r(4, 3);
            for (i, a) in vs.iter().enumerate() {
                for (j, b) in vs.iter().enumerate().skip(i + 1) {
                    if &norms[i] * &norms[j] > cap {
                        continue;
                    }
                    let rows = vec![a.clone(), b.clone()];
                    let sub = match l.saturate(&rows) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    if l.sublattice_volume_squared(&sub) < *bound {
                        found.insert(sub);
                    }
                }
            }
        }
        _ => panic!("oracle covers ranks 1 and 2"),
    }
    found.into_iter().collect()
}

/// `Vol(A)^{2 kb} < Vol(B)^{2 ka}`, i.e. `μ(A) > μ(B)`.
pub fn slope_greater(va: &Rational, ka: usize, vb: &Rational, kb: usize) -> bool {
    num_traits::pow(va.clone(), kb) < num_traits::pow(vb.clone(), ka)
}

/// Harder–Narasimhan filtration of a lattice of rank at most 3 by exhaustive
/// search: at each step take the sublattice `M ⊋ Λ_{j-1}` maximizing the
/// slope of `M / Λ_{j-1}`, largest rank among maximizers.
pub fn hn_oracle(l: &LatticeRecord) -> Vec<Sublattice> {
    let n = l.rank();
    assert!(n <= 3);
    let mut chain: Vec<Sublattice> = Vec::new();
    let one = r(1, 1);
    loop {
        let (base_rank, base_vol) = match chain.last() {
            Some(s) => (s.rank(), l.sublattice_volume_squared(s)),
            None => (0, one.clone()),
        };
        if base_rank == n {
            return chain;
        }
        let total = l.volume_squared() / &base_vol;
        let mut best = (l.whole(), total.clone(), n - base_rank);
        for k in base_rank + 1..n {
            let rel_k = k - base_rank;
            let cap = (total.to_f64().unwrap().powf(rel_k as f64 / (n - base_rank) as f64) * (1.0 + 1e-6) + 1e-9) * base_vol.to_f64().unwrap();
            let bound = Rational::from_float(cap).unwrap();
            for m in small_sublattices(l, k, &bound) {
                if let Some(s) = chain.last() {
                    if !s.is_contained_in(&m) {
                        continue;
                    }
                }
                let v = l.sublattice_volume_squared(&m) / &base_vol;
                let better = slope_greater(&v, rel_k, &best.1, best.2)
                    || (!slope_greater(&best.1, best.2, &v, rel_k) && rel_k > best.2);
                if better {
                    best = (m, v, rel_k);
                }
            }
        }
        chain.push(best.0);
    }
}
