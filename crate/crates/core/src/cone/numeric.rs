//! Direct quadrature of convergent cone integrals, used as an oracle.
//!
//! After `x = T + Σ a_j e_j` each term is `e^{⟨λ_i,T⟩} e^{c·a} P(a)` over the
//! orthant; rescaling `a_j = t_j / ρ_j` with `ρ_j = -Re c_j` leaves the
//! Laguerre weight `e^{-Σ t}` times a bounded smooth factor, which is
//! integrated by tensor Gauss–Laguerre rules of increasing order.

use gauss_quad::laguerre::GaussLaguerre;
use num_complex::Complex64;
use num_traits::Zero;

use super::field::{dot, lift, ConeField};
use super::{ConeRecord, ExponentialPolynomial};
use crate::error::{Error, Result};
use crate::linalg::transpose;

fn max_order(n: usize) -> usize {
    match n {
        1 => 512,
        2 => 192,
        3 => 64,
        _ => 24,
    }
}

fn rule(order: usize) -> Vec<(f64, f64)> {
    let q = GaussLaguerre::new(order.try_into().expect("positive order"), 0.0.try_into().expect("alpha"));
    q.as_node_weight_pairs().to_vec()
}

/// `∫ f(x) τ^C(x - T) dx` for `f` absolutely integrable over the cone,
/// to relative accuracy `tol`.
pub fn numeric_cone_integral<F: ConeField>(f: &ExponentialPolynomial<F>, cone: &ConeRecord, tol: f64) -> Result<Complex64> {
    let n = f.dim();
    if n != cone.dim() {
        return Err(Error::RankMismatch { expected: n, got: cone.dim() });
    }
    let gens: Vec<Vec<F>> = cone.generators().iter().map(|e| lift(e)).collect();
    let t: Vec<F> = lift(cone.offset());
    let a: Vec<Vec<Complex64>> = transpose(cone.generators())
        .iter()
        .map(|r| r.iter().map(|x| F::from_rational(x).to_complex()).collect())
        .collect();
    let tc: Vec<Complex64> = t.iter().map(ConeField::to_complex).collect();
    let mut terms = Vec::new();
    for (i, (lambda, p)) in f.terms().iter().enumerate() {
        let c: Vec<Complex64> = gens.iter().map(|e| dot(lambda, e).to_complex()).collect();
        if let Some(j) = c.iter().position(|cj| cj.re >= 0.0) {
            return Err(Error::NotConvergent(format!("term {i} is not decaying along generator {j}")));
        }
        let shift = dot(lambda, &t).to_complex().exp();
        terms.push((c, shift, p));
    }
    let vol = F::from_rational(&cone.volume()).to_complex();
    let eval = |order: usize| -> Complex64 {
        let nodes = rule(order);
        let mut total = Complex64::zero();
        for (c, shift, p) in &terms {
            let rho: Vec<f64> = c.iter().map(|cj| -cj.re).collect();
            let jac: f64 = rho.iter().map(|r| 1.0 / r).product();
            let mut idx = vec![0usize; n];
            let mut acc = Complex64::zero();
            loop {
                let mut w = 1.0;
                let mut phase = 0.0;
                let mut coords = vec![0.0; n];
                for j in 0..n {
                    let (tj, wj) = nodes[idx[j]];
                    w *= wj;
                    coords[j] = tj / rho[j];
                    phase += c[j].im * coords[j];
                }
                let x: Vec<Complex64> = (0..n)
                    .map(|l| tc[l] + (0..n).map(|j| a[l][j] * coords[j]).sum::<Complex64>())
                    .collect();
                acc += Complex64::from_polar(w, phase) * p.eval_complex(&x);
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < order {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
            total += shift * acc * jac;
        }
        total * vol
    };
    let mut order = 8;
    let mut prev = eval(order);
    while order * 2 <= max_order(n) {
        order *= 2;
        let cur = eval(order);
        if (cur - prev).norm() <= tol * cur.norm().max(f64::MIN_POSITIVE) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NotConvergent(format!("quadrature did not reach relative tolerance {tol}")))
}
