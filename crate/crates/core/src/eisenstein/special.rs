//! Special functions in double precision: `ln Γ`, `ζ`, the completed zeta
//! `ξ(s) = π^{-s/2} Γ(s/2) ζ(s)`, the upper incomplete gamma function and
//! `K_ν(x)` for complex order.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2k}` for `k = 1..=10`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `ln Γ(z)` up to a multiple of `2πi`; exact branch is irrelevant for
/// `exp(ln Γ)`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return c(PI.ln()) - s.ln() - ln_gamma(c(1.0) - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut series = Complex64::new(0.0, 0.0);
    let w2 = w * w;
    let mut wp = w;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        series += b / (n * (n - 1.0)) / wp;
        wp *= w2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// Euler–Maclaurin summation; `terms` Bernoulli corrections (at most 10).
fn zeta_em(s: Complex64, terms: usize) -> Complex64 {
    let n = 12.0 + s.im.abs().ceil();
    let big = c(n);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n as u64 {
        sum += c(k as f64).powc(-s);
    }
    sum += big.powc(c(1.0) - s) / (s - 1.0) + 0.5 * big.powc(-s);
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = big.powc(-s - 1.0);
    for (k, b) in BERNOULLI.iter().take(terms).enumerate() {
        sum += b / fact * rising * npow;
        let m = 2.0 * k as f64 + 2.0;
        rising *= (s + (m - 1.0)) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow /= big * big;
    }
    sum
}

fn em_terms(digits: u32) -> usize {
    ((digits as usize) * 2 / 3 + 1).clamp(3, 10)
}

/// Riemann zeta for `s ≠ 1`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-15 {
        return Err(Error::Singular("zeta has a pole at s = 1".into()));
    }
    Ok(zeta_em(s, 10))
}

/// `ξ(s) = π^{-s/2} Γ(s/2) ζ(s)`, evaluated in `Re s ≥ 1/2` and reflected.
pub fn completed_zeta(s: Complex64) -> Result<Complex64> {
    completed_zeta_digits(s, 15)
}

/// As [`completed_zeta`] with the Euler–Maclaurin length set by `digits`.
pub fn completed_zeta_digits(s: Complex64, digits: u32) -> Result<Complex64> {
    if s.norm() < 1e-15 || (s - 1.0).norm() < 1e-15 {
        return Err(Error::Singular(format!("xi has a pole at s = {s}")));
    }
    let w = if s.re < 0.5 { c(1.0) - s } else { s };
    let half = w * 0.5;
    Ok((-half * PI.ln() + ln_gamma(half)).exp() * zeta_em(w, em_terms(digits)))
}

/// `Γ(a, x)` for `x > 0` by the Legendre continued fraction (modified Lentz).
pub fn upper_gamma(a: Complex64, x: f64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = c(x + 1.0) - a;
    let mut cc = c(1.0 / tiny);
    let mut d = c(1.0) / b;
    let mut h = d;
    for i in 1..20000 {
        let an = -(c(i as f64)) * (c(i as f64) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = c(tiny);
        }
        cc = b + an / cc;
        if cc.norm() < tiny {
            cc = c(tiny);
        }
        d = c(1.0) / d;
        let del = d * cc;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln()).exp() * h
}

/// `ξ(s)` from the theta-function representation
/// `-1/s - 1/(1-s) + Σ_n [(πn²)^{-s/2} Γ(s/2, πn²) + (πn²)^{-(1-s)/2} Γ((1-s)/2, πn²)]`.
pub fn completed_zeta_theta(s: Complex64) -> Result<Complex64> {
    if s.norm() < 1e-15 || (s - 1.0).norm() < 1e-15 {
        return Err(Error::Singular(format!("xi has a pole at s = {s}")));
    }
    let one = c(1.0);
    let mut out = -one / s - one / (one - s);
    for n in 1..=8 {
        let x = PI * (n * n) as f64;
        let t1 = c(x).powc(-s * 0.5) * upper_gamma(s * 0.5, x);
        let t2 = c(x).powc(-(one - s) * 0.5) * upper_gamma((one - s) * 0.5, x);
        out += t1 + t2;
    }
    Ok(out)
}

/// `K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt` by the trapezoid rule, which
/// converges geometrically for this entire, doubly exponentially decaying
/// integrand.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64> {
    if x <= 0.0 {
        return Err(Error::Degenerate(format!("bessel_k needs x > 0, got {x}")));
    }
    let h = 0.1f64.min(0.4 / x.sqrt()) / (1.0 + nu.im.abs() / 8.0);
    let mut sum = 0.5 * (-x).exp() * Complex64::new(1.0, 0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let decay = x * (t.cosh() - 1.0);
        let term = (-x * t.cosh()).exp() * (nu * t).cosh();
        sum += term;
        if decay > 60.0 + nu.re.abs() * t || k > 100_000 {
            break;
        }
        k += 1;
    }
    Ok(sum * h)
}
