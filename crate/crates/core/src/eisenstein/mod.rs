//! The real-analytic Eisenstein series of `SL_2(ℤ)`, its Arthur truncation,
//! truncated periods over the modular fundamental domain and the rank-2
//! non-abelian zeta function of `ℚ`.
//!
//! `E(z, s) = y^s + c(s) y^{1-s} + (4/ξ(2s)) √y Σ_n n^{s-1/2} σ_{1-2s}(n) K_{s-1/2}(2πny) cos(2πnx)`
//! with `c(s) = ξ(2s-1)/ξ(2s)`. Integrals use the measure `dx dy / y²`.

mod adjoint;
pub mod quad;
pub mod special;
mod zeta2;

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use adjoint::{self_adjoint_check, Bump, SelfAdjointness};
pub use special::{bessel_k, completed_zeta, completed_zeta_digits, completed_zeta_theta, gamma, ln_gamma, upper_gamma, zeta};
pub use zeta2::{argument_principle_count, rank2_zeta, rank2_zeta_closed, rank2_zeta_closed_digits, zero_scan, ZeroScan};

/// Fourier modes are kept while `2πny` stays below this many e-folds beyond
/// the working precision.
const DECAY_MARGIN: f64 = 8.0;

const MAX_TERMS: usize = 96;

const DOMAIN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Degenerate(format!("not in the upper half plane: ({x}, {y})")));
        }
        Ok(Self { x, y })
    }

    /// `|x| ≤ 1/2` and `x² + y² ≥ 1`.
    pub fn in_fundamental_domain(&self) -> bool {
        self.x.abs() <= 0.5 + DOMAIN_TOL && self.x * self.x + self.y * self.y >= 1.0 - DOMAIN_TOL
    }

    pub fn translate(&self, n: f64) -> Self {
        Self { x: self.x + n, y: self.y }
    }

    /// `z ↦ -1/z`.
    pub fn invert(&self) -> Self {
        let r = self.x * self.x + self.y * self.y;
        Self { x: -self.x / r, y: self.y / r }
    }

    /// The `SL_2(ℤ)`-equivalent point of the standard fundamental domain.
    pub fn reduce(&self) -> Self {
        let mut z = *self;
        for _ in 0..10_000 {
            z = z.translate(-z.x.round());
            if z.x * z.x + z.y * z.y >= 1.0 {
                break;
            }
            z = z.invert();
        }
        z
    }
}

/// Parameters of an Eisenstein evaluation: spectral parameter, truncation
/// height, Fourier cutoff and working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisensteinConfig {
    pub s: Complex64,
    pub t: f64,
    pub n_terms: usize,
    pub digits: u32,
}

impl EisensteinConfig {
    pub fn new(s: Complex64, t: f64) -> Result<Self> {
        let cfg = Self { s, t, n_terms: 0, digits: 15 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }

    /// `0` selects the cutoff from the precision and the height.
    pub fn with_terms(mut self, n: usize) -> Self {
        self.n_terms = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t >= 1.0) {
            return Err(Error::Degenerate(format!("truncation height must be >= 1, got {}", self.t)));
        }
        if self.digits == 0 {
            return Err(Error::Degenerate("precision must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> f64 {
        tolerance(self.digits)
    }
}

pub(crate) fn tolerance(digits: u32) -> f64 {
    10f64.powi(-(digits.min(12) as i32))
}

fn singular_s(s: Complex64, points: &[f64]) -> Result<()> {
    for &p in points {
        if (s - p).norm() < 1e-12 {
            return Err(Error::Singular(format!("s = {s} is excluded")));
        }
    }
    Ok(())
}

/// `c(s) = ξ(2s-1) / ξ(2s)`.
pub fn c_function(s: Complex64) -> Result<Complex64> {
    singular_s(s, &[0.5, 1.0])?;
    let den = completed_zeta(2.0 * s)?;
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("xi(2s) vanishes at s = {s}")));
    }
    Ok(completed_zeta(2.0 * s - 1.0)? / den)
}

fn divisor_power_sum(n: usize, w: Complex64) -> Complex64 {
    (1..=n).filter(|d| n % d == 0).map(|d| Complex64::new(d as f64, 0.0).powc(w)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisensteinValue {
    pub value: Complex64,
    /// Size of the first omitted Fourier term.
    pub tail_bound: f64,
}

/// `E(·, s)` with its coefficients precomputed.
#[derive(Clone, Debug)]
pub struct EisensteinSeries {
    s: Complex64,
    c: Complex64,
    scale: Complex64,
    coeffs: Vec<Complex64>,
    digits: u32,
}

impl EisensteinSeries {
    pub fn new(s: Complex64) -> Result<Self> {
        Self::with_digits(s, 15)
    }

    pub fn with_digits(s: Complex64, digits: u32) -> Result<Self> {
        let c = c_function(s)?;
        let scale = 4.0 / completed_zeta_digits(2.0 * s, digits)?;
        let coeffs = (1..=MAX_TERMS + 1)
            .map(|n| Complex64::new(n as f64, 0.0).powc(s - 0.5) * divisor_power_sum(n, 1.0 - 2.0 * s))
            .collect();
        Ok(Self { s, c, scale, coeffs, digits })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// `y^s + c(s) y^{1-s}`.
    pub fn constant_term(&self, y: f64) -> Complex64 {
        let y = Complex64::new(y, 0.0);
        y.powc(self.s) + self.c * y.powc(1.0 - self.s)
    }

    /// Fourier cutoff that makes the remaining terms negligible at height `y`.
    pub fn terms_for(&self, y: f64) -> usize {
        let e_folds = self.digits.min(16) as f64 * 10f64.ln() + DECAY_MARGIN + 2.0 * self.s.re.abs();
        ((e_folds / (2.0 * PI * y)).ceil() as usize + 1).clamp(1, MAX_TERMS)
    }

    fn mode(&self, n: usize, z: &UpperHalfPoint) -> Result<Complex64> {
        let k = bessel_k(self.s - 0.5, 2.0 * PI * n as f64 * z.y)?;
        Ok(self.scale * z.y.sqrt() * self.coeffs[n - 1] * k * (2.0 * PI * n as f64 * z.x).cos())
    }

    /// The non-constant part summed over `n ≤ terms`.
    pub fn non_constant(&self, z: &UpperHalfPoint, terms: usize) -> Result<Complex64> {
        if terms > MAX_TERMS {
            return Err(Error::Unsupported(format!("at most {MAX_TERMS} Fourier terms")));
        }
        (1..=terms).try_fold(Complex64::new(0.0, 0.0), |acc, n| Ok(acc + self.mode(n, z)?))
    }

    pub fn evaluate(&self, z: &UpperHalfPoint, terms: usize) -> Result<EisensteinValue> {
        let value = self.constant_term(z.y) + self.non_constant(z, terms)?;
        let k = bessel_k(self.s - 0.5, 2.0 * PI * (terms + 1) as f64 * z.y)?;
        let tail_bound = (self.scale * z.y.sqrt() * self.coeffs[terms] * k).norm();
        Ok(EisensteinValue { value, tail_bound })
    }

    pub fn value(&self, z: &UpperHalfPoint) -> Result<Complex64> {
        Ok(self.evaluate(z, self.terms_for(z.y))?.value)
    }

    /// `Λ^T E(z)`: the constant term is removed above height `T`.
    pub fn truncated(&self, z: &UpperHalfPoint, t: f64) -> Result<Complex64> {
        let nc = self.non_constant(z, self.terms_for(z.y))?;
        Ok(if z.y > t { nc } else { nc + self.constant_term(z.y) })
    }
}

/// `E(z, s)` with `n_terms` Fourier modes.
pub fn eisenstein_e(z: &UpperHalfPoint, s: Complex64, n_terms: usize) -> Result<EisensteinValue> {
    if n_terms == 0 {
        return Err(Error::Degenerate("need at least one Fourier term".into()));
    }
    EisensteinSeries::new(s)?.evaluate(z, n_terms)
}

/// `Λ^T E(z, s)` for `z` in the standard fundamental domain.
pub fn arthur_truncate_e(z: &UpperHalfPoint, s: Complex64, t: f64) -> Result<Complex64> {
    if !z.in_fundamental_domain() {
        return Err(Error::Degenerate(format!("({}, {}) is outside the fundamental domain; reduce it first", z.x, z.y)));
    }
    if !(t >= 1.0) {
        return Err(Error::Degenerate(format!("truncation height must be >= 1, got {t}")));
    }
    EisensteinSeries::new(s)?.truncated(z, t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodValue {
    pub value: Complex64,
    pub est_error: f64,
}

/// Lower edge `log √(1 - x²)` of the fundamental domain in `u = log y`.
fn arc(x: f64) -> f64 {
    0.5 * (1.0 - x * x).max(0.0).ln()
}

/// `∫_{xa}^{xb} ∫_{max(lo(x), u_min)}^{u_max} f(x, e^u) e^{-u} du dx` with
/// the inner range split at `splits`.
pub(crate) fn integrate_region<F>(f: F, xa: f64, xb: f64, u_min: f64, u_max: f64, splits: &[f64], tol: f64) -> Result<PeriodValue>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    let failure: Cell<Option<Error>> = Cell::new(None);
    let inner_err = Cell::new(0.0f64);
    let outer = quad::integrate(
        |x| {
            let lo = arc(x).max(u_min);
            if lo >= u_max {
                return Complex64::new(0.0, 0.0);
            }
            let mut cuts = vec![lo];
            cuts.extend(splits.iter().copied().filter(|&c| c > lo && c < u_max));
            cuts.push(u_max);
            let mut total = Complex64::new(0.0, 0.0);
            for w in cuts.windows(2) {
                let q = quad::integrate(
                    |u| {
                        let y = u.exp();
                        match f(x, y) {
                            Ok(v) => v / y,
                            Err(e) => {
                                failure.set(Some(e));
                                Complex64::new(0.0, 0.0)
                            }
                        }
                    },
                    w[0],
                    w[1],
                    0.05 * tol,
                    0.05 * tol,
                );
                inner_err.set(inner_err.get().max(q.error));
                total += q.value;
            }
            total
        },
        xa,
        xb,
        tol,
        tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(PeriodValue { value: outer.value, est_error: outer.error + inner_err.get() * (xb - xa) * 3.0 })
}

fn cusp_height(t: f64) -> f64 {
    t.max(4.0) + 8.0
}

/// `∫_F Λ^T E(z, s) dμ` by adaptive quadrature over `F ∩ {y ≤ Y}`,
/// `Y = max(T, 4) + 8`; above `Y` every remaining Fourier mode integrates to
/// zero in `x`, so the cusp contributes nothing.
pub fn truncated_period(cfg: &EisensteinConfig) -> Result<PeriodValue> {
    cfg.validate()?;
    singular_s(cfg.s, &[0.0, 0.5, 1.0])?;
    let e = EisensteinSeries::with_digits(cfg.s, cfg.digits)?;
    let t = cfg.t;
    let q = integrate_region(|x, y| e.truncated(&UpperHalfPoint { x, y }, t), 0.0, 0.5, f64::NEG_INFINITY, cusp_height(t).ln(), &[t.ln()], cfg.tolerance())?;
    Ok(PeriodValue { value: 2.0 * q.value, est_error: 2.0 * q.est_error })
}

/// `T^{s-1}/(s-1) - c(s) T^{-s}/s`.
pub fn closed_truncated_period(s: Complex64, t: f64) -> Result<Complex64> {
    singular_s(s, &[0.0, 0.5, 1.0])?;
    if !(t >= 1.0) {
        return Err(Error::Degenerate(format!("truncation height must be >= 1, got {t}")));
    }
    let tt = Complex64::new(t, 0.0);
    Ok(tt.powc(s - 1.0) / (s - 1.0) - c_function(s)? * tt.powc(-s) / s)
}

/// `∫_{F ∩ {y ≤ T}} E(z, s) dμ`.
pub fn compact_region_period(cfg: &EisensteinConfig) -> Result<PeriodValue> {
    cfg.validate()?;
    singular_s(cfg.s, &[0.0, 0.5, 1.0])?;
    let e = EisensteinSeries::with_digits(cfg.s, cfg.digits)?;
    let q = integrate_region(|x, y| e.value(&UpperHalfPoint { x, y }), 0.0, 0.5, f64::NEG_INFINITY, cfg.t.ln(), &[], cfg.tolerance())?;
    Ok(PeriodValue { value: 2.0 * q.value, est_error: 2.0 * q.est_error })
}

/// `∫_{-1/2}^{1/2} E(x + iy, s) dx`, which should equal the constant term.
pub fn numeric_constant_term(s: Complex64, y: f64, digits: u32) -> Result<Complex64> {
    let e = EisensteinSeries::with_digits(s, digits)?;
    let failure: Cell<Option<Error>> = Cell::new(None);
    let q = quad::integrate(
        |x| match e.value(&UpperHalfPoint { x, y }) {
            Ok(v) => v,
            Err(err) => {
                failure.set(Some(err));
                Complex64::new(0.0, 0.0)
            }
        },
        -0.5,
        0.5,
        1e-13,
        1e-13,
    );
    match failure.take() {
        Some(err) => Err(err),
        None => Ok(q.value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        let z = UpperHalfPoint::new(3.3, 0.1).unwrap().reduce();
        assert!(z.in_fundamental_domain());
        assert!(UpperHalfPoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn closed_period_bookkeeping() {
        let s = Complex64::new(2.0, 0.0);
        let c2 = completed_zeta(Complex64::new(3.0, 0.0)).unwrap() / completed_zeta(Complex64::new(4.0, 0.0)).unwrap();
        let v = closed_truncated_period(s, 1.0).unwrap();
        assert!((v - (1.0 - c2 / 2.0)).norm() < 1e-14);
        let t = 1.7;
        let s = Complex64::new(0.8, 0.4);
        let lhs = (s - 1.0) * closed_truncated_period(s, t).unwrap() - Complex64::new(t, 0.0).powc(s - 1.0);
        let rhs = -(s - 1.0) * c_function(s).unwrap() * Complex64::new(t, 0.0).powc(-s) / s;
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(closed_truncated_period(Complex64::new(1.0, 0.0), 1.0).is_err());
    }
}
