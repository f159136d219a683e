use num_complex::Complex64;

use super::{integrate_region, quad, EisensteinConfig, EisensteinSeries, UpperHalfPoint};
use crate::error::{Error, Result};

/// Radius of the support in units of `sigma`.
const CUTOFF: f64 = 5.0;

/// `exp(-((x - x0)² + (log y - u0)²) / 2σ²)` restricted to the square
/// `|x - x0|, |log y - u0| ≤ 5σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub x0: f64,
    pub u0: f64,
    pub sigma: f64,
    x_mass: f64,
}

impl Bump {
    pub fn new(x0: f64, y0: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && y0 > 0.0) {
            return Err(Error::Degenerate("bump needs y0 > 0 and sigma > 0".into()));
        }
        let mut b = Self { x0, u0: y0.ln(), sigma, x_mass: 0.0 };
        let (a, c) = b.x_range();
        if a < -0.5 || c > 0.5 {
            return Err(Error::Degenerate(format!("bump support leaves the strip |x| <= 1/2 around x0 = {x0}")));
        }
        b.x_mass = quad::integrate(|x| Complex64::new(b.profile(x - x0), 0.0), a, c, 1e-15, 1e-15).value.re;
        Ok(b)
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x0 - CUTOFF * self.sigma, self.x0 + CUTOFF * self.sigma)
    }

    pub fn u_range(&self) -> (f64, f64) {
        (self.u0 - CUTOFF * self.sigma, self.u0 + CUTOFF * self.sigma)
    }

    fn profile(&self, d: f64) -> f64 {
        if d.abs() > CUTOFF * self.sigma {
            0.0
        } else {
            (-d * d / (2.0 * self.sigma * self.sigma)).exp()
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.profile(x - self.x0) * self.profile(y.ln() - self.u0)
    }

    /// `∫_{-1/2}^{1/2} φ(x, y) dx`.
    pub fn x_average(&self, y: f64) -> f64 {
        self.x_mass * self.profile(y.ln() - self.u0)
    }

    /// `Λ^T φ`: the x-average is removed above height `T`.
    pub fn truncated(&self, x: f64, y: f64, t: f64) -> f64 {
        if y > t {
            self.eval(x, y) - self.x_average(y)
        } else {
            self.eval(x, y)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfAdjointness {
    /// `⟨Λ^T E, φ⟩`.
    pub lhs: Complex64,
    /// `⟨E, Λ^T φ⟩`.
    pub rhs: Complex64,
    pub residual: f64,
    pub est_error: f64,
}

/// Compares `⟨Λ^T E, φ⟩` with `⟨E, Λ^T φ⟩` over the fundamental domain, the
/// pairing being bilinear.
pub fn self_adjoint_check(cfg: &EisensteinConfig, bump: &Bump) -> Result<SelfAdjointness> {
    cfg.validate()?;
    let e = EisensteinSeries::with_digits(cfg.s, cfg.digits)?;
    let t = cfg.t;
    let tol = cfg.tolerance();
    let (xa, xb) = bump.x_range();
    let (ua, ub) = bump.u_range();
    let splits = [t.ln()];

    let lhs = integrate_region(
        |x, y| Ok(e.truncated(&UpperHalfPoint { x, y }, t)? * bump.eval(x, y)),
        xa,
        xb,
        ua,
        ub,
        &splits,
        tol,
    )?;
    let direct = integrate_region(|x, y| Ok(e.value(&UpperHalfPoint { x, y })? * bump.eval(x, y)), xa, xb, ua, ub, &splits, tol)?;
    let mut rhs = direct;
    if ub > t.ln() {
        let cusp = integrate_region(|x, y| Ok(e.value(&UpperHalfPoint { x, y })? * bump.x_average(y)), -0.5, 0.5, ua.max(t.ln()), ub, &[], tol)?;
        rhs.value -= cusp.value;
        rhs.est_error += cusp.est_error;
    }
    Ok(SelfAdjointness {
        lhs: lhs.value,
        rhs: rhs.value,
        residual: (lhs.value - rhs.value).norm(),
        est_error: lhs.est_error + rhs.est_error,
    })
}
