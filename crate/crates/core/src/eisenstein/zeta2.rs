use std::f64::consts::PI;

use num_complex::Complex64;

use super::{compact_region_period, completed_zeta_digits, singular_s, EisensteinConfig, PeriodValue};
use crate::error::{Error, Result};

const CAUCHY_RADIUS: f64 = 0.05;
const CAUCHY_POINTS: usize = 64;
const NEAR_HALF: f64 = 1e-3;

/// Width of the argument-principle rectangle on each side of the critical line.
const STRIP_HALF_WIDTH: f64 = 0.25;

/// `ξ(2s) ∫_{F ∩ {y ≤ 1}} E(z, s) dμ` by quadrature.
pub fn rank2_zeta(s: Complex64, digits: u32) -> Result<PeriodValue> {
    let cfg = EisensteinConfig::new(s, 1.0)?.with_digits(digits);
    let q = compact_region_period(&cfg)?;
    let xi = completed_zeta_digits(2.0 * s, digits)?;
    Ok(PeriodValue { value: xi * q.value, est_error: xi.norm() * q.est_error })
}

/// `ξ(2s)/(s-1) - ξ(2s-1)/s`; the removable point `s = 1/2` is filled in by
/// the mean over a small circle.
pub fn rank2_zeta_closed(s: Complex64) -> Result<Complex64> {
    rank2_zeta_closed_digits(s, 15)
}

pub fn rank2_zeta_closed_digits(s: Complex64, digits: u32) -> Result<Complex64> {
    singular_s(s, &[0.0, 1.0])?;
    if (s - 0.5).norm() < NEAR_HALF {
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..CAUCHY_POINTS {
            let w = Complex64::from_polar(CAUCHY_RADIUS, 2.0 * PI * (k as f64 + 0.5) / CAUCHY_POINTS as f64);
            let p = Complex64::new(0.5, 0.0) + w;
            let value = raw_closed(p, digits)?;
            // Cauchy's formula for f(s) with s inside the circle
            sum += value * w / (p - s);
        }
        return Ok(sum / CAUCHY_POINTS as f64);
    }
    raw_closed(s, digits)
}

fn raw_closed(s: Complex64, digits: u32) -> Result<Complex64> {
    Ok(completed_zeta_digits(2.0 * s, digits)? / (s - 1.0) - completed_zeta_digits(2.0 * s - 1.0, digits)? / s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroScan {
    /// Heights `t` of the located zeros `1/2 + it`.
    pub zeros: Vec<f64>,
    /// `(t, ζ(1/2 + it))` on the scan grid.
    pub samples: Vec<(f64, Complex64)>,
    pub value_at_t_min: f64,
    /// Zeros in the rectangle `|Re s - 1/2| ≤ 1/4`, `t_min ≤ Im s ≤ t_max`.
    pub argument_count: i64,
}

fn on_line(t: f64, digits: u32) -> Result<Complex64> {
    rank2_zeta_closed_digits(Complex64::new(0.5, t), digits)
}

/// Sign changes of `t ↦ ζ(1/2 + it)` on a grid, refined by bisection, and the
/// argument-principle count of the surrounding rectangle.
pub fn zero_scan(t_min: f64, t_max: f64, step: f64, digits: u32) -> Result<ZeroScan> {
    if !(t_min >= 0.0 && t_min < t_max && step > 0.0) {
        return Err(Error::Degenerate(format!("need 0 <= t_min < t_max and step > 0, got [{t_min}, {t_max}] step {step}")));
    }
    let n = ((t_max - t_min) / step).ceil() as usize;
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = (t_min + k as f64 * step).min(t_max);
        samples.push((t, on_line(t, digits)?));
    }
    let mut zeros = Vec::new();
    for (k, w) in samples.windows(2).enumerate() {
        let (mut a, fa) = (w[0].0, w[0].1.re);
        let (mut b, fb) = (w[1].0, w[1].1.re);
        if fa == 0.0 {
            if k == 0 || samples[k - 1].1.re != 0.0 {
                zeros.push(a);
            }
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        let mut sa = fa.signum();
        while b - a > 1e-9 {
            let m = 0.5 * (a + b);
            let fm = on_line(m, digits)?.re;
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == sa {
                a = m;
                sa = fm.signum();
            } else {
                b = m;
            }
        }
        zeros.push(0.5 * (a + b));
    }
    if let Some(&(t, v)) = samples.last() {
        if v.re == 0.0 && zeros.last() != Some(&t) {
            zeros.push(t);
        }
    }
    let value_at_t_min = samples[0].1.re;
    let argument_count = argument_principle_count(0.5 - STRIP_HALF_WIDTH, 0.5 + STRIP_HALF_WIDTH, t_min, t_max, digits)?;
    Ok(ZeroScan { zeros, samples, value_at_t_min, argument_count })
}

/// Winding number of `ζ` around the rectangle `[σ0, σ1] × [t0, t1]`, traced
/// with steps small enough that the phase moves less than `π/4` per step.
pub fn argument_principle_count(sigma0: f64, sigma1: f64, t0: f64, t1: f64, digits: u32) -> Result<i64> {
    if !(sigma0 < sigma1 && t0 < t1) || sigma0 <= 0.0 || sigma1 >= 1.0 {
        return Err(Error::Degenerate("rectangle must lie inside 0 < Re s < 1".into()));
    }
    let corners = [
        Complex64::new(sigma0, t0),
        Complex64::new(sigma1, t0),
        Complex64::new(sigma1, t1),
        Complex64::new(sigma0, t1),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        let len = (q - p).norm();
        let mut pos = 0.0;
        let mut h = 0.02f64.min(len);
        let mut prev = rank2_zeta_closed_digits(p, digits)?;
        if prev.norm() == 0.0 {
            return Err(Error::Singular(format!("zero on the contour at {p}")));
        }
        while pos < len {
            let next_pos = (pos + h).min(len);
            let z = p + (q - p) * (next_pos / len);
            let v = rank2_zeta_closed_digits(z, digits)?;
            if v.norm() == 0.0 {
                return Err(Error::Singular(format!("zero on the contour at {z}")));
            }
            let d = (v / prev).arg();
            if d.abs() > PI / 4.0 {
                h *= 0.5;
                if h < 1e-10 {
                    return Err(Error::NotConvergent(format!("phase varies too fast near {z}")));
                }
                continue;
            }
            total += d;
            prev = v;
            pos = next_pos;
            if d.abs() < PI / 16.0 {
                h = (h * 1.5).min(0.05);
            }
        }
    }
    Ok((total / (2.0 * PI)).round() as i64)
}
