//! Coefficient fields for exponential polynomials.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive, Zero};

use crate::Rational;

const NEGLIGIBLE: f64 = 1e-12;

pub trait ConeField: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    /// Zero tests are decisive: a nonzero value is never treated as zero.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn to_complex(&self) -> Complex64;

    /// Nonzero but too close to zero to divide by safely.
    fn is_negligible(&self) -> bool;

    /// A total order used only to sort terms canonically.
    fn total_cmp(&self, other: &Self) -> Ordering;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }
}

impl ConeField for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_negligible(&self) -> bool {
        false
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// # Panics
///
/// `from_rational` panics when the value does not fit in `i64` parts.
impl ConeField for Ratio<i64> {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        let n = q.numer().to_i64().expect("numerator out of range for Ratio<i64>");
        let d = q.denom().to_i64().expect("denominator out of range for Ratio<i64>");
        Ratio::new(n, d)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_negligible(&self) -> bool {
        false
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl ConeField for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn is_negligible(&self) -> bool {
        !self.is_zero() && self.abs() < NEGLIGIBLE
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
}

impl ConeField for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        !self.is_zero() && self.norm() < NEGLIGIBLE
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then(self.im.total_cmp(&other.im))
    }
}

pub(crate) fn dot<F: ConeField>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |s, (x, y)| s + x.clone() * y.clone())
}

pub(crate) fn lift<F: ConeField>(v: &[Rational]) -> Vec<F> {
    v.iter().map(F::from_rational).collect()
}

pub(crate) fn lexicographic<F: ConeField>(a: &[F], b: &[F]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.len().cmp(&b.len()))
}
