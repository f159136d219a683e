//! Scalar traits shared by the exact combinatorial code.
//!
//! The chamber and polygon predicates only ever compare signs of
//! integer-weighted sums, so they run over any [`OrderedRing`]. Anything that
//! averages over blocks needs division and asks for [`OrderedField`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

pub trait OrderedRing: Clone + Debug + PartialOrd + Num + std::ops::Neg<Output = Self> {
    fn from_int(v: i64) -> Self;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

pub trait OrderedField: OrderedRing {}

macro_rules! ring_prim {
    ($($t:ty),*) => {$(
        impl OrderedRing for $t {
            #[inline]
            fn from_int(v: i64) -> Self {
                v as $t
            }
        }
    )*};
}

ring_prim!(i32, i64, i128, f32, f64);

impl OrderedField for f32 {}
impl OrderedField for f64 {}

impl OrderedRing for BigInt {
    fn from_int(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl<T> OrderedRing for Ratio<T>
where
    T: Clone + Debug + Integer + Signed + FromPrimitive,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer out of range"))
    }
}

impl<T> OrderedField for Ratio<T> where T: Clone + Debug + Integer + Signed + FromPrimitive {}

pub(crate) fn sum<S: OrderedRing>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |a, b| a + b.clone())
}

pub(crate) fn int<S: OrderedRing>(v: usize) -> S {
    S::from_int(v as i64)
}
