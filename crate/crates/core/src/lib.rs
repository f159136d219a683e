//! Exact and numerical tools around parabolic truncation for SL_r over ℚ:
//! chamber combinatorics, Harder–Narasimhan filtrations of Euclidean lattices,
//! regularized integrals over cones, and the rank-2 non-abelian zeta function.

pub mod cone;
pub mod eisenstein;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod polygon;
pub mod root_data;
pub mod sampling;
pub mod scalar;
pub mod trunc;

pub use error::{Error, Result};
pub use root_data::{ApartmentVector, LinearForm, ParabolicIndex};
pub use scalar::{OrderedField, OrderedRing};

pub type Rational = num_rational::BigRational;
pub type Q64 = num_rational::Ratio<i64>;
pub type Q128 = num_rational::Ratio<i128>;

pub type RationalVector = ApartmentVector<Rational>;
pub type RationalForm = LinearForm<Rational>;
pub type RationalPolygon = polygon::Polygon<Rational>;
