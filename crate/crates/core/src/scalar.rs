//! Scalar abstraction for the exact linear algebra kernels.
//!
//! Everything in [`crate::linalg`] is generic over these traits so the same
//! elimination and normal-form code runs over machine integers, big
//! integers, and exact rationals. The domain layer fixes the concrete
//! aliases [`crate::Int`] and [`crate::Rat`].

use std::fmt;
use std::ops::Div;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;

/// Minimal ring-like scalar: exact, signed, comparable.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + Signed + PartialOrd + 'static {}

impl<T> Scalar for T where T: Clone + fmt::Debug + fmt::Display + Signed + PartialOrd + 'static {}

/// Integer scalar with Euclidean structure (gcd, exact division by gcd).
pub trait IntScalar: Scalar + Integer + std::hash::Hash {}

impl<T> IntScalar for T where T: Scalar + Integer + std::hash::Hash {}

/// Field scalar: division by any nonzero element is exact.
///
/// Deliberately not a blanket impl; integer types have `Div` but truncate.
pub trait FieldScalar: Scalar + Div<Output = Self> {}

impl<T> FieldScalar for Ratio<T> where T: Clone + Integer + fmt::Debug + fmt::Display + Signed + std::hash::Hash + 'static {}

/// Embed an integer scalar into its field of fractions.
pub fn to_ratio<T: IntScalar>(x: T) -> Ratio<T> {
    Ratio::from_integer(x)
}

/// Embed an integer vector into the field of fractions componentwise.
pub fn to_ratio_vec<T: IntScalar>(xs: &[T]) -> Vec<Ratio<T>> {
    xs.iter().cloned().map(Ratio::from_integer).collect()
}
