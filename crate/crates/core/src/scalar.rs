//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits as nt;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point types the toolkit can run on (`f32`, `f64`).
///
/// Tolerances throughout the crate are expressed as `f64` literals and
/// converted through [`lit`]; the documented thresholds assume `f64`.
pub trait Scalar:
    nt::Float
    + nt::FloatConst
    + nt::FromPrimitive
    + nt::NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: nt::Float
        + nt::FloatConst
        + nt::FromPrimitive
        + nt::NumAssign
        + Sum
        + Default
        + Debug
        + Display
        + Serialize
        + DeserializeOwned
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the working scalar.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Euclidean dot product of two equal-length slices.
#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
