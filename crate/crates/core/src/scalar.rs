//! Scalar traits.
//!
//! Floating-point code is written against [`Real`]; stencil derivation runs
//! over any [`Field`], which includes exact rationals.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, NumAssignOps, One, ToPrimitive, Zero};

/// Exact rational scalar used for filter and stencil derivation.
pub type Rational = BigRational;

/// Commutative field arithmetic by value. Implemented for the floating
/// point types and for [`Rational`].
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64_lossy(&self) -> f64;
}

impl Field for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

impl Field for Rational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalar for fields, operators, assembly and solves.
pub trait Real:
    Float + FromPrimitive + NumAssignOps + Sum + Field + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion of an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable")
    }

    /// Machine epsilon-scaled tolerance helper.
    fn eps() -> Self {
        Self::epsilon()
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Convert a field value into a float, going through `f64`.
pub fn to_real<T: Real, F: Field>(v: &F) -> T {
    T::lit(v.to_f64_lossy())
}

/// Max-norm of a slice.
pub fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Euclidean norm of a slice.
pub fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().map(|x| *x * *x).sum::<T>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip() {
        let r = Rational::from_ratio(-1, 16);
        assert_eq!(r.to_f64_lossy(), -0.0625);
        let x: f64 = to_real(&r);
        assert_eq!(x, -0.0625);
    }

    #[test]
    fn norms() {
        let v = [3.0_f64, -4.0];
        assert_eq!(max_abs(&v), 4.0);
        assert_eq!(norm2(&v), 5.0);
    }
}
