//! Scalar abstraction: all core math is generic over an IEEE float type.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the toolkit computes with (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Convert an `f64` literal into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Convert an integer literal into the working scalar type.
#[inline]
pub fn int<T: Real>(n: i64) -> T {
    T::from_i64(n).expect("integer literal representable in scalar type")
}

/// Neumaier compensated sum; the terms of the polynomial constants cancel
/// heavily near `h = 1` and plain summation would add avoidable error.
pub fn compensated_sum<T: Real>(terms: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        // 1 + 1e-16 + ... + -1 in a bad order
        let terms: Vec<f64> = vec![1.0, 1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(&terms), 2.0);
    }

    #[test]
    fn literal_conversion_roundtrips() {
        let x: f64 = real(0.25);
        assert_eq!(x, 0.25);
        let y: f32 = real(0.25);
        assert_eq!(y, 0.25f32);
        assert_eq!(int::<f64>(-7), -7.0);
    }
}
