//! Exact scalar fields.
//!
//! All algebra in this crate is written against [`Field`], a small extension
//! of the `num-traits` arithmetic vocabulary with exact inversion and the
//! complex conjugation needed by the quantum-torus involution. Floating point
//! types deliberately do not implement it: every decision procedure here
//! (ranks, nullspaces, isolation) needs exact zero tests.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact field of characteristic zero.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    /// Complex conjugation. The identity on rational numbers.
    fn conj(&self) -> Self {
        self.clone()
    }

    /// Returns the value as a rational number when it lies in `Q`.
    fn to_rational(&self) -> Option<BigRational>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Shorthand for building a rational from an integer.
pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn q_frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Converts an integral rational to `i64`, if it is one and fits.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.to_integer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops() {
        let a = q_frac(3, 4);
        assert_eq!(a.inv().unwrap(), q_frac(4, 3));
        assert!(q(0).inv().is_none());
        assert_eq!(Field::div(&q(1), &q(2)).unwrap(), q_frac(1, 2));
        assert_eq!(rational_to_i64(&q(-7)), Some(-7));
        assert_eq!(rational_to_i64(&q_frac(1, 2)), None);
    }
}
