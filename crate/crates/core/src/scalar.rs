//! Minimal ring abstraction so the tensor layer can run over floats, exact
//! rationals and polynomials alike.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Clone + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Exact `num / den` where the ring allows it.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}
