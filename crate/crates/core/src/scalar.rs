//! Numeric backing for probabilities: exact rationals or `f64`.
//!
//! Every distribution-level operation is generic over [`Scalar`], so the same
//! code path produces exact rational answers for the oracles and fast float
//! answers for simulation.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used throughout the exact code paths.
pub type Exact = BigRational;

/// Absolute tolerance for the unit-sum check of float distributions.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// `num / den` in this backing.
    fn from_ratio(num: u64, den: u64) -> Self;

    /// Conversion from a float. Exact for the rational backing; `None` for
    /// non-finite input.
    fn from_f64(x: f64) -> Option<Self>;

    fn as_f64(&self) -> f64;

    /// Whether a computed total counts as 1 for this backing.
    fn is_unit_sum(&self) -> bool;

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            Self::zero() - self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn is_unit_sum(&self) -> bool {
        (self - 1.0).abs() <= FLOAT_SUM_TOLERANCE
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_unit_sum(&self) -> bool {
        self.is_one()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

/// Shorthand for an exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Exact {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
