//! Scalar types: exact rationals, quadratic surds, univariate order-2 jets and
//! multivariate float jets, together with the field traits the rest of the
//! crate is generic over.

mod float_jet;
mod jet;
mod rational;
mod surd;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use float_jet::FloatJet2;
pub use jet::Jet2;
pub use rational::{q, Rational};
pub use surd::Surd;

/// Commutative ring operations needed by dense matrix arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A field of scalars. Exact fields (`Rational`, `Surd<Rational>`) make every
/// zero test exact; float fields treat only `0.0` as zero.
pub trait Field: Ring + Div<Output = Self> + Send + Sync {
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    /// Ordering key for pivot selection: the smallest cost among the nonzero
    /// candidates wins.
    type PivotCost: PartialOrd;

    fn pivot_cost(&self) -> Self::PivotCost;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    /// Square root inside the field, if it exists there.
    fn sqrt_exact(&self) -> Option<Self>;

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.clone() / rhs.clone())
        }
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn powi(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out * self.clone();
        }
        out
    }
}

/// A totally ordered field.
pub trait OrderedField: Field + PartialOrd {
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            const EXACT: bool = false;
            type PivotCost = f64;

            fn pivot_cost(&self) -> f64 {
                -(*self as f64).abs()
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn sqrt_exact(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }
        }

        impl OrderedField for $t {}
    };
}

float_field!(f64);
float_field!(f32);
