use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use super::Field;
use crate::error::{Error, Result};

/// Univariate order-2 jet: value with first and second derivative in one
/// variable (here always `ρ`), carried through truncated Taylor arithmetic.
#[derive(Clone, PartialEq, Serialize)]
pub struct Jet2<T> {
    pub v: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Field> Jet2<T> {
    pub fn new(v: T, d1: T, d2: T) -> Self {
        Self { v, d1, d2 }
    }

    /// A constant: both derivatives vanish.
    pub fn lift(v: T) -> Self {
        Self::new(v, T::zero(), T::zero())
    }

    /// The independent variable at `x0`.
    pub fn variable(x0: T) -> Self {
        Self::new(x0, T::one(), T::zero())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(
            self.v.clone() * k.clone(),
            self.d1.clone() * k.clone(),
            self.d2.clone() * k.clone(),
        )
    }

    pub fn try_recip(&self) -> Result<Self> {
        if self.v.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (1/g)' = -g'/g², (1/g)'' = 2g'²/g³ - g''/g²
        let inv = self.v.recip();
        let inv2 = inv.clone() * inv.clone();
        let inv3 = inv2.clone() * inv.clone();
        let two = T::from_i64(2);
        Ok(Self::new(
            inv,
            -(self.d1.clone() * inv2.clone()),
            two * self.d1.clone() * self.d1.clone() * inv3 - self.d2.clone() * inv2,
        ))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * rhs.try_recip()?)
    }

    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.try_recip()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out * base.clone();
        }
        Ok(out)
    }
}

impl<T: Field> Add for Jet2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.v + rhs.v, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl<T: Field> Sub for Jet2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.v - rhs.v, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl<T: Field> Mul for Jet2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let two = T::from_i64(2);
        let d2 = self.d2.clone() * rhs.v.clone()
            + two * self.d1.clone() * rhs.d1.clone()
            + self.v.clone() * rhs.d2.clone();
        let d1 = self.d1 * rhs.v.clone() + self.v.clone() * rhs.d1;
        Self::new(self.v * rhs.v, d1, d2)
    }
}

impl<T: Field> Div for Jet2<T> {
    type Output = Self;
    /// Panics when the divisor's value vanishes; see [`Jet2::try_div`].
    fn div(self, rhs: Self) -> Self {
        self.try_div(&rhs).expect("jet division by a jet with zero value")
    }
}

impl<T: Field> Neg for Jet2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v, -self.d1, -self.d2)
    }
}

impl<T: Field> Zero for Jet2<T> {
    fn zero() -> Self {
        Self::lift(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d1.is_zero() && self.d2.is_zero()
    }
}

impl<T: Field> One for Jet2<T> {
    fn one() -> Self {
        Self::lift(T::one())
    }
}

impl<T: fmt::Debug> fmt::Debug for Jet2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?})", self.v, self.d1, self.d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::q;
    use crate::scalar::Rational;

    #[test]
    fn square_of_variable() {
        let x = Jet2::variable(q(2, 1));
        assert_eq!(x.clone() * x, Jet2::new(q(4, 1), q(4, 1), q(2, 1)));
    }

    #[test]
    fn lift_has_no_derivatives() {
        assert_eq!(Jet2::lift(q(5, 1)).d2, Rational::zero());
    }

    #[test]
    fn warp_function_at_rho_one() {
        // f = (ρ+2c)/(4ρ²(ρ+c)) at c = 0 is 1/(4ρ²): f = 1/4, f' = -1/2, f'' = 3/2
        let rho = Jet2::variable(q(1, 1));
        let c = Jet2::lift(q(0, 1));
        let two = Jet2::lift(q(2, 1));
        let four = Jet2::lift(q(4, 1));
        let num = rho.clone() + two * c.clone();
        let den = four * rho.clone() * rho.clone() * (rho + c);
        let f = num.try_div(&den).unwrap();
        assert_eq!(f, Jet2::new(q(1, 4), q(-1, 2), q(3, 2)));
    }

    #[test]
    fn division_by_zero_value() {
        let z = Jet2::new(q(0, 1), q(1, 1), q(0, 1));
        assert_eq!(Jet2::lift(q(1, 1)).try_div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn negative_powers() {
        let x = Jet2::variable(q(2, 1));
        // x^-2: 1/4, -2/8 = -1/4, 6/16 = 3/8
        assert_eq!(x.powi(-2).unwrap(), Jet2::new(q(1, 4), q(-1, 4), q(3, 8)));
    }
}
