use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{Field, OrderedField};
use crate::error::{Error, Result};

/// Element `a + b·√q` of a quadratic extension over `T`.
///
/// The radicand is carried only while `b ≠ 0`; a surd with `b = 0` is a plain
/// element of `T` and combines with surds of any radicand. When `q` is a
/// square in `T` the value collapses to `a + b·√q ∈ T` at construction.
#[derive(Clone)]
pub struct Surd<T> {
    a: T,
    b: T,
    radicand: Option<T>,
}

impl<T: Field + PartialOrd> Surd<T> {
    pub fn new(a: T, b: T, q: T) -> Result<Self> {
        if b.is_zero() {
            return Ok(Self::rational(a));
        }
        if q <= T::zero() {
            return Err(Error::InvalidRadicand(format!("{q:?}")));
        }
        Ok(match q.sqrt_exact() {
            Some(s) => Self::rational(a + b * s),
            None => Self {
                a,
                b,
                radicand: Some(q),
            },
        })
    }

    /// `√x` written over the radicand `q`, i.e. `s·√q` with `s² = x/q`.
    /// Fails when `x/q` is not a square in `T`.
    pub fn sqrt_over(x: &T, q: &T) -> Result<Self> {
        if x.is_zero() {
            return Ok(Self::zero());
        }
        let ratio = x.checked_div(q)?;
        let s = ratio
            .sqrt_exact()
            .ok_or_else(|| Error::Consistency(format!("{x:?}/{q:?} is not a square")))?;
        Self::new(T::zero(), s, q.clone())
    }
}

impl<T: Field> Surd<T> {
    pub fn rational(a: T) -> Self {
        Self {
            a,
            b: T::zero(),
            radicand: None,
        }
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn radicand(&self) -> Option<&T> {
        self.radicand.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&T> {
        self.is_rational().then_some(&self.a)
    }

    fn common_radicand(&self, other: &Self) -> Result<Option<T>> {
        match (&self.radicand, &other.radicand) {
            (Some(p), Some(q)) if p != q => Err(Error::RadicandMismatch(
                format!("{p:?}"),
                format!("{q:?}"),
            )),
            (Some(p), _) => Ok(Some(p.clone())),
            (None, r) => Ok(r.clone()),
        }
    }

    fn build(a: T, b: T, radicand: Option<T>) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Self { a, b, radicand }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let r = self.common_radicand(other)?;
        Ok(Self::build(
            self.a.clone() + other.a.clone(),
            self.b.clone() + other.b.clone(),
            r,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other.clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let r = self.common_radicand(other)?;
        let qv = r.clone().unwrap_or_else(T::zero);
        let a = self.a.clone() * other.a.clone() + self.b.clone() * other.b.clone() * qv;
        let b = self.a.clone() * other.b.clone() + other.a.clone() * self.b.clone();
        Ok(Self::build(a, b, r))
    }

    /// Multiplicative inverse `(a − b√q)/(a² − b²q)`.
    pub fn try_recip(&self) -> Result<Self> {
        match &self.radicand {
            None => Ok(Self::rational(T::one().checked_div(&self.a)?)),
            Some(qv) => {
                let norm =
                    self.a.clone() * self.a.clone() - self.b.clone() * self.b.clone() * qv.clone();
                let a = self.a.checked_div(&norm)?;
                let b = (-self.b.clone()).checked_div(&norm)?;
                Ok(Self::build(a, b, self.radicand.clone()))
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.try_recip()?)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::build(
            self.a.clone() * k.clone(),
            self.b.clone() * k.clone(),
            self.radicand.clone(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        match &self.radicand {
            None => self.a.to_f64(),
            Some(qv) => self.a.to_f64() + self.b.to_f64() * qv.to_f64().sqrt(),
        }
    }
}

impl<T: OrderedField> Surd<T> {
    /// Exact sign of `a + b√q`.
    pub fn signum(&self) -> Ordering {
        let zero = T::zero();
        let sa = self.a.partial_cmp(&zero).unwrap_or(Ordering::Equal);
        let Some(qv) = &self.radicand else {
            return sa;
        };
        let sb = self.b.partial_cmp(&zero).unwrap_or(Ordering::Equal);
        if sa == sb || sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a² with b²q
        let a2 = self.a.clone() * self.a.clone();
        let b2q = self.b.clone() * self.b.clone() * qv.clone();
        match a2.partial_cmp(&b2q).unwrap_or(Ordering::Equal) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }
}

impl<T: Field> PartialEq for Surd<T> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.radicand == other.radicand)
    }
}

impl<T: Field> fmt::Debug for Surd<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radicand {
            None => write!(f, "{:?}", self.a),
            Some(qv) => write!(f, "{:?} + {:?}*sqrt({:?})", self.a, self.b, qv),
        }
    }
}

impl<T: Field + fmt::Display> fmt::Display for Surd<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radicand {
            None => write!(f, "{}", self.a),
            Some(qv) => {
                let b = self.b.to_string();
                let root = match b.as_str() {
                    "1" => format!("sqrt({qv})"),
                    "-1" => format!("-sqrt({qv})"),
                    _ => format!("{b}*sqrt({qv})"),
                };
                if self.a.is_zero() {
                    write!(f, "{root}")
                } else if let Some(rest) = root.strip_prefix('-') {
                    write!(f, "{} - {rest}", self.a)
                } else {
                    write!(f, "{} + {root}", self.a)
                }
            }
        }
    }
}

impl<T: Field + fmt::Display> Serialize for Surd<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

// Operator impls panic on radicand mismatch; the `try_*` methods return errors.
impl<T: Field> Add for Surd<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("surd addition")
    }
}

impl<T: Field> Sub for Surd<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("surd subtraction")
    }
}

impl<T: Field> Mul for Surd<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("surd multiplication")
    }
}

impl<T: Field> Div for Surd<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.try_div(&rhs).expect("surd division")
    }
}

impl<T: Field> Neg for Surd<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::build(-self.a, -self.b, self.radicand)
    }
}

impl<T: Field> Zero for Surd<T> {
    fn zero() -> Self {
        Self::rational(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<T: Field> One for Surd<T> {
    fn one() -> Self {
        Self::rational(T::one())
    }
}

impl<T: Field> Field for Surd<T> {
    const EXACT: bool = T::EXACT;
    type PivotCost = T::PivotCost;

    fn pivot_cost(&self) -> T::PivotCost {
        if self.a.is_zero() {
            self.b.pivot_cost()
        } else {
            self.a.pivot_cost()
        }
    }

    fn from_i64(v: i64) -> Self {
        Self::rational(T::from_i64(v))
    }

    fn to_f64(&self) -> f64 {
        Surd::to_f64(self)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_rational() {
            self.a.sqrt_exact().map(Self::rational)
        } else {
            None
        }
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.try_div(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::q;
    use crate::scalar::Rational;

    fn s(a: Rational, b: Rational, r: Rational) -> Surd<Rational> {
        Surd::new(a, b, r).unwrap()
    }

    #[test]
    fn square_of_pure_surd_is_rational() {
        let x = s(q(0, 1), q(1, 1), q(3, 4));
        let sq = x.try_mul(&x).unwrap();
        assert!(sq.is_rational());
        assert_eq!(sq.a(), &q(3, 4));
    }

    #[test]
    fn product_formula() {
        let r = q(5, 1);
        let x = s(q(1, 2), q(2, 1), r.clone());
        let y = s(q(-3, 1), q(1, 3), r.clone());
        let p = x.try_mul(&y).unwrap();
        // (a1 a2 + b1 b2 q) + (a1 b2 + a2 b1) sqrt(q)
        assert_eq!(p.a(), &(q(-3, 2) + q(2, 3) * q(5, 1)));
        assert_eq!(p.b(), &(q(1, 6) - q(6, 1)));
    }

    #[test]
    fn perfect_square_radicand_normalizes() {
        let x = s(q(1, 1), q(2, 1), q(9, 4));
        assert!(x.is_rational());
        assert_eq!(x.a(), &q(4, 1));
        assert_eq!(x.to_string(), "4");
    }

    #[test]
    fn mismatched_radicands_error() {
        let x = s(q(0, 1), q(1, 1), q(2, 1));
        let y = s(q(0, 1), q(1, 1), q(3, 1));
        assert!(matches!(x.try_add(&y), Err(Error::RadicandMismatch(_, _))));
        assert!(matches!(x.try_mul(&y), Err(Error::RadicandMismatch(_, _))));
        // a rational combines with anything
        assert!(x.try_add(&Surd::rational(q(1, 1))).is_ok());
    }

    #[test]
    fn invalid_radicand() {
        assert!(Surd::new(q(0, 1), q(1, 1), q(-2, 1)).is_err());
        assert!(Surd::new(q(0, 1), q(1, 1), q(0, 1)).is_err());
    }

    #[test]
    fn sigma_ratio_is_rational() {
        // sigma_1 / sigma_4 at rho = 1, c = 1: (1/2) sqrt(2/3) / sqrt(2/3) = 1/2
        let qv = q(2, 3);
        let sigma1 = s(q(0, 1), q(1, 2), qv.clone());
        let sigma4 = s(q(0, 1), q(1, 1), qv);
        assert_eq!(sigma4.to_string(), "sqrt(2/3)");
        let ratio = sigma1.try_mul(&sigma4.try_recip().unwrap()).unwrap();
        assert_eq!(ratio, Surd::rational(q(1, 2)));
    }

    #[test]
    fn exact_sign() {
        let qv = q(2, 1);
        assert!(s(q(-1, 1), q(1, 1), qv.clone()).is_positive()); // sqrt2 - 1
        assert!(!s(q(2, 1), q(-1, 1), q(5, 1)).is_positive()); // 2 - sqrt5
        assert_eq!(s(q(0, 1), q(-1, 3), qv).signum(), Ordering::Less);
    }

    #[test]
    fn sqrt_over_radicand() {
        // 1/sqrt(f) at rho = 1, c = 1 is 2 sqrt(2/3)
        let x = Surd::sqrt_over(&q(8, 3), &q(2, 3)).unwrap();
        assert_eq!(x, s(q(0, 1), q(2, 1), q(2, 3)));
        assert!(Surd::sqrt_over(&q(1, 1), &q(2, 1)).is_err());
    }

    #[test]
    fn display_forms() {
        let s = |a: (i64, i64), b: (i64, i64), r: (i64, i64)| {
            Surd::new(q(a.0, a.1), q(b.0, b.1), q(r.0, r.1)).unwrap().to_string()
        };
        assert_eq!(s((0, 1), (1, 2), (2, 3)), "1/2*sqrt(2/3)");
        assert_eq!(s((1, 1), (-2, 1), (3, 1)), "1 - 2*sqrt(3)");
        assert_eq!(s((1, 3), (-1, 1), (2, 1)), "1/3 - sqrt(2)");
        assert_eq!(s((5, 1), (1, 1), (4, 1)), "7");
    }
}
