use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

/// Multivariate order-2 jet over `m` active coordinates: value, gradient and
/// Hessian (row-major, `m × m`, symmetric).
#[derive(Clone, Debug, PartialEq)]
pub struct FloatJet2<F> {
    pub v: F,
    pub grad: Vec<F>,
    pub hess: Vec<F>,
}

impl<F: Float> FloatJet2<F> {
    pub fn constant(v: F, dim: usize) -> Self {
        Self {
            v,
            grad: vec![F::zero(); dim],
            hess: vec![F::zero(); dim * dim],
        }
    }

    /// Coordinate function `x_i` evaluated at `x0`.
    pub fn variable(i: usize, x0: F, dim: usize) -> Self {
        assert!(i < dim, "coordinate index {i} out of range for dimension {dim}");
        let mut out = Self::constant(x0, dim);
        out.grad[i] = F::one();
        out
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn d(&self, i: usize) -> F {
        self.grad[i]
    }

    pub fn dd(&self, i: usize, j: usize) -> F {
        self.hess[i * self.dim() + j]
    }

    pub fn scale(&self, k: F) -> Self {
        Self {
            v: self.v * k,
            grad: self.grad.iter().map(|&g| g * k).collect(),
            hess: self.hess.iter().map(|&h| h * k).collect(),
        }
    }

    pub fn add_const(&self, k: F) -> Self {
        let mut out = self.clone();
        out.v = out.v + k;
        out
    }

    /// Composition with a scalar function given its value and first two
    /// derivatives at `self.v`.
    pub fn compose(&self, g0: F, g1: F, g2: F) -> Self {
        let m = self.dim();
        let mut hess = vec![F::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                hess[i * m + j] = g1 * self.hess[i * m + j] + g2 * self.grad[i] * self.grad[j];
            }
        }
        Self {
            v: g0,
            grad: self.grad.iter().map(|&g| g * g1).collect(),
            hess,
        }
    }

    /// Panics if the value is zero.
    pub fn recip(&self) -> Self {
        assert!(self.v != F::zero(), "reciprocal of a jet with zero value");
        let inv = self.v.recip();
        let two = F::one() + F::one();
        self.compose(inv, -inv * inv, two * inv * inv * inv)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self * &rhs.recip()
    }

    pub fn powi(&self, k: i32) -> Self {
        let x = self.v;
        let kf = F::from(k).expect("exponent representable");
        let one = F::one();
        self.compose(x.powi(k), kf * x.powi(k - 1), kf * (kf - one) * x.powi(k - 2))
    }

    fn check_dim(&self, rhs: &Self) {
        assert_eq!(self.dim(), rhs.dim(), "jet dimension mismatch");
    }
}

impl<F: Float> Add for &FloatJet2<F> {
    type Output = FloatJet2<F>;
    fn add(self, rhs: &FloatJet2<F>) -> FloatJet2<F> {
        self.check_dim(rhs);
        FloatJet2 {
            v: self.v + rhs.v,
            grad: self.grad.iter().zip(&rhs.grad).map(|(&a, &b)| a + b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<F: Float> Sub for &FloatJet2<F> {
    type Output = FloatJet2<F>;
    fn sub(self, rhs: &FloatJet2<F>) -> FloatJet2<F> {
        self.check_dim(rhs);
        FloatJet2 {
            v: self.v - rhs.v,
            grad: self.grad.iter().zip(&rhs.grad).map(|(&a, &b)| a - b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<F: Float> Mul for &FloatJet2<F> {
    type Output = FloatJet2<F>;
    fn mul(self, rhs: &FloatJet2<F>) -> FloatJet2<F> {
        self.check_dim(rhs);
        let m = self.dim();
        let mut hess = vec![F::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                let k = i * m + j;
                hess[k] = self.hess[k] * rhs.v
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i]
                    + self.v * rhs.hess[k];
            }
        }
        FloatJet2 {
            v: self.v * rhs.v,
            grad: (0..m).map(|i| self.grad[i] * rhs.v + self.v * rhs.grad[i]).collect(),
            hess,
        }
    }
}

impl<F: Float> Neg for &FloatJet2<F> {
    type Output = FloatJet2<F>;
    fn neg(self) -> FloatJet2<F> {
        self.scale(-F::one())
    }
}

macro_rules! owned_op {
    ($tr:ident, $method:ident) => {
        impl<F: Float> $tr for FloatJet2<F> {
            type Output = FloatJet2<F>;
            fn $method(self, rhs: FloatJet2<F>) -> FloatJet2<F> {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_in_two_variables() {
        // f = x² y at (3, 2)
        let x = FloatJet2::variable(0, 3.0, 2);
        let y = FloatJet2::variable(1, 2.0, 2);
        let f = &(&x * &x) * &y;
        assert_eq!(f.v, 18.0);
        assert_eq!(f.grad, vec![12.0, 9.0]);
        assert_eq!(f.hess, vec![4.0, 6.0, 6.0, 0.0]);
    }

    #[test]
    fn reciprocal_derivatives() {
        // 1/(x + y) at (1, 1)
        let x = FloatJet2::variable(0, 1.0, 2);
        let y = FloatJet2::variable(1, 1.0, 2);
        let f = (&x + &y).recip();
        assert_relative_eq!(f.v, 0.5);
        assert_relative_eq!(f.d(0), -0.25);
        assert_relative_eq!(f.dd(0, 1), 0.25);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = FloatJet2::variable(0, 1.5, 1);
        let cube = &(&x * &x) * &x;
        let p = x.powi(3);
        assert_relative_eq!(p.v, cube.v);
        assert_relative_eq!(p.d(0), cube.d(0));
        assert_relative_eq!(p.dd(0, 0), cube.dd(0, 0));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mixing_dimensions_panics() {
        let _ = &FloatJet2::<f64>::constant(1.0, 2) + &FloatJet2::constant(1.0, 3);
    }
}
