use std::fmt;

use serde::Serialize;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{Field, OrderedField};

/// Univariate polynomial, coefficients lowest degree first. The zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Serialize)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `t − r`.
    pub fn linear_root(r: T) -> Self {
        Self::new(vec![-r, T::one()])
    }

    /// Product of `(t − r)` over the roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots
            .iter()
            .fold(Self::constant(T::one()), |acc, r| acc.mul(&Self::linear_root(r.clone())))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("polynomial of a non-square matrix".into()));
        }
        let n = a.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(a)?.try_add(&Matrix::identity(n).scale(c))?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            (0..len)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(T::zero);
                    let b = rhs.coeffs.get(k).cloned().unwrap_or_else(T::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let factor = rem[rem.len() - 1].clone() / lead.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - factor.clone() * d.clone();
            }
            quot[k] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p′)`: same roots, all simple.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_rem(&g)?.0.monic())
    }

    /// Multiplicity of `r` as a root.
    pub fn multiplicity(&self, r: &T) -> usize {
        let lin = Self::linear_root(r.clone());
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (quot, rem) = p.div_rem(&lin).expect("nonzero divisor");
            if !rem.is_zero() {
                break;
            }
            p = quot;
            m += 1;
        }
        m
    }
}

impl<T: OrderedField> Polynomial<T> {
    /// Sturm sequence `p, p′, −rem(p, p′), …`.
    pub fn sturm_sequence(&self) -> Result<Vec<Self>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq[seq.len() - 1].is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1])?;
            seq.push(r.neg());
        }
        seq.pop();
        Ok(seq)
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> Result<usize> {
        let seq = self.sturm_sequence()?;
        let sign_at = |p: &Self, at_plus_infinity: bool| -> i32 {
            let lead = p.leading().expect("Sturm entries are nonzero");
            let s = if lead.is_positive() { 1 } else { -1 };
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !at_plus_infinity && odd {
                -s
            } else {
                s
            }
        };
        let changes = |plus: bool| {
            let signs: Vec<i32> = seq.iter().map(|p| sign_at(p, plus)).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        Ok(changes(false) - changes(true))
    }

    /// Whether every complex root is real, decided exactly by a Sturm count
    /// on the squarefree part.
    pub fn real_rooted(&self) -> Result<bool> {
        let sf = self.squarefree_part()?;
        let deg = sf.degree().unwrap_or(0);
        Ok(deg == 0 || sf.count_real_roots()? == deg)
    }
}

/// Characteristic polynomial `det(tI − A)` via reduction to upper
/// Hessenberg form and the standard determinant recurrence.
pub fn char_poly<T: Field>(a: &Matrix<T>) -> Result<Polynomial<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let h = hessenberg(a);
    let n = h.rows();
    // p[m] = characteristic polynomial of the leading m×m block.
    let mut p: Vec<Polynomial<T>> = vec![Polynomial::constant(T::one())];
    for m in 0..n {
        let mut next = Polynomial::linear_root(h[(m, m)].clone()).mul(&p[m]);
        let mut sub = T::one();
        for i in (0..m).rev() {
            sub = sub * h[(i + 1, i)].clone();
            if sub.is_zero() {
                break;
            }
            let coeff = h[(i, m)].clone() * sub.clone();
            if !coeff.is_zero() {
                next = next.add(&p[i].scale(&-coeff));
            }
        }
        p.push(next);
    }
    Ok(p.pop().expect("at least the constant polynomial"))
}

/// Similar upper Hessenberg matrix by Gaussian similarity transforms.
fn hessenberg<T: Field>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let pivot = (k + 1..n)
            .filter(|&i| !h[(i, k)].is_zero())
            .min_by(|&i, &j| {
                h[(i, k)]
                    .pivot_cost()
                    .partial_cmp(&h[(j, k)].pivot_cost())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = pivot else { continue };
        if p != k + 1 {
            for j in 0..n {
                let tmp = h[(p, j)].clone();
                h[(p, j)] = h[(k + 1, j)].clone();
                h[(k + 1, j)] = tmp;
            }
            for i in 0..n {
                let tmp = h[(i, p)].clone();
                h[(i, p)] = h[(i, k + 1)].clone();
                h[(i, k + 1)] = tmp;
            }
        }
        let piv = h[(k + 1, k)].clone();
        for i in k + 2..n {
            if h[(i, k)].is_zero() {
                continue;
            }
            let m = h[(i, k)].clone() / piv.clone();
            for j in 0..n {
                let v = h[(k + 1, j)].clone();
                h[(i, j)] = h[(i, j)].clone() - m.clone() * v;
            }
            for r in 0..n {
                let v = h[(r, i)].clone();
                h[(r, k + 1)] = h[(r, k + 1)].clone() + m.clone() * v;
            }
        }
    }
    h
}

impl<T: fmt::Display + Field> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn roots(rs: &[i64]) -> Polynomial<Rational> {
        Polynomial::from_roots(&rs.iter().map(|&r| q(r, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn identity_char_poly() {
        let p = char_poly(&Matrix::<Rational>::identity(2)).unwrap();
        assert_eq!(p, roots(&[1, 1]));
    }

    #[test]
    fn char_poly_of_companion_like_matrix() {
        let a = Matrix::from_rows(vec![
            vec![q(0, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1)],
            vec![q(6, 1), q(-11, 1), q(6, 1)],
        ])
        .unwrap();
        assert_eq!(char_poly(&a).unwrap(), roots(&[1, 2, 3]));
    }

    #[test]
    fn nilpotent_char_poly() {
        let mut a = Matrix::<Rational>::zeros(3, 3);
        a[(0, 2)] = q(1, 1);
        assert_eq!(char_poly(&a).unwrap(), roots(&[0, 0, 0]));
    }

    #[test]
    fn real_rootedness() {
        let t2_plus_1 = Polynomial::new(vec![q(1, 1), q(0, 1), q(1, 1)]);
        assert!(!t2_plus_1.real_rooted().unwrap());
        assert!(roots(&[0, 0, 2, 1, -1, -1, -1]).real_rooted().unwrap());
        assert_eq!(Polynomial::<Rational>::zero().real_rooted(), Err(Error::ZeroPolynomial));
        let mixed = roots(&[3, 3]).mul(&t2_plus_1);
        assert!(!mixed.real_rooted().unwrap());
        assert_eq!(roots(&[5, -2, -2, 7]).count_real_roots().unwrap(), 3);
    }

    #[test]
    fn multiplicities_and_gcd() {
        let p = roots(&[2, 1, 1, 0, 0, -1]);
        assert_eq!(p.multiplicity(&q(1, 1)), 2);
        assert_eq!(p.multiplicity(&q(5, 1)), 0);
        assert_eq!(p.gcd(&roots(&[1, 7])), roots(&[1]));
        assert_eq!(p.squarefree_part().unwrap(), roots(&[2, 1, 0, -1]));
    }

    #[test]
    fn cayley_hamilton_small() {
        let a = Matrix::from_rows(vec![vec![q(1, 2), q(3, 1)], vec![q(-1, 1), q(2, 5)]]).unwrap();
        assert!(char_poly(&a).unwrap().eval_matrix(&a).unwrap().is_zero());
    }
}
