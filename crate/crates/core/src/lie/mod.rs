//! Lie algebras given by structure constants in a fixed ordered basis.

mod derivations;
mod series;
mod splitting;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Rational};

pub use series::{CompleteSolvability, Subspace};
pub use splitting::{Splitting, SplittingReport};

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<T> {
    dim: usize,
    c: Vec<T>,
}

/// Outcome of an exhaustive Jacobi check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub holds: bool,
    /// First failing basis triple `(i, j, k)` with `i < j < k`.
    pub witness: Option<(usize, usize, usize)>,
}

impl<T: Field> StructureConstants<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            c: vec![T::zero(); dim * dim * dim],
        }
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        Self::new(dim)
    }

    /// `heis(2m+1)` with basis `(x_1, y_1, …, x_m, y_m, z)` and `[x_i, y_i] = z`.
    pub fn heisenberg(m: usize) -> Self {
        let mut l = Self::new(2 * m + 1);
        for i in 0..m {
            l.set_bracket(2 * i, 2 * i + 1, &[(2 * m, T::one())])
                .expect("distinct indices");
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.dim + j) * self.dim
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &T {
        &self.c[self.offset(i, j) + k]
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[T] {
        let o = self.offset(i, j);
        &self.c[o..o + self.dim]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim {
            return Err(Error::DimensionMismatch(format!(
                "basis index {i} in dimension {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// Sets `[e_i, e_j]` (and hence `[e_j, e_i]`) to the given combination,
    /// replacing any previous value.
    pub fn set_bracket(&mut self, i: usize, j: usize, terms: &[(usize, T)]) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::InvalidParameter(format!("[e_{i}, e_{i}] is always zero")));
        }
        let (oij, oji) = (self.offset(i, j), self.offset(j, i));
        for k in 0..self.dim {
            self.c[oij + k] = T::zero();
            self.c[oji + k] = T::zero();
        }
        for (k, v) in terms {
            self.check_index(*k)?;
            self.c[oij + k] = self.c[oij + k].clone() + v.clone();
            self.c[oji + k] = -self.c[oij + k].clone();
        }
        Ok(())
    }

    /// Adds `v` to `c[i][j][k]` and subtracts it from `c[j][i][k]`.
    pub fn add_coeff(&mut self, i: usize, j: usize, k: usize, v: T) -> Result<()> {
        for idx in [i, j, k] {
            self.check_index(idx)?;
        }
        if i == j {
            return Err(Error::InvalidParameter(format!("[e_{i}, e_{i}] is always zero")));
        }
        let (oij, oji) = (self.offset(i, j) + k, self.offset(j, i) + k);
        self.c[oij] = self.c[oij].clone() + v.clone();
        self.c[oji] = self.c[oji].clone() - v;
        Ok(())
    }

    /// Sets a single coefficient without touching its antisymmetric partner.
    /// Only useful for building deliberately broken inputs.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, v: T) {
        let o = self.offset(i, j) + k;
        self.c[o] = v;
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..=i).all(|j| {
                (0..self.dim).all(|k| *self.coeff(i, j, k) == -self.coeff(j, i, k).clone())
            })
        })
    }

    pub fn bracket(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "bracket of vectors of length {} and {} in dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        let mut out = vec![T::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi.clone() * yj.clone();
                for (k, c) in self.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn unit(&self, i: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.dim];
        v[i] = T::one();
        v
    }

    /// Exhaustive Jacobi check over basis triples; also fails on a broken
    /// antisymmetry, reported with the witness `(i, j, j)`.
    pub fn check_jacobi(&self) -> JacobiReport {
        for i in 0..self.dim {
            for j in 0..=i {
                if (0..self.dim).any(|k| *self.coeff(i, j, k) != -self.coeff(j, i, k).clone()) {
                    return JacobiReport {
                        holds: false,
                        witness: Some((j, i, i)),
                    };
                }
            }
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let (ei, ej, ek) = (self.unit(i), self.unit(j), self.unit(k));
                    let cyc = |a: &[T], b: &[T], c: &[T]| {
                        self.bracket(&self.bracket(a, b).expect("dims"), c).expect("dims")
                    };
                    let s1 = cyc(&ei, &ej, &ek);
                    let s2 = cyc(&ej, &ek, &ei);
                    let s3 = cyc(&ek, &ei, &ej);
                    let zero = (0..self.dim)
                        .all(|m| (s1[m].clone() + s2[m].clone() + s3[m].clone()).is_zero());
                    if !zero {
                        return JacobiReport {
                            holds: false,
                            witness: Some((i, j, k)),
                        };
                    }
                }
            }
        }
        JacobiReport {
            holds: true,
            witness: None,
        }
    }

    /// Matrix of `ad(e_i)`: column `j` holds `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> Matrix<T> {
        Matrix::from_fn(self.dim, self.dim, |k, j| self.coeff(i, j, k).clone())
    }

    /// Matrix of `y ↦ [x, y]`.
    pub fn ad_matrix(&self, x: &[T]) -> Result<Matrix<T>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in dimension {}",
                x.len(),
                self.dim
            )));
        }
        let mut m: Matrix<T> = Matrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let c = self.coeff(i, j, k);
                    if !c.is_zero() {
                        m[(k, j)] = m[(k, j)].clone() + xi.clone() * c.clone();
                    }
                }
            }
        }
        Ok(m)
    }

    /// `β(e_i, e_j) = tr(ad e_i ∘ ad e_j)`.
    pub fn killing_form(&self) -> Matrix<T> {
        let ads: Vec<Matrix<T>> = (0..self.dim).map(|i| self.ad_basis(i)).collect();
        let mut beta = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..=i {
                // tr(AB) = Σ_{k,l} A_kl B_lk
                let mut t = T::zero();
                for k in 0..self.dim {
                    for l in 0..self.dim {
                        let (a, b) = (&ads[i][(k, l)], &ads[j][(l, k)]);
                        if !a.is_zero() && !b.is_zero() {
                            t = t + a.clone() * b.clone();
                        }
                    }
                }
                beta[(i, j)] = t.clone();
                beta[(j, i)] = t;
            }
        }
        beta
    }

    pub fn ad_traces(&self) -> Vec<T> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(T::zero(), |acc, j| acc + self.coeff(i, j, j).clone()))
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.ad_traces().iter().all(|t| t.is_zero())
    }

    /// Subalgebra on a subset of basis vectors, re-indexed in the given
    /// order. Fails when the subset is not closed under the bracket.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            self.check_index(i)?;
        }
        let pos = |k: usize| indices.iter().position(|&x| x == k);
        let mut sub = Self::new(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                for (k, v) in self.basis_bracket(i, j).iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let c = pos(k).ok_or_else(|| {
                        Error::InvalidParameter(format!("[e_{i}, e_{j}] leaves the subset at e_{k}"))
                    })?;
                    sub.set_raw(a, b, c, v.clone());
                }
            }
        }
        Ok(sub)
    }

    /// Nonzero `c[i][j][k]` with `i < j`.
    pub fn triples(&self) -> Vec<(usize, usize, usize, T)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for (k, v) in self.basis_bracket(i, j).iter().enumerate() {
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> StructureConstants<U> {
        StructureConstants {
            dim: self.dim,
            c: self.c.iter().map(f).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    dim: usize,
    triples: Vec<(usize, usize, usize, Rational)>,
}

impl StructureConstants<Rational> {
    /// `{"dim": d, "triples": [[i, j, k, "p/q"], …]}` with `i < j` only.
    pub fn to_json(&self) -> Result<String> {
        let doc = StructureJson {
            dim: self.dim,
            triples: self.triples(),
        };
        serde_json::to_string(&doc).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: StructureJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut l = Self::new(doc.dim);
        for (i, j, k, v) in doc.triples {
            if i >= j {
                return Err(Error::Parse(format!("triple ({i},{j},{k}) must have i < j")));
            }
            l.add_coeff(i, j, k, v)?;
        }
        Ok(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    type Q = Rational;

    #[test]
    fn heisenberg_basics() {
        let h = StructureConstants::<Q>::heisenberg(1);
        assert_eq!(h.bracket(&h.unit(0), &h.unit(1)).unwrap(), h.unit(2));
        assert!(h.bracket(&h.unit(0), &h.unit(0)).unwrap().iter().all(|x| *x == 0));
        assert!(h.check_jacobi().holds);
        assert!(h.killing_form().is_zero());
        assert!(h.is_unimodular());
        assert!(h.ad_matrix(&h.unit(2)).unwrap().is_zero());
        assert!(h.bracket(&h.unit(0), &[q(1, 1)]).is_err());
    }

    #[test]
    fn jacobi_failure_has_witness() {
        // [e0,e1] = e1, [e0,e2] = e2, [e1,e2] = e0 violates Jacobi
        let mut l = StructureConstants::<Q>::new(3);
        l.set_bracket(0, 1, &[(1, q(1, 1))]).unwrap();
        l.set_bracket(0, 2, &[(2, q(1, 1))]).unwrap();
        l.set_bracket(1, 2, &[(0, q(1, 1))]).unwrap();
        let r = l.check_jacobi();
        assert!(!r.holds);
        assert_eq!(r.witness, Some((0, 1, 2)));
    }

    #[test]
    fn broken_antisymmetry_is_caught() {
        let mut h = StructureConstants::<Q>::heisenberg(1);
        h.set_raw(1, 0, 2, q(0, 1));
        assert!(!h.is_antisymmetric());
        assert!(!h.check_jacobi().holds);
    }

    #[test]
    fn json_roundtrip() {
        let mut l = StructureConstants::<Q>::heisenberg(2);
        l.add_coeff(0, 3, 4, q(-1, 2)).unwrap();
        let s = l.to_json().unwrap();
        assert!(s.contains(r#"[0,3,4,"-1/2"]"#));
        assert_eq!(StructureConstants::from_json(&s).unwrap(), l);
        assert!(StructureConstants::from_json(r#"{"dim":2,"triples":[[1,0,0,"1"]]}"#).is_err());
    }

    #[test]
    fn restriction_requires_closure() {
        let h = StructureConstants::<Q>::heisenberg(1);
        assert!(h.restrict(&[0, 1]).is_err());
        let sub = h.restrict(&[1, 2]).unwrap();
        assert_eq!(sub.triples().len(), 0);
    }
}
