use serde::Serialize;

use super::{StructureConstants, Subspace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::OrderedField;

/// Declared decomposition `𝔤 = 𝔞 ⊕ 𝔫` by basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub a_indices: Vec<usize>,
    pub n_indices: Vec<usize>,
}

impl Splitting {
    pub fn new(a_indices: Vec<usize>, n_indices: Vec<usize>) -> Self {
        Self {
            a_indices,
            n_indices,
        }
    }

    /// Disjoint index sets covering `0..dim` exactly once.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let mut seen = vec![false; dim];
        for &i in self.a_indices.iter().chain(&self.n_indices) {
            if i >= dim {
                return Err(Error::MalformedSplitting(format!("index {i} >= dimension {dim}")));
            }
            if seen[i] {
                return Err(Error::MalformedSplitting(format!("index {i} listed twice")));
            }
            seen[i] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedSplitting(format!("index {missing} not covered")));
        }
        Ok(())
    }
}

/// Individual checks on a declared splitting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub n_is_ideal: bool,
    pub n_is_nilpotent: bool,
    pub n_contains_derived: bool,
    pub a_is_abelian: bool,
    pub orthogonal: bool,
}

impl SplittingReport {
    pub fn all_hold(&self) -> bool {
        self.n_is_ideal
            && self.n_is_nilpotent
            && self.n_contains_derived
            && self.a_is_abelian
            && self.orthogonal
    }
}

impl<T: OrderedField> StructureConstants<T> {
    pub fn verify_splitting(&self, s: &Splitting, gram: &Matrix<T>) -> Result<SplittingReport> {
        let d = self.dim();
        s.validate(d)?;
        if gram.rows() != d || gram.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} Gram matrix in dimension {d}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !gram.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let n = Subspace::coordinate(&s.n_indices, d);
        let a_abelian = s.a_indices.iter().all(|&i| {
            s.a_indices
                .iter()
                .all(|&j| self.basis_bracket(i, j).iter().all(|v| v.is_zero()))
        });
        let orthogonal = s
            .a_indices
            .iter()
            .all(|&i| s.n_indices.iter().all(|&j| gram[(i, j)].is_zero()));
        Ok(SplittingReport {
            n_is_ideal: self.is_ideal(&n),
            n_is_nilpotent: self.is_nilpotent_subalgebra(&n),
            n_contains_derived: n.contains_subspace(&self.derived_algebra()),
            a_is_abelian: a_abelian,
            orthogonal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn heis3_with_empty_a() {
        let h = StructureConstants::<Rational>::heisenberg(1);
        let s = Splitting::new(vec![], vec![0, 1, 2]);
        assert!(h.verify_splitting(&s, &Matrix::identity(3)).unwrap().all_hold());
    }

    #[test]
    fn malformed_index_sets() {
        let h = StructureConstants::<Rational>::heisenberg(1);
        let g = Matrix::identity(3);
        for s in [
            Splitting::new(vec![0], vec![0, 1, 2]),
            Splitting::new(vec![], vec![0, 1]),
            Splitting::new(vec![3], vec![0, 1, 2]),
        ] {
            assert!(matches!(
                h.verify_splitting(&s, &g),
                Err(Error::MalformedSplitting(_))
            ));
        }
    }

    #[test]
    fn rejects_indefinite_gram() {
        let h = StructureConstants::<Rational>::heisenberg(1);
        let s = Splitting::new(vec![], vec![0, 1, 2]);
        let g = Matrix::diag(&[q(1, 1), q(-1, 1), q(1, 1)]);
        assert_eq!(h.verify_splitting(&s, &g), Err(Error::NotPositiveDefinite));
    }
}
