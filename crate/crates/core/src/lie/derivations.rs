use super::StructureConstants;
use crate::linalg::{Echelon, Matrix, SparseRow};
use crate::scalar::Field;

impl<T: Field> StructureConstants<T> {
    /// Basis of `Der(𝔤)`. The unknown `D_{ab}` (with `D e_b = Σ_a D_{ab} e_a`)
    /// sits at column `a·d + b`; one Leibniz equation per pair `i < j` and
    /// target coordinate `k`, reduced incrementally in sparse form.
    pub fn derivation_space(&self) -> Vec<Matrix<T>> {
        let d = self.dim();
        let mut e = Echelon::new(d * d);
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let row = self.leibniz_row(i, j, k);
                    if !row.is_empty() {
                        e.insert(row);
                    }
                }
            }
        }
        e.kernel()
            .into_iter()
            .map(|v| Matrix::from_vec(d, d, v).expect("d*d entries"))
            .collect()
    }

    /// Coefficients of `(D[e_i,e_j] − [De_i,e_j] − [e_i,De_j])_k`.
    fn leibniz_row(&self, i: usize, j: usize, k: usize) -> SparseRow<T> {
        let d = self.dim();
        let mut row = SparseRow::new();
        let mut add = |col: usize, v: T| {
            let entry = row.remove(&col).unwrap_or_else(T::zero) + v;
            if !entry.is_zero() {
                row.insert(col, entry);
            }
        };
        for m in 0..d {
            let cij = self.coeff(i, j, m);
            if !cij.is_zero() {
                add(k * d + m, cij.clone());
            }
            let cmj = self.coeff(m, j, k);
            if !cmj.is_zero() {
                add(m * d + i, -cmj.clone());
            }
            let cim = self.coeff(i, m, k);
            if !cim.is_zero() {
                add(m * d + j, -cim.clone());
            }
        }
        row
    }

    /// Leibniz identity on all basis pairs.
    pub fn is_derivation(&self, dmat: &Matrix<T>) -> bool {
        let d = self.dim();
        if dmat.rows() != d || dmat.cols() != d {
            return false;
        }
        for i in 0..d {
            for j in i + 1..d {
                let lhs = dmat.apply(self.basis_bracket(i, j)).expect("square");
                let di = dmat.col(i);
                let dj = dmat.col(j);
                let r1 = self.bracket(&di, &self.unit(j)).expect("dims");
                let r2 = self.bracket(&self.unit(i), &dj).expect("dims");
                if (0..d).any(|k| lhs[k] != r1[k].clone() + r2[k].clone()) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    type Q = Rational;

    #[test]
    fn heis3_has_six_derivations() {
        let h = StructureConstants::<Q>::heisenberg(1);
        let der = h.derivation_space();
        assert_eq!(der.len(), 6);
        assert!(der.iter().all(|d| h.is_derivation(d)));
    }

    #[test]
    fn abelian_derivations_are_all_endomorphisms() {
        assert_eq!(StructureConstants::<Q>::abelian(3).derivation_space().len(), 9);
    }

    #[test]
    fn grading_derivation_of_heis() {
        let h = StructureConstants::<Q>::heisenberg(2);
        let delta = Matrix::diag(&[q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(2, 1)]);
        assert!(h.is_derivation(&delta));
        assert!(!h.is_derivation(&Matrix::identity(5)));
    }
}
