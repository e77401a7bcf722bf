//! Incremental sparse row echelon form over an exact (or float) field.

use std::collections::BTreeMap;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Sparse row: column index to nonzero coefficient.
pub type SparseRow<T> = BTreeMap<usize, T>;

/// Rows are inserted one at a time and reduced against the current pivots.
/// Each stored row has a unit pivot and contains no pivot column of an
/// earlier row; [`Echelon::reduced_rows`] finishes the back substitution.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    cols: usize,
    /// Pivots are only chosen among columns `< pivot_limit`; used to keep
    /// right-hand-side columns out of the pivot set when solving.
    pivot_limit: usize,
    rows: Vec<SparseRow<T>>,
    pivots: Vec<usize>,
    pivot_of_col: BTreeMap<usize, usize>,
    inconsistent: bool,
}

impl<T: Field> Echelon<T> {
    pub fn new(cols: usize) -> Self {
        Self::with_pivot_limit(cols, cols)
    }

    pub fn with_pivot_limit(cols: usize, pivot_limit: usize) -> Self {
        Self {
            cols,
            pivot_limit,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: BTreeMap::new(),
            inconsistent: false,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Whether some inserted row reduced to a nonzero row supported only on
    /// columns at or beyond the pivot limit.
    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    fn reduce(&self, mut row: SparseRow<T>) -> SparseRow<T> {
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.pivot_of_col.contains_key(c))
                .map(|(&c, v)| (c, v.clone()));
            let Some((col, factor)) = hit else {
                return row;
            };
            let pivot_row = &self.rows[self.pivot_of_col[&col]];
            axpy(&mut row, &factor, pivot_row);
        }
    }

    /// Inserts a row; returns `true` when it raised the rank.
    pub fn insert(&mut self, row: SparseRow<T>) -> bool {
        let row: SparseRow<T> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut row = self.reduce(row);
        let pivot = row
            .iter()
            .filter(|(&c, _)| c < self.pivot_limit)
            .min_by(|a, b| {
                a.1.pivot_cost()
                    .partial_cmp(&b.1.pivot_cost())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(&c, _)| c);
        let Some(pivot) = pivot else {
            if !row.is_empty() {
                self.inconsistent = true;
            }
            return false;
        };
        let inv = row[&pivot].recip();
        for v in row.values_mut() {
            *v = v.clone() * inv.clone();
        }
        self.pivot_of_col.insert(pivot, self.rows.len());
        self.pivots.push(pivot);
        self.rows.push(row);
        true
    }

    pub fn insert_dense(&mut self, row: &[T]) -> bool {
        self.insert(
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect(),
        )
    }

    /// Whether `row` lies in the row space.
    pub fn contains(&self, row: &[T]) -> bool {
        let sparse: SparseRow<T> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        self.reduce(sparse).is_empty()
    }

    /// Fully reduced rows, paired with their pivot column, in insertion order.
    pub fn reduced_rows(&self) -> Vec<(usize, SparseRow<T>)> {
        let mut rows = self.rows.clone();
        for i in (0..rows.len()).rev() {
            loop {
                let hit = rows[i]
                    .iter()
                    .find(|(&c, _)| c != self.pivots[i] && self.pivot_of_col.contains_key(&c))
                    .map(|(&c, v)| (c, v.clone()));
                let Some((col, factor)) = hit else { break };
                let j = self.pivot_of_col[&col];
                let pivot_row = rows[j].clone();
                axpy(&mut rows[i], &factor, &pivot_row);
            }
        }
        self.pivots.iter().copied().zip(rows).collect()
    }

    /// Kernel basis of the inserted rows (all columns treated as unknowns).
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let reduced = self.reduced_rows();
        let free = (0..self.cols).filter(|c| !self.pivot_of_col.contains_key(c));
        free.map(|f| {
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (p, row) in &reduced {
                if let Some(x) = row.get(&f) {
                    v[*p] = -x.clone();
                }
            }
            v
        })
        .collect()
    }
}

/// `row -= factor * other`, dropping cancelled entries.
fn axpy<T: Field>(row: &mut SparseRow<T>, factor: &T, other: &SparseRow<T>) {
    for (&c, v) in other {
        let delta = factor.clone() * v.clone();
        let entry = row.remove(&c).unwrap_or_else(T::zero) - delta;
        if !entry.is_zero() {
            row.insert(c, entry);
        }
    }
}

fn echelon_of<T: Field>(a: &Matrix<T>) -> Echelon<T> {
    let mut e = Echelon::new(a.cols());
    for i in 0..a.rows() {
        e.insert_dense(a.row(i));
    }
    e
}

pub fn rank<T: Field>(a: &Matrix<T>) -> usize {
    echelon_of(a).rank()
}

/// Basis of the kernel of `a`, as vectors of length `a.cols()`.
pub fn nullspace<T: Field>(a: &Matrix<T>) -> Vec<Vec<T>> {
    echelon_of(a).kernel()
}

/// Some `x` with `a·x = b`, or `None` when the system is inconsistent.
/// Free unknowns are set to zero.
pub fn solve_exact<T: Field>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Option<Matrix<T>>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "system with {} rows and right-hand side with {}",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.cols();
    let mut e = Echelon::with_pivot_limit(n + b.cols(), n);
    for i in 0..a.rows() {
        let mut row: SparseRow<T> = SparseRow::new();
        for (j, v) in a.row(i).iter().chain(b.row(i)).enumerate() {
            if !v.is_zero() {
                row.insert(j, v.clone());
            }
        }
        e.insert(row);
    }
    if e.is_inconsistent() {
        return Ok(None);
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (p, row) in e.reduced_rows() {
        for (&c, v) in row.range(n..) {
            x[(p, c - n)] = v.clone();
        }
    }
    Ok(Some(x))
}

pub fn inverse<T: Field>(a: &Matrix<T>) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    if rank(a) < a.rows() {
        return Err(Error::Singular);
    }
    solve_exact(a, &Matrix::identity(a.rows()))?.ok_or(Error::Singular)
}

/// Echelon basis of the span of the given vectors.
pub fn span_basis<T: Field>(vectors: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    let mut e = Echelon::new(dim);
    for v in vectors {
        e.insert_dense(v);
    }
    e.reduced_rows()
        .into_iter()
        .map(|(_, row)| {
            let mut v = vec![T::zero(); dim];
            for (c, x) in row {
                v[c] = x;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_system() {
        let b = qm(&[&[1], &[2], &[3]]);
        assert_eq!(solve_exact(&Matrix::identity(3), &b).unwrap(), Some(b));
    }

    #[test]
    fn inconsistent_system() {
        let a = qm(&[&[1, 1], &[2, 2]]);
        let b = qm(&[&[1], &[3]]);
        assert_eq!(solve_exact(&a, &b).unwrap(), None);
        assert!(solve_exact(&a, &Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn underdetermined_system_has_a_solution() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 7]]);
        let b = qm(&[&[1], &[3]]);
        let x = solve_exact(&a, &b).unwrap().unwrap();
        assert_eq!(a.try_mul(&x).unwrap(), b);
    }

    #[test]
    fn kernels() {
        assert_eq!(nullspace(&Matrix::<Rational>::zeros(2, 2)).len(), 2);
        assert!(nullspace(&qm(&[&[2, 1], &[1, 1]])).is_empty());
        let a = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = nullspace(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.apply(v).unwrap().iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.try_mul(&inv).unwrap(), Matrix::identity(3));
        assert_eq!(inverse(&qm(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn span_of_dependent_vectors() {
        let vs = vec![vec![q(1, 1), q(1, 1), q(0, 1)], vec![q(2, 1), q(2, 1), q(0, 1)]];
        assert_eq!(span_basis(&vs, 3).len(), 1);
    }
}
