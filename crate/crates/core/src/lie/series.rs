use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::StructureConstants;
use crate::error::{Error, Result};
use crate::linalg::{char_poly, span_basis, Echelon};
use crate::scalar::{Field, OrderedField};

/// Linear subspace held as an echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    dim: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Field> Subspace<T> {
    pub fn span(vectors: &[Vec<T>], ambient: usize) -> Self {
        Self {
            dim: ambient,
            basis: span_basis(vectors, ambient),
        }
    }

    pub fn coordinate(indices: &[usize], ambient: usize) -> Self {
        let vs: Vec<Vec<T>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![T::zero(); ambient];
                v[i] = T::one();
                v
            })
            .collect();
        Self::span(&vs, ambient)
    }

    pub fn whole(ambient: usize) -> Self {
        Self::coordinate(&(0..ambient).collect::<Vec<_>>(), ambient)
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let mut e = Echelon::new(self.dim);
        for b in &self.basis {
            e.insert_dense(b);
        }
        e.contains(v)
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        let mut e = Echelon::new(self.dim);
        for b in &self.basis {
            e.insert_dense(b);
        }
        other.basis.iter().all(|v| e.contains(v))
    }
}

/// Result of the complete-solvability test: exact on basis adjoints,
/// sampled on random rational combinations beyond that.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompleteSolvability {
    pub basis_real_rooted: bool,
    pub samples: usize,
    pub samples_real_rooted: bool,
    /// First basis index whose adjoint has non-real eigenvalues.
    pub failing_basis: Option<usize>,
}

impl CompleteSolvability {
    pub fn holds(&self) -> bool {
        self.basis_real_rooted && self.samples_real_rooted
    }
}

impl<T: Field> StructureConstants<T> {
    /// `[A, B]` for subspaces.
    pub fn bracket_subspaces(&self, a: &Subspace<T>, b: &Subspace<T>) -> Subspace<T> {
        let mut out = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                let z = self.bracket(x, y).expect("ambient dimension matches");
                if z.iter().any(|v| !v.is_zero()) {
                    out.push(z);
                }
            }
        }
        Subspace::span(&out, self.dim())
    }

    /// `[𝔤, 𝔤]`.
    pub fn derived_algebra(&self) -> Subspace<T> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let b = self.basis_bracket(i, j);
                if b.iter().any(|v| !v.is_zero()) {
                    out.push(b.to_vec());
                }
            }
        }
        Subspace::span(&out, self.dim())
    }

    /// Whether `[𝔤, s] ⊆ s`.
    pub fn is_ideal(&self, s: &Subspace<T>) -> bool {
        s.contains_subspace(&self.bracket_subspaces(&Subspace::whole(self.dim()), s))
    }

    pub fn is_subalgebra(&self, s: &Subspace<T>) -> bool {
        s.contains_subspace(&self.bracket_subspaces(s, s))
    }

    /// Whether `s`, taken as a subalgebra, is nilpotent: its lower central
    /// series `s, [s,s], [s,[s,s]], …` reaches zero.
    pub fn is_nilpotent_subalgebra(&self, s: &Subspace<T>) -> bool {
        let mut cur = s.clone();
        loop {
            if cur.is_zero() {
                return true;
            }
            let next = self.bracket_subspaces(s, &cur);
            if next.dimension() >= cur.dimension() {
                return false;
            }
            cur = next;
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_nilpotent_subalgebra(&Subspace::whole(self.dim()))
    }

    /// Whether the derived series terminates at zero.
    pub fn is_solvable(&self) -> bool {
        let mut cur = Subspace::whole(self.dim());
        loop {
            if cur.is_zero() {
                return true;
            }
            let next = self.bracket_subspaces(&cur, &cur);
            if next.dimension() >= cur.dimension() {
                return false;
            }
            cur = next;
        }
    }
}

impl<T: OrderedField> StructureConstants<T> {
    /// Real-rootedness of `char_poly(ad X)` for every basis vector (exact)
    /// and for `samples` random integer combinations drawn from a seeded
    /// generator. Sound on the basis; sampled beyond it.
    pub fn is_completely_solvable(&self, samples: usize, seed: u64) -> Result<CompleteSolvability> {
        if !self.is_solvable() {
            return Err(Error::NotSolvable);
        }
        let mut failing_basis = None;
        for i in 0..self.dim() {
            if !char_poly(&self.ad_basis(i))?.real_rooted()? {
                failing_basis = Some(i);
                break;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples_ok = true;
        for _ in 0..samples {
            let x: Vec<T> = (0..self.dim())
                .map(|_| T::from_i64(rng.random_range(-5..=5)))
                .collect();
            if !char_poly(&self.ad_matrix(&x)?)?.real_rooted()? {
                samples_ok = false;
                break;
            }
        }
        Ok(CompleteSolvability {
            basis_real_rooted: failing_basis.is_none(),
            samples,
            samples_real_rooted: samples_ok,
            failing_basis,
        })
    }
}
