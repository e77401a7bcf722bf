//! Left-invariant metrics on Lie algebras: Levi-Civita connection, Ricci
//! endomorphism, the Lauret decomposition and algebraic soliton checks.

mod soliton;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{Splitting, StructureConstants};
use crate::linalg::{inverse, solve_exact, Matrix};
use crate::scalar::OrderedField;

pub use soliton::{Checklist, LambdaSource, SolitonKind, SolitonMethod, SolitonVerdict};

/// Structure constants with a positive definite Gram matrix.
#[derive(Clone, Debug)]
pub struct MetricLieAlgebra<T> {
    lie: StructureConstants<T>,
    gram: Matrix<T>,
    gram_inv: Matrix<T>,
}

/// `∇_{e_i} e_j` for all basis pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<T> {
    dim: usize,
    gamma: Vec<Vec<T>>,
}

impl<T> Connection<T> {
    /// Coordinates of `∇_{e_i} e_j`.
    pub fn nabla(&self, i: usize, j: usize) -> &[T] {
        &self.gamma[i * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// `ric = R − ½B − ad(H)ˢ` with every term as an endomorphism.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LauretTerms<T> {
    pub r: Matrix<T>,
    pub b_op: Matrix<T>,
    pub ad_h_sym: Matrix<T>,
    pub mean_curvature: Vec<T>,
}

impl<T: OrderedField> MetricLieAlgebra<T> {
    pub fn new(lie: StructureConstants<T>, gram: Matrix<T>) -> Result<Self> {
        let d = lie.dim();
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
        let gram_inv = inverse(&gram)?;
        Ok(Self {
            lie,
            gram,
            gram_inv,
        })
    }

    pub fn lie(&self) -> &StructureConstants<T> {
        &self.lie
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix<T> {
        &self.gram_inv
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn inner(&self, x: &[T], y: &[T]) -> T {
        let gy = self.gram.apply(y).expect("dimension");
        x.iter()
            .zip(&gy)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Same brackets, Gram matrix multiplied by `t`.
    pub fn rescaled(&self, t: &T) -> Result<Self> {
        Self::new(self.lie.clone(), self.gram.scale(t))
    }

    /// Koszul formula for left-invariant fields:
    /// `2⟨∇ₓy, z⟩ = ⟨[x,y],z⟩ − ⟨[y,z],x⟩ + ⟨[z,x],y⟩`.
    pub fn connection_coeffs(&self) -> Connection<T> {
        let d = self.dim();
        // lowered[i*d + j][z] = ⟨[e_i, e_j], e_z⟩
        let lowered: Vec<Vec<T>> = (0..d * d)
            .map(|ij| {
                let (i, j) = (ij / d, ij % d);
                self.gram.apply(self.lie.basis_bracket(i, j)).expect("dimension")
            })
            .collect();
        let half = T::from_ratio(1, 2);
        let mut gamma = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let rhs: Vec<T> = (0..d)
                    .map(|z| {
                        (lowered[i * d + j][z].clone() - lowered[j * d + z][i].clone()
                            + lowered[z * d + i][j].clone())
                            * half.clone()
                    })
                    .collect();
                gamma.push(self.gram_inv.apply(&rhs).expect("dimension"));
            }
        }
        Connection { dim: d, gamma }
    }

    /// Metricity and torsion-freeness on all basis pairs and triples.
    pub fn verify_connection(&self, conn: &Connection<T>) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let torsion_ok = (0..d).all(|k| {
                    conn.nabla(i, j)[k].clone() - conn.nabla(j, i)[k].clone()
                        == self.lie.coeff(i, j, k).clone()
                });
                if !torsion_ok {
                    return false;
                }
                for k in 0..d {
                    let a = self.inner(conn.nabla(i, j), &self.lie.unit(k));
                    let b = self.inner(&self.lie.unit(j), conn.nabla(i, k));
                    if !(a + b).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Ricci bilinear form `Ric(y, z) = Σ_x (R(e_x, e_y) e_z)_x` with
    /// `R(x, y) = [∇ₓ, ∇ᵧ] − ∇_{[x,y]}`.
    pub fn ricci_form(&self, conn: &Connection<T>) -> Matrix<T> {
        let d = self.dim();
        let g = |i: usize, j: usize| conn.nabla(i, j);
        // t_m = Σ_x (∇_{e_x} e_m)_x
        let t: Vec<T> = (0..d)
            .map(|m| (0..d).fold(T::zero(), |acc, x| acc + g(x, m)[x].clone()))
            .collect();
        let mut ric = Matrix::zeros(d, d);
        for y in 0..d {
            for z in 0..d {
                let mut s = T::zero();
                for (m, gm) in g(y, z).iter().enumerate() {
                    if !gm.is_zero() && !t[m].is_zero() {
                        s = s + gm.clone() * t[m].clone();
                    }
                }
                for x in 0..d {
                    for (m, gxz) in g(x, z).iter().enumerate() {
                        let gym = &g(y, m)[x];
                        if !gxz.is_zero() && !gym.is_zero() {
                            s = s - gxz.clone() * gym.clone();
                        }
                    }
                    for (k, c) in self.lie.basis_bracket(x, y).iter().enumerate() {
                        let gkz = &g(k, z)[x];
                        if !c.is_zero() && !gkz.is_zero() {
                            s = s - c.clone() * gkz.clone();
                        }
                    }
                }
                ric[(y, z)] = s;
            }
        }
        ric
    }

    /// Ricci endomorphism `ric = G⁻¹ Ric`.
    pub fn ricci_endomorphism_koszul(&self) -> Matrix<T> {
        let form = self.ricci_form(&self.connection_coeffs());
        self.gram_inv.try_mul(&form).expect("square")
    }

    /// `G⁻¹ Aᵀ G`.
    pub fn adjoint_operator(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        self.gram_inv.try_mul(&a.transpose())?.try_mul(&self.gram)
    }

    /// Unique `H ∈ 𝔞` with `G(H, A) = tr(ad A)` for the basis of `𝔞`.
    pub fn mean_curvature_vector(&self, s: &Splitting) -> Result<Vec<T>> {
        s.validate(self.dim())?;
        let mut h = vec![T::zero(); self.dim()];
        if s.a_indices.is_empty() {
            return Ok(h);
        }
        let traces = self.lie.ad_traces();
        let g_aa = self.gram.submatrix(&s.a_indices, &s.a_indices);
        let rhs = Matrix::column(&s.a_indices.iter().map(|&i| traces[i].clone()).collect::<Vec<_>>());
        let coeffs = solve_exact(&g_aa, &rhs)?.ok_or(Error::Singular)?;
        for (pos, &i) in s.a_indices.iter().enumerate() {
            h[i] = coeffs[(pos, 0)].clone();
        }
        Ok(h)
    }

    /// `B_op = G⁻¹β` for the Killing form `β`.
    pub fn killing_operator(&self) -> Matrix<T> {
        self.gram_inv.try_mul(&self.lie.killing_form()).expect("square")
    }

    pub fn symmetric_part_of(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        let half = T::from_ratio(1, 2);
        Ok(a.try_add(&self.adjoint_operator(a)?)?.scale(&half))
    }

    /// Lauret terms, with `R` recovered as `ric + ½B + ad(H)ˢ`.
    pub fn lauret_terms(&self, s: &Splitting, ric: &Matrix<T>) -> Result<LauretTerms<T>> {
        let h = self.mean_curvature_vector(s)?;
        let b_op = self.killing_operator();
        let ad_h_sym = self.symmetric_part_of(&self.lie.ad_matrix(&h)?)?;
        let half = T::from_ratio(1, 2);
        let r = ric.try_add(&b_op.scale(&half))?.try_add(&ad_h_sym)?;
        Ok(LauretTerms {
            r,
            b_op,
            ad_h_sym,
            mean_curvature: h,
        })
    }

    /// `R` from its defining orthonormal-basis sums,
    /// `g(RX,Y) = −½Σ g([X,Lᵢ],Lⱼ)g([Y,Lᵢ],Lⱼ) + ¼Σ g([Lᵢ,Lⱼ],X)g([Lᵢ,Lⱼ],Y)`.
    /// The sums are basis-independent, so they are contracted with `G⁻¹`
    /// and stay rational for any Gram matrix.
    pub fn r_from_quadratic_sums(&self) -> Matrix<T> {
        let d = self.dim();
        let ads: Vec<Matrix<T>> = (0..d).map(|i| self.lie.ad_basis(i)).collect();
        let ad_stars: Vec<Matrix<T>> = ads
            .iter()
            .map(|a| self.adjoint_operator(a).expect("square"))
            .collect();
        // w[x] = (⟨[e_a, e_b], e_x⟩)_{a,b}
        let lowered: Vec<Vec<T>> = (0..d * d)
            .map(|ab| self.gram.apply(self.lie.basis_bracket(ab / d, ab % d)).expect("dimension"))
            .collect();
        let w: Vec<Matrix<T>> = (0..d)
            .map(|x| Matrix::from_fn(d, d, |a, b| lowered[a * d + b][x].clone()))
            .collect();
        let v: Vec<Matrix<T>> = w
            .iter()
            .map(|wx| {
                self.gram_inv
                    .try_mul(wx)
                    .and_then(|m| m.try_mul(&self.gram_inv))
                    .expect("square")
            })
            .collect();
        let half = T::from_ratio(1, 2);
        let quarter = T::from_ratio(1, 4);
        let trace_of_product = |a: &Matrix<T>, b: &Matrix<T>, transpose_b: bool| {
            let mut t = T::zero();
            for i in 0..d {
                for k in 0..d {
                    let bik = if transpose_b { &b[(i, k)] } else { &b[(k, i)] };
                    let aik = &a[(i, k)];
                    if !aik.is_zero() && !bik.is_zero() {
                        t = t + aik.clone() * bik.clone();
                    }
                }
            }
            t
        };
        let form = Matrix::from_fn(d, d, |x, y| {
            let first = trace_of_product(&ad_stars[y], &ads[x], false);
            let second = trace_of_product(&v[x], &w[y], true);
            second * quarter.clone() - first * half.clone()
        });
        self.gram_inv.try_mul(&form).expect("square")
    }
}
