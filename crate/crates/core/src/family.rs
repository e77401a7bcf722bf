//! The family `𝔩 = 𝔟 ⋉ heis(2n+1)` with the metrics `g_ρ^c`: structure
//! constants, Gram matrices, the grading derivation, the embedding into
//! the coordinate frame, and closed-form expected values.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::coordinate_gram_values;
use crate::lie::{Splitting, StructureConstants};
use crate::linalg::{inverse, Matrix};
use crate::metric::{MetricLieAlgebra, SolitonKind, SolitonVerdict};
use crate::scalar::{OrderedField, Surd};

/// `n ≥ 1`, `ρ > 0`, `c ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyParams<T> {
    pub n: usize,
    pub rho: T,
    pub c: T,
}

impl<T: OrderedField> FamilyParams<T> {
    pub fn new(n: usize, rho: T, c: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !rho.is_positive() {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho:?}")));
        }
        if c.is_negative() {
            return Err(Error::InvalidParameter(format!("c must be non-negative, got {c:?}")));
        }
        Ok(Self { n, rho, c })
    }

    pub fn dim(&self) -> usize {
        4 * self.n - 1
    }

    pub fn basis(&self) -> FamilyBasis {
        FamilyBasis::new(self.n)
    }

    /// Surd radicand `(ρ+c)/(ρ+2c)` shared by the shape-operator spectrum.
    pub fn radicand(&self) -> T {
        let (r, c) = (&self.rho, &self.c);
        (r.clone() + c.clone()) / (r.clone() + two::<T>() * c.clone())
    }
}

fn two<T: OrderedField>() -> T {
    T::from_i64(2)
}

fn int<T: OrderedField>(v: i64) -> T {
    T::from_i64(v)
}

/// Index layout of the ordered basis
/// `(B₁ᴿ, B₁ᴵ, …, B_{n−1}ᴿ, B_{n−1}ᴵ, e₀, f₀, …, e_{n−1}, f_{n−1}, Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyBasis {
    n: usize,
}

impl FamilyBasis {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n - 1
    }

    /// `Bₐᴿ`, `a ∈ 1..n`.
    pub fn b_re(&self, a: usize) -> usize {
        debug_assert!(a >= 1 && a < self.n);
        2 * (a - 1)
    }

    pub fn b_im(&self, a: usize) -> usize {
        self.b_re(a) + 1
    }

    /// `e_k`, `k ∈ 0..n`.
    pub fn e(&self, k: usize) -> usize {
        debug_assert!(k < self.n);
        2 * (self.n - 1) + 2 * k
    }

    pub fn f(&self, k: usize) -> usize {
        self.e(k) + 1
    }

    pub fn z(&self) -> usize {
        4 * self.n - 2
    }

    pub fn label(&self, i: usize) -> String {
        let nb = 2 * (self.n - 1);
        if i < nb {
            let a = i / 2 + 1;
            if i.is_multiple_of(2) {
                format!("B{a}R")
            } else {
                format!("B{a}I")
            }
        } else if i < self.z() {
            let k = (i - nb) / 2;
            if (i - nb).is_multiple_of(2) {
                format!("e{k}")
            } else {
                format!("f{k}")
            }
        } else {
            "Z".into()
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }

    /// Indices of `𝔟`.
    pub fn b_part(&self) -> Vec<usize> {
        (0..2 * (self.n - 1)).collect()
    }

    /// Indices of the `e/f` vectors.
    pub fn heis_vectors(&self) -> Vec<usize> {
        (2 * (self.n - 1)..self.z()).collect()
    }
}

/// Index layout of the coordinate frame
/// `(b¹, t¹, …, b^{n−1}, t^{n−1}, φ̃, ζ̃₀, ζ⁰, ζ̃₁, ζ¹, …, ζ̃_{n−1}, ζ^{n−1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordBasis {
    n: usize,
}

impl CoordBasis {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(&self) -> usize {
        4 * self.n - 1
    }

    pub fn b(&self, a: usize) -> usize {
        2 * (a - 1)
    }

    pub fn t(&self, a: usize) -> usize {
        2 * (a - 1) + 1
    }

    pub fn phi(&self) -> usize {
        2 * (self.n - 1)
    }

    /// `ζ̃_k`.
    pub fn zeta_tilde(&self, k: usize) -> usize {
        2 * (self.n - 1) + 1 + 2 * k
    }

    /// `ζ^k`.
    pub fn zeta(&self, k: usize) -> usize {
        self.zeta_tilde(k) + 1
    }

    pub fn label(&self, i: usize) -> String {
        let nb = 2 * (self.n - 1);
        if i < nb {
            let a = i / 2 + 1;
            if i.is_multiple_of(2) {
                format!("b{a}")
            } else {
                format!("t{a}")
            }
        } else if i == nb {
            "phi~".into()
        } else {
            let k = (i - nb - 1) / 2;
            if (i - nb - 1).is_multiple_of(2) {
                format!("zeta~{k}")
            } else {
                format!("zeta{k}")
            }
        }
    }
}

/// `p + i·q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: OrderedField> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn real(re: T) -> Self {
        Self::new(re, T::zero())
    }

    pub fn imag(im: T) -> Self {
        Self::new(T::zero(), im)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}

/// `[X, E_k] = Σ_j α_j E_j` with `E_k = e_k − i f_k`, and optionally the
/// conjugate relation `[X, Ē_k] = Σ_j β_j Ē_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBracket<T> {
    /// Real basis index of `X`.
    pub generator: usize,
    pub k: usize,
    pub image: Vec<(usize, Gaussian<T>)>,
    pub conjugate_image: Option<Vec<(usize, Gaussian<T>)>>,
}

/// Real structure constants `(X, target, k, value)` meaning
/// `[e_X, e_target] ∋ value·e_k`.
pub type RealFragment<T> = Vec<(usize, usize, usize, T)>;

fn collect<T: OrderedField>(terms: &[(usize, Gaussian<T>)]) -> Vec<(usize, Gaussian<T>)> {
    let mut out: Vec<(usize, Gaussian<T>)> = Vec::new();
    for (j, a) in terms {
        match out.iter_mut().find(|(k, _)| k == j) {
            Some((_, acc)) => {
                acc.re = acc.re.clone() + a.re.clone();
                acc.im = acc.im.clone() + a.im.clone();
            }
            None => out.push((*j, a.clone())),
        }
    }
    out.retain(|(_, a)| !(a.re.is_zero() && a.im.is_zero()));
    out.sort_by_key(|(j, _)| *j);
    out
}

/// Splits complex relations into real brackets: with `α = p + iq`,
/// `Re(αE_j) = p e_j + q f_j` and `Im(αE_j) = q e_j − p f_j`; then
/// `[X, e_k] = Re[X, E_k]` and `[X, f_k] = −Im[X, E_k]`.
pub fn real_from_complex_brackets<T: OrderedField>(
    basis: &FamilyBasis,
    relations: &[ComplexBracket<T>],
) -> Result<RealFragment<T>> {
    let mut out = Vec::new();
    for rel in relations {
        let image = collect(&rel.image);
        if let Some(conj) = &rel.conjugate_image {
            let expected: Vec<_> = image.iter().map(|(j, a)| (*j, a.conj())).collect();
            if collect(conj) != expected {
                return Err(Error::InconsistentConjugate(format!(
                    "[{}, conj E_{}]",
                    basis.label(rel.generator),
                    rel.k
                )));
            }
        }
        let (ek, fk) = (basis.e(rel.k), basis.f(rel.k));
        for (j, a) in &image {
            let (ej, fj) = (basis.e(*j), basis.f(*j));
            let (p, q) = (a.re.clone(), a.im.clone());
            for (target, k, v) in [
                (ek, ej, p.clone()),
                (ek, fj, q.clone()),
                (fk, ej, -q),
                (fk, fj, p),
            ] {
                if !v.is_zero() {
                    out.push((rel.generator, target, k, v));
                }
            }
        }
    }
    Ok(out)
}

/// The action of `𝔟` on `ℂⁿ` written over `E_k`; `n ≥ 2`.
pub fn complex_relations<T: OrderedField>(n: usize) -> Vec<ComplexBracket<T>> {
    let basis = FamilyBasis::new(n);
    let half = T::from_ratio(1, 2);
    let delta = |a: usize, b: usize| a == b;
    let mut rels = Vec::new();
    for a in 1..n {
        for k in 0..n {
            let low = delta(k, 0) || delta(k, 1);
            // E₀ − E₁ times a coefficient
            let e0_minus_e1 = |c: Gaussian<T>| vec![(0, c.clone()), (1, Gaussian::new(-c.re, -c.im))];
            let mut re_img: Vec<(usize, Gaussian<T>)> = Vec::new();
            let mut im_img: Vec<(usize, Gaussian<T>)> = Vec::new();
            if a == 1 {
                // [B₁ᴿ, E_k] = −δ_{k0}E₁ − δ_{k1}E₀
                if delta(k, 0) {
                    re_img.push((1, Gaussian::real(-T::one())));
                }
                if delta(k, 1) {
                    re_img.push((0, Gaussian::real(-T::one())));
                }
                // [B₁ᴵ, E_k] = −i(δ_{k0}+δ_{k1})(E₀ − E₁)
                if low {
                    im_img.extend(e0_minus_e1(Gaussian::imag(-T::one())));
                }
            } else {
                // [Bₐᴿ, E_k] = −½(δ_{k0}+δ_{k1})Eₐ − ½δ_{ka}(E₀ − E₁)
                if low {
                    re_img.push((a, Gaussian::real(-half.clone())));
                    im_img.push((a, Gaussian::imag(half.clone())));
                }
                // [Bₐᴵ, E_k] = (i/2)(δ_{k0}+δ_{k1})Eₐ − (i/2)δ_{ka}(E₀ − E₁)
                if delta(k, a) {
                    re_img.extend(e0_minus_e1(Gaussian::real(-half.clone())));
                    im_img.extend(e0_minus_e1(Gaussian::imag(-half.clone())));
                }
            }
            for (generator, image) in [(basis.b_re(a), re_img), (basis.b_im(a), im_img)] {
                let conjugate_image = Some(image.iter().map(|(j, c)| (*j, c.conj())).collect());
                rels.push(ComplexBracket {
                    generator,
                    k,
                    image,
                    conjugate_image,
                });
            }
        }
    }
    rels
}

/// Structure constants of `𝔩` in the family basis; the Jacobi identity is
/// checked before returning.
pub fn build_lie_algebra<T: OrderedField>(n: usize) -> Result<StructureConstants<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let basis = FamilyBasis::new(n);
    let mut l = StructureConstants::new(basis.dim());
    let one = T::one();
    let half = T::from_ratio(1, 2);
    l.set_bracket(basis.e(0), basis.f(0), &[(basis.z(), one.clone())])?;
    for a in 1..n {
        l.set_bracket(basis.e(a), basis.f(a), &[(basis.z(), -one.clone())])?;
    }
    if n > 1 {
        let (b1r, b1i) = (basis.b_re(1), basis.b_im(1));
        l.set_bracket(b1r, b1i, &[(b1i, two())])?;
        for a in 2..n {
            let (br, bi) = (basis.b_re(a), basis.b_im(a));
            l.set_bracket(b1r, br, &[(br, one.clone())])?;
            l.set_bracket(b1r, bi, &[(bi, one.clone())])?;
            l.set_bracket(br, bi, &[(b1i, half.clone())])?;
        }
        for (x, target, k, v) in real_from_complex_brackets(&basis, &complex_relations::<T>(n))? {
            l.add_coeff(x, target, k, v)?;
        }
    }
    let jacobi = l.check_jacobi();
    if !jacobi.holds {
        return Err(Error::Consistency(format!("Jacobi identity fails at {:?}", jacobi.witness)));
    }
    Ok(l)
}

/// Gram matrix of `g_ρ^c` in the family basis.
pub fn build_gram<T: OrderedField>(p: &FamilyParams<T>) -> Result<Matrix<T>> {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let four: T = int(4);
    let r2c = r.clone() + two::<T>() * c.clone();
    let rc = r.clone() + c.clone();
    let d = p.dim();
    let g = if p.n == 1 {
        let ab = r2c.clone() / (four.clone() * r.clone() * r.clone());
        let z = rc.clone() / (four * r2c * r.clone() * r);
        Matrix::diag(&[ab.clone(), ab, z])
    } else {
        let mut diag = Vec::with_capacity(d);
        diag.push(rc.clone() / r.clone());
        diag.push(rc.clone() * rc.clone() * rc.clone() / (r.clone() * r.clone() * r2c.clone()));
        for _ in 0..2 * p.n - 4 {
            diag.push(rc.clone() / (four.clone() * r.clone()));
        }
        let e0f0 = r2c.clone() / (four.clone() * r.clone() * r.clone());
        let quarter_rho = T::one() / (four.clone() * r.clone());
        diag.push(e0f0.clone());
        diag.push(e0f0);
        for _ in 0..2 * p.n - 2 {
            diag.push(quarter_rho.clone());
        }
        diag.push(rc.clone() / (four * r.clone() * r.clone() * r2c.clone()));
        let mut g = Matrix::diag(&diag);
        let off = -(c / (two::<T>() * r.clone() * r)) * (rc / r2c);
        g[(1, d - 1)] = off.clone();
        g[(d - 1, 1)] = off;
        g
    };
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(g)
}

/// The grading `δ`: 0 on `𝔟`, 1 on `ℂⁿ`, 2 on `Z`.
pub fn build_delta<T: OrderedField>(n: usize) -> Matrix<T> {
    let basis = FamilyBasis::new(n);
    let mut diag = vec![T::zero(); basis.dim()];
    for i in basis.heis_vectors() {
        diag[i] = T::one();
    }
    diag[basis.z()] = two();
    Matrix::diag(&diag)
}

pub fn build_metric_lie_algebra<T: OrderedField>(p: &FamilyParams<T>) -> Result<MetricLieAlgebra<T>> {
    MetricLieAlgebra::new(build_lie_algebra(p.n)?, build_gram(p)?)
}

/// `𝔞 = span{B₁ᴿ}` and `𝔫` the rest when `n > 1`; `𝔞 = 0` for `n = 1`.
pub fn splitting(n: usize) -> Splitting {
    let d = 4 * n - 1;
    if n == 1 {
        Splitting::new(vec![], (0..d).collect())
    } else {
        Splitting::new(vec![0], (1..d).collect())
    }
}

/// Pushforward of the family basis to the coordinate frame at `p_ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisEmbedding<T: OrderedField> {
    /// Column `j` holds the coordinate components of basis vector `j`.
    pub p: Matrix<Surd<T>>,
}

impl<T: OrderedField> BasisEmbedding<T> {
    /// `Pᵀ G_coord P`, exact.
    pub fn pullback(&self, coord_gram: &Matrix<T>) -> Result<Matrix<Surd<T>>> {
        let g = coord_gram.map(|x| Surd::rational(x.clone()));
        self.p.transpose().try_mul(&g)?.try_mul(&self.p)
    }

    /// `P⁻¹ M P` for an endomorphism written in coordinates, returned in the
    /// family basis. Fails when the result is not rational.
    pub fn to_family_basis(&self, coord_endo: &Matrix<T>) -> Result<Matrix<T>> {
        let m = coord_endo.map(|x| Surd::rational(x.clone()));
        let conj = inverse(&self.p)?.try_mul(&m)?.try_mul(&self.p)?;
        let entries: Option<Vec<T>> = conj.data().iter().map(|s| s.as_rational().cloned()).collect();
        let entries =
            entries.ok_or_else(|| Error::Consistency("conjugated matrix is not rational".into()))?;
        Matrix::from_vec(conj.rows(), conj.cols(), entries)
    }

    /// Coordinate-frame form of a family-basis endomorphism: `P M P⁻¹`.
    pub fn to_coordinates(&self, family_endo: &Matrix<T>) -> Result<Matrix<Surd<T>>> {
        let m = family_endo.map(|x| Surd::rational(x.clone()));
        self.p.try_mul(&m)?.try_mul(&inverse(&self.p)?)
    }
}

/// Builds the embedding and checks `PᵀG_coord P = G_family` exactly.
pub fn build_embedding<T: OrderedField>(p: &FamilyParams<T>) -> Result<BasisEmbedding<T>> {
    let fb = p.basis();
    let cb = CoordBasis::new(p.n);
    let d = p.dim();
    let two_t: T = two();
    let inv_sqrt2 = Surd::new(T::zero(), T::from_ratio(1, 2), two_t.clone())?;
    let mut m: Matrix<Surd<T>> = Matrix::zeros(d, d);
    let lift = |x: T| Surd::rational(x);
    if p.n > 1 {
        m[(cb.b(1), fb.b_re(1))] = lift(two());
        m[(cb.t(1), fb.b_im(1))] = lift(two());
        m[(cb.phi(), fb.b_im(1))] = lift(-(two_t.clone() * p.c.clone()));
        for a in 2..p.n {
            m[(cb.b(a), fb.b_re(a))] = Surd::one();
            m[(cb.t(a), fb.b_im(a))] = Surd::one();
        }
    }
    m[(cb.zeta_tilde(0), fb.e(0))] = inv_sqrt2.clone();
    m[(cb.zeta(0), fb.f(0))] = inv_sqrt2.clone();
    for j in 1..p.n {
        m[(cb.zeta_tilde(j), fb.e(j))] = inv_sqrt2.clone();
        m[(cb.zeta(j), fb.f(j))] = -inv_sqrt2.clone();
    }
    m[(cb.phi(), fb.z())] = Surd::one();
    let emb = BasisEmbedding { p: m };
    let coord_gram = Matrix::diag(&coordinate_gram_values(p)?);
    let pulled = emb.pullback(&coord_gram)?;
    let family = build_gram(p)?.map(|x| Surd::rational(x.clone()));
    if pulled != family {
        return Err(Error::Consistency("PᵀG_coord P differs from the family Gram matrix".into()));
    }
    Ok(emb)
}

/// Closed-form values predicted for a parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: OrderedField + Serialize + std::fmt::Display"))]
pub struct ClosedForms<T: OrderedField> {
    /// `σ₁ … σ₄`; for `n = 1` only `σ₂, σ₃` are present.
    pub sigma: [Option<Surd<T>>; 4],
    pub multiplicities: [usize; 4],
    /// `r₁ … r₄`; for `n = 1` only `r₂, r₃` are present.
    pub r: [Option<T>; 4],
    pub tr_s: Surd<T>,
    pub h_coeff: T,
    pub lambda_expected: T,
}

/// The four principal Ricci curvature formulas, evaluated regardless of
/// whether their multiplicity is zero.
pub fn principal_ricci_formulas<T: OrderedField>(p: &FamilyParams<T>) -> [T; 4] {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let n = int::<T>(p.n as i64);
    let rc = r.clone() + c.clone();
    let r2c = r.clone() + two::<T>() * c.clone();
    let r2c3 = r2c.clone() * r2c.clone() * r2c.clone();
    let pw = |x: &T, k: u32| x.powi(k);
    let r1 = (-(two::<T>() * (n.clone() + two())) * pw(&r, 2)
        - int::<T>(4) * (n.clone() + two()) * c.clone() * r.clone()
        - int::<T>(6) * pw(&c, 2))
        / (rc.clone() * r2c.clone());
    let r2 = (two::<T>() * n.clone() * pw(&r, 4)
        + (int::<T>(12) * n.clone() - int(8)) * c.clone() * pw(&r, 3)
        + (int::<T>(28) * n.clone() - int(26)) * pw(&c, 2) * pw(&r, 2)
        + int::<T>(32) * (n.clone() - T::one()) * pw(&c, 3) * r.clone()
        + int::<T>(16) * (n.clone() - T::one()) * pw(&c, 4))
        / (rc.clone() * r2c3.clone());
    let r3 = two::<T>()
        * (-pw(&r, 3)
            + (two::<T>() * n.clone() - int(3)) * c.clone() * pw(&r, 2)
            + (int::<T>(8) * n.clone() - int(8)) * pw(&c, 2) * r.clone()
            + (int::<T>(8) * n - int(8)) * pw(&c, 3))
        / r2c3;
    let r4 = -(two::<T>() * (r + int::<T>(3) * c)) / r2c;
    [r1, r2, r3, r4]
}

/// `σ₁ … σ₄` as surds over `q = (ρ+c)/(ρ+2c)`.
pub fn shape_spectrum_formulas<T: OrderedField>(p: &FamilyParams<T>) -> Result<[Surd<T>; 4]> {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let q = p.radicand();
    let rc = r.clone() + c.clone();
    let r2c = r.clone() + two::<T>() * c.clone();
    let root = |k: T| Surd::new(T::zero(), k, q.clone());
    Ok([
        root(c.clone() / rc.clone())?,
        root(
            (two::<T>() * r.clone() * r.clone() + int::<T>(5) * c.clone() * r.clone()
                + int::<T>(4) * c.clone() * c.clone())
                / (r2c.clone() * rc),
        )?,
        root((r + int::<T>(4) * c) / r2c)?,
        root(T::one())?,
    ])
}

pub fn multiplicities(n: usize) -> [usize; 4] {
    [2 * n - 2, 1, 2, 2 * n - 2]
}

pub fn expected_closed_forms<T: OrderedField>(p: &FamilyParams<T>) -> Result<ClosedForms<T>> {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let n = int::<T>(p.n as i64);
    let rc = r.clone() + c.clone();
    let r2c = r.clone() + two::<T>() * c.clone();
    let sig = shape_spectrum_formulas(p)?;
    let rs = principal_ricci_formulas(p);
    let mult = multiplicities(p.n);
    let keep = |i: usize| mult[i] > 0;
    let tr_coeff = ((two::<T>() * n.clone() + two()) * r.clone() * r.clone()
        + (int::<T>(8) * n.clone() + int(7)) * c.clone() * r.clone()
        + (int::<T>(8) * n.clone() + int(4)) * c.clone() * c.clone())
        / (rc.clone() * r2c);
    Ok(ClosedForms {
        sigma: std::array::from_fn(|i| keep(i).then(|| sig[i].clone())),
        multiplicities: mult,
        r: std::array::from_fn(|i| keep(i).then(|| rs[i].clone())),
        tr_s: Surd::new(T::zero(), tr_coeff, p.radicand())?,
        h_coeff: (two::<T>() * n.clone() - two()) * r / rc,
        lambda_expected: -(two::<T>() * (n + two())),
    })
}

/// `K = 2ρ²(ρ+c)/(ρ+2c)³`, the scale of the `n = 1` Ricci endomorphism.
pub fn heis_ricci_scale<T: OrderedField>(p: &FamilyParams<T>) -> T {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let r2c = r.clone() + two::<T>() * c.clone();
    two::<T>() * r.clone() * r.clone() * (r + c) / (r2c.clone() * r2c.clone() * r2c)
}

/// Closed-form Ricci endomorphism in the family basis.
pub fn expected_ric_matrix<T: OrderedField>(p: &FamilyParams<T>) -> Matrix<T> {
    if p.n == 1 {
        let k = heis_ricci_scale(p);
        return Matrix::diag(&[-k.clone(), -k.clone(), k]);
    }
    let [r1, r2, r3, r4] = principal_ricci_formulas(p);
    let m2 = 2 * p.n - 2;
    let mut diag = Vec::with_capacity(p.dim());
    diag.extend(std::iter::repeat_n(r1.clone(), m2));
    diag.extend(std::iter::repeat_n(r3, 2));
    diag.extend(std::iter::repeat_n(r4, m2));
    diag.push(r2.clone());
    let mut m = Matrix::diag(&diag);
    let d = p.dim();
    m[(d - 1, 1)] = two::<T>() * p.c.clone() * (r1 - r2);
    m
}

/// `ad(B₁ᴿ) = diag(0, 2, 𝟙_{2n−4}, V₄, 𝕆_{2n−4}, 0)`; `n > 1`.
pub fn expected_ad_b1r<T: OrderedField>(n: usize) -> Matrix<T> {
    let d = 4 * n - 1;
    let o = 2 * n - 2;
    let mut m = Matrix::zeros(d, d);
    m[(1, 1)] = two();
    for i in 2..o {
        m[(i, i)] = T::one();
    }
    for (i, j) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
        m[(o + i, o + j)] = -T::one();
    }
    m
}

/// `ad(B₁ᴿ)*` as displayed; `n > 1`.
pub fn expected_ad_b1r_adjoint<T: OrderedField>(p: &FamilyParams<T>) -> Matrix<T> {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let d = p.dim();
    let o = 2 * p.n - 2;
    let rc = r.clone() + c.clone();
    let r2c = r.clone() + two::<T>() * c.clone();
    let rr2c = r.clone() * r2c.clone();
    let mut m = Matrix::zeros(d, d);
    m[(1, 1)] = two::<T>() * rc.clone() * rc.clone() / rr2c.clone();
    for i in 2..o {
        m[(i, i)] = T::one();
    }
    let upper = -(r.clone() / r2c.clone());
    let lower = -(r2c / r);
    m[(o, o + 2)] = upper.clone();
    m[(o + 1, o + 3)] = upper;
    m[(o + 2, o)] = lower.clone();
    m[(o + 3, o + 1)] = lower;
    m[(d - 1, d - 1)] = -(two::<T>() * c.clone() * c.clone()) / rr2c.clone();
    m[(1, d - 1)] = -(c.clone() / rr2c.clone());
    m[(d - 1, 1)] = int::<T>(4) * c * rc.clone() * rc / rr2c;
    m
}

/// `[ad(B₁ᴿ), ad(B₁ᴿ)*]` in closed form; `n > 1`.
pub fn expected_normality_commutator<T: OrderedField>(p: &FamilyParams<T>) -> Matrix<T> {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let d = p.dim();
    let o = 2 * p.n - 2;
    let rc = r.clone() + c.clone();
    let rr2c = r * (p.rho.clone() + two::<T>() * c.clone());
    let v = int::<T>(4) * c.clone() * rc.clone() / rr2c.clone();
    let mut m = Matrix::zeros(d, d);
    m[(o, o)] = v.clone();
    m[(o + 1, o + 1)] = v.clone();
    m[(o + 2, o + 2)] = -v.clone();
    m[(o + 3, o + 3)] = -v;
    m[(1, d - 1)] = -(two::<T>() * c.clone()) / rr2c.clone();
    m[(d - 1, 1)] = -(int::<T>(8) * c * rc.clone() * rc) / rr2c;
    m
}

/// `ad(H)ˢ` as displayed, including the `𝒮₄` block; `n > 1`.
pub fn expected_ad_h_sym<T: OrderedField>(p: &FamilyParams<T>) -> Matrix<T> {
    let (r, c) = (p.rho.clone(), p.c.clone());
    let d = p.dim();
    let o = 2 * p.n - 2;
    let k = int::<T>(2 * p.n as i64 - 2);
    let rc = r.clone() + c.clone();
    let r2c = r.clone() + two::<T>() * c.clone();
    let mut m = Matrix::zeros(d, d);
    m[(1, 1)] = (two::<T>() * r.clone() * r.clone() + int::<T>(4) * c.clone() * r.clone()
        + c.clone() * c.clone())
        / (rc.clone() * r2c.clone());
    for i in 2..o {
        m[(i, i)] = r.clone() / rc.clone();
    }
    let s = -(r.clone() / r2c.clone());
    m[(o, o + 2)] = s.clone();
    m[(o + 1, o + 3)] = s;
    m[(o + 2, o)] = -T::one();
    m[(o + 3, o + 1)] = -T::one();
    m[(d - 1, d - 1)] = -(c.clone() * c.clone()) / (rc.clone() * r2c.clone());
    m[(1, d - 1)] = -(c.clone() / (two::<T>() * rc.clone() * r2c.clone()));
    m[(d - 1, 1)] = two::<T>() * c * rc / r2c;
    m.scale(&k)
}

/// `B_op = (2n+4)(ρ/(ρ+c))E₁,₁` for `n > 1`, zero for `n = 1`.
pub fn expected_killing_operator<T: OrderedField>(p: &FamilyParams<T>) -> Matrix<T> {
    let mut m = Matrix::zeros(p.dim(), p.dim());
    if p.n > 1 {
        m[(0, 0)] = int::<T>(2 * p.n as i64 + 4) * p.rho.clone() / (p.rho.clone() + p.c.clone());
    }
    m
}

/// `H = (2n−2)(ρ/(ρ+c))B₁ᴿ`, zero for `n = 1`.
pub fn expected_mean_curvature<T: OrderedField>(p: &FamilyParams<T>) -> Vec<T> {
    let mut h = vec![T::zero(); p.dim()];
    if p.n > 1 {
        h[0] = int::<T>(2 * p.n as i64 - 2) * p.rho.clone() / (p.rho.clone() + p.c.clone());
    }
    h
}

/// Predicted status: nilsoliton for `n = 1`, solvsoliton for `c = 0`, otherwise not a soliton.
pub fn predicted_status<T: OrderedField>(p: &FamilyParams<T>) -> SolitonKind {
    if p.n == 1 {
        SolitonKind::Nilsoliton
    } else if p.c.is_zero() {
        SolitonKind::Solvsoliton
    } else {
        SolitonKind::NotSoliton
    }
}

/// Predicted `(λ, D)` for soliton instances.
pub fn predicted_soliton<T: OrderedField>(p: &FamilyParams<T>) -> Option<(T, Matrix<T>)> {
    match predicted_status(p) {
        SolitonKind::Nilsoliton => {
            let k = heis_ricci_scale(p);
            Some((-(int::<T>(3) * k.clone()), build_delta::<T>(1).scale(&(two::<T>() * k))))
        }
        SolitonKind::Solvsoliton => {
            let n = p.n as i64;
            Some((int(-2 * (n + 2)), build_delta::<T>(p.n).scale(&int(2 * n + 2))))
        }
        SolitonKind::NotSoliton => None,
    }
}

/// Derivation bases of `𝔩` and of its nilradical; they depend on `n` only
/// and dominate the cost of a soliton check, so sweeps compute them once.
#[derive(Clone, Debug)]
pub struct FamilyDerivations<T> {
    pub n: usize,
    pub full: Vec<Matrix<T>>,
    pub nil: Vec<Matrix<T>>,
}

impl<T: OrderedField> FamilyDerivations<T> {
    pub fn compute(n: usize) -> Result<Self> {
        let l = build_lie_algebra::<T>(n)?;
        let nil = l.restrict(&splitting(n).n_indices)?.derivation_space();
        Ok(Self {
            n,
            full: l.derivation_space(),
            nil,
        })
    }
}

/// Direct and four-condition verdicts for one parameter point.
pub fn soliton_verdicts<T: OrderedField>(
    p: &FamilyParams<T>,
    derivations: &FamilyDerivations<T>,
) -> Result<(SolitonVerdict<T>, SolitonVerdict<T>)> {
    if derivations.n != p.n {
        return Err(Error::DimensionMismatch(format!(
            "derivations for n = {}, parameters for n = {}",
            derivations.n, p.n
        )));
    }
    let m = build_metric_lie_algebra(p)?;
    let direct = m.soliton_check_direct_with(&derivations.full)?;
    let lauret = m.soliton_check_lauret(&splitting(p.n), Some(&direct), Some(&derivations.nil))?;
    Ok((direct, lauret))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};
    use num_traits::Zero;

    type Q = Rational;

    fn params(n: usize, r: (i64, i64), c: (i64, i64)) -> FamilyParams<Q> {
        FamilyParams::new(n, q(r.0, r.1), q(c.0, c.1)).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(FamilyParams::new(0, q(1, 1), q(0, 1)).is_err());
        assert!(FamilyParams::new(1, q(0, 1), q(0, 1)).is_err());
        assert!(FamilyParams::new(1, q(1, 1), q(-1, 2)).is_err());
    }

    #[test]
    fn basis_labels() {
        let b = FamilyBasis::new(3);
        assert_eq!(
            b.labels(),
            ["B1R", "B1I", "B2R", "B2I", "e0", "f0", "e1", "f1", "e2", "f2", "Z"]
        );
        assert_eq!(FamilyBasis::new(1).labels(), ["e0", "f0", "Z"]);
        let cb = CoordBasis::new(2);
        let labels: Vec<_> = (0..7).map(|i| cb.label(i)).collect();
        assert_eq!(labels, ["b1", "t1", "phi~", "zeta~0", "zeta0", "zeta~1", "zeta1"]);
    }

    #[test]
    fn n1_is_heis3() {
        let l = build_lie_algebra::<Q>(1).unwrap();
        assert_eq!(l.triples(), vec![(0, 1, 2, q(1, 1))]);
    }

    #[test]
    fn mixed_brackets_n2() {
        let l = build_lie_algebra::<Q>(2).unwrap();
        let b = FamilyBasis::new(2);
        let br = |x: usize, y: usize| l.bracket(&l.unit(x), &l.unit(y)).unwrap();
        let neg = |i: usize| {
            let mut v = l.unit(i);
            v[i] = q(-1, 1);
            v
        };
        assert_eq!(br(b.b_re(1), b.e(0)), neg(b.e(1)));
        assert_eq!(br(b.b_re(1), b.f(0)), neg(b.f(1)));
        assert_eq!(br(b.b_re(1), b.e(1)), neg(b.e(0)));
        assert_eq!(br(b.b_re(1), b.f(1)), neg(b.f(0)));
        let mut f1_minus_f0 = l.unit(b.f(1));
        f1_minus_f0[b.f(0)] = q(-1, 1);
        assert_eq!(br(b.b_im(1), b.e(0)), f1_minus_f0);
        let mut e0_minus_e1 = l.unit(b.e(0));
        e0_minus_e1[b.e(1)] = q(-1, 1);
        assert_eq!(br(b.b_im(1), b.f(0)), e0_minus_e1);
        assert_eq!(l.ad_basis(0), expected_ad_b1r(2));
    }

    #[test]
    fn brackets_inside_b() {
        let l = build_lie_algebra::<Q>(3).unwrap();
        let b = FamilyBasis::new(3);
        let v = l.bracket(&l.unit(b.b_re(2)), &l.unit(b.b_im(2))).unwrap();
        let mut expect = vec![q(0, 1); 11];
        expect[b.b_im(1)] = q(1, 2);
        assert_eq!(v, expect);
        let h = l.bracket(&l.unit(b.e(1)), &l.unit(b.f(1))).unwrap();
        assert_eq!(h[b.z()], q(-1, 1));
    }

    #[test]
    fn complex_split_examples() {
        let basis = FamilyBasis::new(3);
        let rel = ComplexBracket {
            generator: basis.b_re(1),
            k: 0,
            image: vec![(1, Gaussian::real(q(-1, 1)))],
            conjugate_image: None,
        };
        let frag = real_from_complex_brackets(&basis, &[rel]).unwrap();
        assert_eq!(
            frag,
            vec![(0, basis.e(0), basis.e(1), q(-1, 1)), (0, basis.f(0), basis.f(1), q(-1, 1))]
        );
        let rel = ComplexBracket {
            generator: basis.b_im(2),
            k: 0,
            image: vec![(2, Gaussian::imag(q(1, 2)))],
            conjugate_image: Some(vec![(2, Gaussian::imag(q(-1, 2)))]),
        };
        let frag = real_from_complex_brackets(&basis, &[rel]).unwrap();
        assert_eq!(
            frag,
            vec![
                (basis.b_im(2), basis.e(0), basis.f(2), q(1, 2)),
                (basis.b_im(2), basis.f(0), basis.e(2), q(-1, 2)),
            ]
        );
    }

    #[test]
    fn conjugate_mismatch_is_rejected() {
        let basis = FamilyBasis::new(2);
        let rel = ComplexBracket {
            generator: basis.b_im(1),
            k: 0,
            image: vec![(0, Gaussian::imag(q(-1, 1)))],
            conjugate_image: Some(vec![(0, Gaussian::imag(q(-1, 1)))]),
        };
        assert!(matches!(
            real_from_complex_brackets(&basis, &[rel]),
            Err(Error::InconsistentConjugate(_))
        ));
    }

    #[test]
    fn gram_examples() {
        assert_eq!(
            build_gram(&params(1, (1, 1), (0, 1))).unwrap(),
            Matrix::diag(&[q(1, 4), q(1, 4), q(1, 4)])
        );
        let g = build_gram(&params(2, (1, 1), (1, 1))).unwrap();
        assert_eq!(g[(1, 1)], q(8, 3));
        assert_eq!(g[(1, 6)], q(-1, 3));
        assert_eq!(g[(6, 1)], q(-1, 3));
        let g0 = build_gram(&params(2, (1, 1), (0, 1))).unwrap();
        assert_eq!(
            g0,
            Matrix::diag(&[q(1, 1), q(1, 1), q(1, 4), q(1, 4), q(1, 4), q(1, 4), q(1, 4)])
        );
    }

    #[test]
    fn delta_is_a_derivation() {
        assert_eq!(build_delta::<Q>(1), Matrix::diag(&[q(1, 1), q(1, 1), q(2, 1)]));
        let d2 = build_delta::<Q>(2);
        assert_eq!(d2.diagonal(), [0, 0, 1, 1, 1, 1, 2].map(|x| q(x, 1)));
        for n in 1..=4 {
            assert!(build_lie_algebra::<Q>(n).unwrap().is_derivation(&build_delta(n)));
        }
    }

    #[test]
    fn embedding_columns() {
        let p = params(2, (1, 1), (1, 1));
        let emb = build_embedding(&p).unwrap();
        let fb = p.basis();
        let z = emb.p.col(fb.z());
        assert_eq!(z.iter().filter(|s| !s.is_zero()).count(), 1);
        assert_eq!(z[CoordBasis::new(2).phi()], Surd::one());
        let b1i: Vec<Q> = emb.p.col(fb.b_im(1)).iter().map(|s| s.as_rational().unwrap().clone()).collect();
        assert_eq!(b1i, [0, 2, -2, 0, 0, 0, 0].map(|x| q(x, 1)));
        let p0 = params(3, (2, 1), (0, 1));
        let emb0 = build_embedding(&p0).unwrap();
        let pulled = emb0.pullback(&Matrix::diag(&coordinate_gram_values(&p0).unwrap())).unwrap();
        assert!(pulled.is_diagonal());
    }

    #[test]
    fn closed_form_examples() {
        let cf = expected_closed_forms(&params(2, (3, 1), (0, 1))).unwrap();
        assert_eq!(cf.r, [-8, 4, -2, -2].map(|x| Some(q(x, 1))));
        let cf = expected_closed_forms(&params(1, (1, 1), (1, 1))).unwrap();
        assert_eq!(cf.r, [None, Some(q(4, 27)), Some(q(-4, 27)), None]);
        let cf = expected_closed_forms(&params(2, (1, 1), (1, 1))).unwrap();
        assert_eq!(cf.tr_s, Surd::new(q(0, 1), q(49, 6), q(2, 3)).unwrap());
        assert_eq!(cf.r[0], Some(q(-5, 1)));
        assert_eq!(cf.h_coeff, q(1, 1));
    }

    #[test]
    fn expected_ric_examples() {
        let m = expected_ric_matrix(&params(2, (1, 1), (0, 1)));
        assert_eq!(m, Matrix::diag(&[-8, -8, -2, -2, -2, -2, 4].map(|x| q(x, 1))));
        let m = expected_ric_matrix(&params(2, (1, 1), (1, 1)));
        assert_eq!(m[(6, 1)], q(-368, 27));
    }

    #[test]
    fn three_way_ricci_and_lauret_values() {
        for (n, r, c) in [(1, (2, 1), (1, 1)), (2, (1, 1), (1, 1)), (3, (5, 2), (1, 2))] {
            let p = params(n, r, c);
            let m = build_metric_lie_algebra(&p).unwrap();
            let ric = m.ricci_endomorphism_koszul();
            assert_eq!(ric, expected_ric_matrix(&p), "n={n}");
            let coord = crate::hypersurface::family_hypersurface_ricci(&p).unwrap();
            assert_eq!(build_embedding(&p).unwrap().to_family_basis(&coord).unwrap(), ric);
            if n > 1 {
                let t = m.lauret_terms(&splitting(n), &ric).unwrap();
                assert_eq!(t.b_op, expected_killing_operator(&p));
                assert_eq!(t.ad_h_sym, expected_ad_h_sym(&p));
                assert_eq!(t.mean_curvature, expected_mean_curvature(&p));
                let ad = m.lie().ad_basis(0);
                let star = m.adjoint_operator(&ad).unwrap();
                assert_eq!(star, expected_ad_b1r_adjoint(&p));
                assert_eq!(ad.commutator(&star).unwrap(), expected_normality_commutator(&p));
            }
        }
    }
}
