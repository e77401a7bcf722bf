//! Level sets `N̄_ρ` of the radial coordinate: warp function, radial
//! operators, shape operator and the Ricci tensor of an Einstein
//! hypersurface, all evaluated exactly at a single `ρ` with order-2 jets.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{multiplicities, principal_ricci_formulas, CoordBasis, FamilyParams};
use crate::linalg::{inverse, Matrix};
use crate::scalar::{Jet2, OrderedField, Surd};

type J<T> = Jet2<T>;

fn int<T: OrderedField>(v: i64) -> T {
    T::from_i64(v)
}

struct Vars<T> {
    rho: J<T>,
    c: J<T>,
}

impl<T: OrderedField> Vars<T> {
    fn new(p: &FamilyParams<T>) -> Self {
        Self {
            rho: J::variable(p.rho.clone()),
            c: J::lift(p.c.clone()),
        }
    }

    fn k(&self, v: i64) -> J<T> {
        J::lift(int(v))
    }

    fn rho_plus(&self, m: i64) -> J<T> {
        self.rho.clone() + self.c.scale(&int(m))
    }
}

/// Diagonal of the level-set Gram matrix in coordinate order
/// `(bᵃ, tᵃ, φ̃, ζ̃₀, ζ⁰, ζ̃ₐ, ζᵃ)`, as jets in `ρ`.
pub fn coordinate_gram_jets<T: OrderedField>(p: &FamilyParams<T>) -> Result<Vec<J<T>>> {
    let x = Vars::new(p);
    let (rho, rc, r2c) = (x.rho.clone(), x.rho_plus(1), x.rho_plus(2));
    let rho2 = rho.clone() * rho.clone();
    let m = 2 * p.n - 2;
    let mut diag = Vec::with_capacity(p.dim());
    let fs = rc.try_div(&(x.k(4) * rho.clone()))?;
    diag.extend(std::iter::repeat_n(fs, m));
    diag.push(rc.try_div(&(x.k(4) * rho2.clone() * r2c.clone()))?);
    let zeta0 = r2c.try_div(&(x.k(2) * rho2))?;
    diag.extend(std::iter::repeat_n(zeta0, 2));
    let zeta = (x.k(2) * rho).try_recip()?;
    diag.extend(std::iter::repeat_n(zeta, m));
    Ok(diag)
}

pub fn coordinate_gram<T: OrderedField>(p: &FamilyParams<T>) -> Result<Matrix<J<T>>> {
    Ok(Matrix::diag(&coordinate_gram_jets(p)?))
}

/// Values of [`coordinate_gram_jets`] at the working `ρ`.
pub fn coordinate_gram_values<T: OrderedField>(p: &FamilyParams<T>) -> Result<Vec<T>> {
    Ok(coordinate_gram_jets(p)?.into_iter().map(|j| j.v).collect())
}

/// Warp function `f` of the radial part `f dρ²` and the block functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarpData<T> {
    pub f: J<T>,
    pub fprime_over_f: T,
    pub h1: J<T>,
    pub h2: J<T>,
    pub h3: J<T>,
    /// `(ρ+c)/(ρ+2c)`.
    pub q: T,
}

/// `f = (ρ+2c)/(4ρ²(ρ+c))`.
pub fn warp_function<T: OrderedField>(p: &FamilyParams<T>) -> Result<J<T>> {
    let x = Vars::new(p);
    x.rho_plus(2)
        .try_div(&(x.k(4) * x.rho.clone() * x.rho.clone() * x.rho_plus(1)))
}

pub fn warp_data<T: OrderedField>(p: &FamilyParams<T>) -> Result<WarpData<T>> {
    let x = Vars::new(p);
    let (rho, c, rc, r2c) = (x.rho.clone(), x.c.clone(), x.rho_plus(1), x.rho_plus(2));
    let f = warp_function(p)?;
    let h1 = c.try_div(&rc)?;
    let h2 = (x.k(2) * rho.clone() * rho.clone() + x.k(5) * c.clone() * rho.clone()
        + x.k(4) * c.clone() * c.clone())
    .try_div(&(rc.clone() * r2c.clone()))?;
    let h3 = (rho + x.k(4) * c).try_div(&r2c)?;
    Ok(WarpData {
        fprime_over_f: f.d1.checked_div(&f.v)?,
        f,
        h1,
        h2,
        h3,
        q: p.radicand(),
    })
}

/// `A = ∇_{∂ρ}` on the level set and the Gram data derived from `∂ρ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialOperators<T> {
    /// `−(1/2ρ)·diag(h₁𝟙, h₂, h₃𝟙₂, 𝟙)`.
    pub a: Matrix<J<T>>,
    /// `h = ½∂ρ g`.
    pub h: Matrix<T>,
    /// `h g⁻¹ h`, the Gram of `h²`.
    pub h_sq: Matrix<T>,
    pub d2g: Matrix<T>,
}

/// Builds `A` from the block functions and checks `H = G·A` against the
/// jet derivative of the coordinate Gram.
pub fn radial_operators<T: OrderedField>(p: &FamilyParams<T>) -> Result<RadialOperators<T>> {
    let w = warp_data(p)?;
    let rho = J::variable(p.rho.clone());
    let scale = -(rho.scale(&int(2)).try_recip()?);
    let m = 2 * p.n - 2;
    let mut blocks = Vec::with_capacity(p.dim());
    blocks.extend(std::iter::repeat_n(w.h1.clone(), m));
    blocks.push(w.h2.clone());
    blocks.extend(std::iter::repeat_n(w.h3.clone(), 2));
    blocks.extend(std::iter::repeat_n(J::one(), m));
    let a = Matrix::diag(&blocks.into_iter().map(|b| scale.clone() * b).collect::<Vec<_>>());

    let g = coordinate_gram(p)?;
    let g0 = g.map(|x| x.v.clone());
    let half = T::from_ratio(1, 2);
    let h = g.map(|x| x.d1.clone() * half.clone());
    let a0 = a.map(|x| x.v.clone());
    if g0.try_mul(&a0)? != h {
        return Err(Error::Consistency("½∂ρg differs from G·A".into()));
    }
    if !h.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let h_sq = a0.try_mul(&a0)?.try_mul(&g0)?;
    Ok(RadialOperators {
        a,
        h,
        h_sq,
        d2g: g.map(|x| x.d2.clone()),
    })
}

/// Shape operator with respect to the unit normal `∂ρ/√f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: OrderedField + Serialize + std::fmt::Display"))]
pub struct ShapeOperator<T: OrderedField> {
    pub matrix: Matrix<Surd<T>>,
    /// Distinct blocks `(σ, multiplicity)` in the order `σ₁ … σ₄`, omitting
    /// empty blocks.
    pub spectrum: Vec<(Surd<T>, usize)>,
    pub trace: Surd<T>,
}

/// `S = −A/√f`.
pub fn shape_operator<T: OrderedField>(p: &FamilyParams<T>) -> Result<ShapeOperator<T>> {
    let ops = radial_operators(p)?;
    let f = warp_function(p)?;
    let q = p.radicand();
    let inv_sqrt_f = Surd::sqrt_over(&f.v.recip(), &q)?;
    let diag: Vec<Surd<T>> = ops
        .a
        .diagonal()
        .iter()
        .map(|x| inv_sqrt_f.scale(&-x.v.clone()))
        .collect();
    let matrix = Matrix::diag(&diag);
    let mut spectrum = Vec::new();
    let mut pos = 0;
    for m in multiplicities(p.n) {
        if m > 0 {
            spectrum.push((diag[pos].clone(), m));
        }
        pos += m;
    }
    let mut trace = Surd::zero();
    for s in &diag {
        trace = trace.try_add(s)?;
    }
    Ok(ShapeOperator {
        matrix,
        spectrum,
        trace,
    })
}

fn gram_parts<T: OrderedField>(g: &Matrix<J<T>>) -> (Matrix<T>, Matrix<T>, Matrix<T>) {
    (
        g.map(|x| x.v.clone()),
        g.map(|x| x.d1.clone()),
        g.map(|x| x.d2.clone()),
    )
}

/// Ricci form of a level set in an Einstein manifold `(dρ-direction warp
/// f, Einstein constant λ)`:
/// `λg + ((1/4f)tr(g⁻¹∂g) − f′/4f²)∂g − (2/f)h g⁻¹ h + (1/2f)∂²g`,
/// with `h = ½∂g`. Returns the Gram of the bilinear form.
pub fn hypersurface_ricci_general<T: OrderedField>(
    g: &Matrix<J<T>>,
    f: &J<T>,
    lambda: &T,
) -> Result<Matrix<T>> {
    if f.v.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (g0, dg, d2g) = gram_parts(g);
    let ginv = inverse(&g0)?;
    let four: T = int(4);
    let inv_f = f.v.recip();
    let tr = ginv.try_mul(&dg)?.trace();
    let coeff = inv_f.clone() * tr / four.clone() - f.d1.clone() * inv_f.clone() * inv_f.clone() / four;
    let h = dg.scale(&T::from_ratio(1, 2));
    let h_sq = h.try_mul(&ginv)?.try_mul(&h)?;
    g0.scale(lambda)
        .try_add(&dg.scale(&coeff))?
        .try_sub(&h_sq.scale(&(int::<T>(2) * inv_f.clone())))?
        .try_add(&d2g.scale(&(inv_f / int(2))))
}

/// `g⁻¹·Ric` at the working point.
pub fn raise<T: OrderedField>(g: &Matrix<J<T>>, form: &Matrix<T>) -> Result<Matrix<T>> {
    inverse(&g.map(|x| x.v.clone()))?.try_mul(form)
}

/// Ricci endomorphism of the family level set in coordinate order, with
/// `λ = −2(n+2)`.
pub fn family_hypersurface_ricci<T: OrderedField>(p: &FamilyParams<T>) -> Result<Matrix<T>> {
    let g = coordinate_gram(p)?;
    let f = warp_function(p)?;
    let lambda = int::<T>(-2 * (p.n as i64 + 2));
    raise(&g, &hypersurface_ricci_general(&g, &f, &lambda)?)
}

/// The four principal Ricci curvatures `r₁ … r₄`.
pub fn principal_ricci<T: OrderedField>(p: &FamilyParams<T>) -> [T; 4] {
    principal_ricci_formulas(p)
}

/// `diag(r₁𝟙, r₂, r₃𝟙₂, r₄𝟙)` in coordinate order.
pub fn principal_ricci_coordinate_matrix<T: OrderedField>(p: &FamilyParams<T>) -> Matrix<T> {
    let r = principal_ricci(p);
    let mult = multiplicities(p.n);
    let mut diag = Vec::with_capacity(p.dim());
    for (val, m) in r.iter().zip(mult) {
        diag.extend(std::iter::repeat_n(val.clone(), m));
    }
    Matrix::diag(&diag)
}

/// `tr(g⁻¹∂g) − f′/f` and `−8nρf` for a given Gram and warp.
pub fn trace_identity_sides<T: OrderedField>(
    g: &Matrix<J<T>>,
    f: &J<T>,
    n: usize,
    rho: &T,
) -> Result<(T, T)> {
    let (g0, dg, _) = gram_parts(g);
    let lhs = inverse(&g0)?.try_mul(&dg)?.trace() - f.d1.checked_div(&f.v)?;
    let rhs = -(int::<T>(8 * n as i64) * rho.clone() * f.v.clone());
    Ok((lhs, rhs))
}

pub fn trace_identity_check<T: OrderedField>(p: &FamilyParams<T>) -> Result<bool> {
    let (lhs, rhs) = trace_identity_sides(&coordinate_gram(p)?, &warp_function(p)?, p.n, &p.rho)?;
    Ok(lhs == rhs)
}

/// Label of each coordinate of the level set.
pub fn coordinate_labels(n: usize) -> Vec<String> {
    let cb = CoordBasis::new(n);
    (0..cb.dim()).map(|i| cb.label(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::shape_spectrum_formulas;
    use crate::scalar::{q, Rational};

    type Q = Rational;

    fn params(n: usize, r: (i64, i64), c: (i64, i64)) -> FamilyParams<Q> {
        FamilyParams::new(n, q(r.0, r.1), q(c.0, c.1)).unwrap()
    }

    #[test]
    fn coordinate_gram_examples() {
        let p = params(1, (1, 1), (0, 1));
        assert_eq!(coordinate_gram_values(&p).unwrap(), vec![q(1, 4), q(1, 2), q(1, 2)]);
        // ∂ρ of the φ̃ entry: −(1/4ρ³)(2ρ²+5cρ+4c²)/(ρ+2c)²
        assert_eq!(coordinate_gram_jets(&p).unwrap()[0].d1, q(-1, 2));
        let p = params(2, (3, 2), (2, 3));
        let phi = coordinate_gram_jets(&p).unwrap()[2].clone();
        let (r, c) = (q(3, 2), q(2, 3));
        let expect = -(q(1, 4) / (r.clone() * r.clone() * r.clone()))
            * (q(2, 1) * r.clone() * r.clone() + q(5, 1) * c.clone() * r.clone() + q(4, 1) * c.clone() * c.clone())
            / ((r.clone() + q(2, 1) * c.clone()) * (r + q(2, 1) * c));
        assert_eq!(phi.d1, expect);
    }

    #[test]
    fn h_functions_vanish_and_stay_positive() {
        let w = warp_data(&params(2, (1, 1), (0, 1))).unwrap();
        assert!(w.h1.v.is_zero());
        assert_eq!(w.q, q(1, 1));
        let w = warp_data(&params(2, (2, 1), (1, 3))).unwrap();
        assert!(w.h1.v.is_positive() && w.h2.v.is_positive() && w.h3.v.is_positive());
        assert!(w.f.v.is_positive());
    }

    #[test]
    fn radial_operators_are_consistent() {
        let ops = radial_operators(&params(3, (5, 2), (1, 2))).unwrap();
        assert!(ops.a.is_diagonal());
        assert!(ops.h.is_symmetric());
    }

    #[test]
    fn shape_spectrum_at_c_zero() {
        let s = shape_operator(&params(2, (1, 1), (0, 1))).unwrap();
        let vals: Vec<_> = s.spectrum.iter().map(|(v, m)| (v.as_rational().cloned(), *m)).collect();
        assert_eq!(
            vals,
            vec![
                (Some(q(0, 1)), 2),
                (Some(q(2, 1)), 1),
                (Some(q(1, 1)), 2),
                (Some(q(1, 1)), 2)
            ]
        );
    }

    #[test]
    fn shape_spectrum_matches_formulas() {
        let p = params(2, (1, 1), (1, 1));
        let s = shape_operator(&p).unwrap();
        let expect = shape_spectrum_formulas(&p).unwrap();
        for ((v, _), e) in s.spectrum.iter().zip(&expect) {
            assert_eq!(v, e);
        }
        assert_eq!(expect[0], Surd::new(q(0, 1), q(1, 2), q(2, 3)).unwrap());
        assert!(s.spectrum.iter().all(|(v, _)| v.is_positive()));
    }

    #[test]
    fn family_ricci_n2_c0() {
        let m = family_hypersurface_ricci(&params(2, (1, 1), (0, 1))).unwrap();
        assert_eq!(m, Matrix::diag(&[-8, -8, 4, -2, -2, -2, -2].map(|x| q(x, 1))));
    }

    #[test]
    fn family_ricci_n1() {
        let p = params(1, (2, 1), (1, 1));
        let m = family_hypersurface_ricci(&p).unwrap();
        assert_eq!(m.diagonal()[0], q(3, 8));
        assert_eq!(m, principal_ricci_coordinate_matrix(&p));
    }

    #[test]
    fn round_sphere_fixture() {
        // concentric spheres of radius ρ in flat ℝ³: G = ρ²𝟙₂, f = 1, λ = 0
        let rho = q(3, 2);
        let r = J::variable(rho.clone());
        let g = Matrix::diag(&[r.clone() * r.clone(), r.clone() * r]);
        let form = hypersurface_ricci_general(&g, &J::lift(q(1, 1)), &q(0, 1)).unwrap();
        let ric = raise(&g, &form).unwrap();
        let k = q(1, 1) / (rho.clone() * rho);
        assert_eq!(ric, Matrix::diag(&[k.clone(), k]));
    }

    #[test]
    fn trace_identity_and_mutation() {
        assert!(trace_identity_check(&params(1, (1, 1), (0, 1))).unwrap());
        let p = params(4, (3, 2), (2, 3));
        assert!(trace_identity_check(&p).unwrap());
        // drop the (ρ+c) factor from f
        let rho = J::variable(p.rho.clone());
        let bad = (rho.clone() + J::lift(q(4, 3)))
            .try_div(&(J::lift(q(4, 1)) * rho.clone() * rho))
            .unwrap();
        let (lhs, rhs) = trace_identity_sides(&coordinate_gram(&p).unwrap(), &bad, 4, &p.rho).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn zero_warp_is_rejected() {
        let g = Matrix::diag(&[J::variable(q(1, 1))]);
        assert_eq!(
            hypersurface_ricci_general(&g, &J::lift(q(0, 1)), &q(1, 1)),
            Err(Error::DivisionByZero)
        );
    }
}
