//! Floating-point cross-check in real coordinates: the full ambient metric
//! `g_N^c` on `(0,∞) × B₁(0) × ℝ × ℂⁿ`, differentiated with multivariate
//! jets, its Christoffel symbols and Ricci tensor.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{multiplicities, CoordBasis, FamilyParams};
use crate::hypersurface;
use crate::scalar::{Field, FloatJet2, Rational};

type Jet = FloatJet2<f64>;

/// Real chart `(ρ, bᵃ, tᵃ, φ̃, ζ̃₀, ζ⁰, ζ̃ₐ, ζᵃ)` on `N̄`; index 0 is `ρ`
/// and index `1 + i` is level-set coordinate `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    n: usize,
    point: Vec<f64>,
}

impl Chart {
    pub fn new(n: usize, point: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if point.len() != 4 * n {
            return Err(Error::DimensionMismatch(format!(
                "chart point has {} coordinates, expected {}",
                point.len(),
                4 * n
            )));
        }
        if point[0].is_nan() || point[0] <= 0.0 {
            return Err(Error::OutOfDomain(format!("rho = {} is not positive", point[0])));
        }
        let chart = Self { n, point };
        let norm = chart.disc_norm_sq();
        if norm.is_nan() || norm >= 1.0 {
            return Err(Error::OutOfDomain(format!("|X|^2 = {norm} outside the unit ball")));
        }
        Ok(chart)
    }

    /// `p_ρ`: every coordinate except `ρ` vanishes.
    pub fn base_point(n: usize, rho: f64) -> Result<Self> {
        let mut point = vec![0.0; 4 * n];
        point[0] = rho;
        Self::new(n, point)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn rho(&self) -> f64 {
        self.point[0]
    }

    /// `‖X‖² = Σ((bᵃ)² + (tᵃ)²)/4`.
    pub fn disc_norm_sq(&self) -> f64 {
        let cb = CoordBasis::new(self.n);
        (1..self.n)
            .map(|a| {
                let (b, t) = (self.point[1 + cb.b(a)], self.point[1 + cb.t(a)]);
                (b * b + t * t) / 4.0
            })
            .sum()
    }

    pub fn labels(n: usize) -> Vec<String> {
        let cb = CoordBasis::new(n);
        std::iter::once("rho".to_string())
            .chain((0..cb.dim()).map(|i| cb.label(i)))
            .collect()
    }
}

#[derive(Clone, Debug)]
struct CJet {
    re: Jet,
    im: Jet,
}

impl CJet {
    fn new(re: Jet, im: Jet) -> Self {
        Self { re, im }
    }

    fn constant(re: f64, im: f64, dim: usize) -> Self {
        Self::new(Jet::constant(re, dim), Jet::constant(im, dim))
    }

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }

    fn abs_sq(&self) -> Jet {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
}

/// Complex one-form: coefficients of `dxⁱ` over the chart.
#[derive(Clone, Debug)]
struct CForm(Vec<CJet>);

impl CForm {
    fn zero(n_coords: usize, dim: usize) -> Self {
        Self(vec![CJet::constant(0.0, 0.0, dim); n_coords])
    }

    /// `(re + i·im)/2 · dxⁱ` style constant forms.
    fn basic(n_coords: usize, dim: usize, entries: &[(usize, f64, f64)]) -> Self {
        let mut out = Self::zero(n_coords, dim);
        for &(i, re, im) in entries {
            out.0[i] = CJet::constant(re, im, dim);
        }
        out
    }

    fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a.add(b)).collect())
    }

    fn sub(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a.sub(b)).collect())
    }

    fn times(&self, k: &CJet) -> Self {
        Self(self.0.iter().map(|a| k.mul(a)).collect())
    }

    fn im(&self) -> RForm {
        RForm(self.0.iter().map(|a| a.im.clone()).collect())
    }
}

#[derive(Clone, Debug)]
struct RForm(Vec<Jet>);

impl RForm {
    fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn scale(&self, k: &Jet) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }
}

/// Symmetric bilinear form with jet coefficients, flat `N × N`.
#[derive(Clone, Debug)]
struct Quadratic {
    size: usize,
    entries: Vec<Jet>,
}

impl Quadratic {
    fn zero(size: usize, dim: usize) -> Self {
        Self {
            size,
            entries: vec![Jet::constant(0.0, dim); size * size],
        }
    }

    /// `α ⊙ β = ½(α⊗β + β⊗α)`.
    fn add_sym_product(&mut self, a: &RForm, b: &RForm, k: &Jet) {
        let n = self.size;
        for i in 0..n {
            for j in 0..n {
                let t = &(&(&a.0[i] * &b.0[j]) + &(&a.0[j] * &b.0[i])) * k;
                self.entries[i * n + j] = &self.entries[i * n + j] + &t.scale(0.5);
            }
        }
    }

    /// `k·|α|² = k·(Re α ⊙ Re α + Im α ⊙ Im α)`.
    fn add_abs_sq(&mut self, a: &CForm, k: &Jet) {
        let re = RForm(a.0.iter().map(|z| z.re.clone()).collect());
        let im = RForm(a.0.iter().map(|z| z.im.clone()).collect());
        self.add_sym_product(&re, &re, k);
        self.add_sym_product(&im, &im, k);
    }

    fn values(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.size, self.size, |i, j| self.entries[i * self.size + j].v)
    }
}

/// Jet-valued Gram matrix `g_ij` over a chosen set of active chart
/// coordinates (the jet variables).
#[derive(Clone, Debug)]
pub struct MetricJets {
    /// Number of chart coordinates indexing the matrix.
    pub size: usize,
    /// Row-major `size × size`.
    pub entries: Vec<Jet>,
}

impl MetricJets {
    pub fn values(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.size, self.size, |i, j| self.entries[i * self.size + j].v)
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        &self.entries[i * self.size + j]
    }

    /// Principal submatrix on `indices`; jets keep their variables.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let m = indices.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { size: m, entries }
    }
}

/// The ambient metric `g_N^c` for given `n` and `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmbientMetric {
    pub n: usize,
    pub c: f64,
}

/// The displayed summands of `g_N^c`, evaluated at a point.
#[derive(Clone, Debug)]
pub struct MetricTerms {
    pub radial: DMatrix<f64>,
    pub fubini_study: DMatrix<f64>,
    pub contact: DMatrix<f64>,
    pub indefinite: DMatrix<f64>,
    pub twisted: DMatrix<f64>,
}

impl MetricTerms {
    pub fn total(&self) -> DMatrix<f64> {
        &self.radial + &self.fubini_study + &self.contact + &self.indefinite + &self.twisted
    }
}

impl AmbientMetric {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if c.is_nan() || c < 0.0 {
            return Err(Error::InvalidParameter(format!("c must be non-negative, got {c}")));
        }
        Ok(Self { n, c })
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    fn check_chart(&self, p: &Chart) -> Result<()> {
        if p.n != self.n {
            return Err(Error::DimensionMismatch(format!("chart for n = {}, metric for n = {}", p.n, self.n)));
        }
        Ok(())
    }

    fn terms_jets(&self, p: &Chart, active: &[usize]) -> Result<[Quadratic; 5]> {
        self.check_chart(p)?;
        let size = self.dim();
        let dim = active.len();
        let var = |i: usize| match active.iter().position(|&a| a == i) {
            Some(k) => Jet::variable(k, p.point[i], dim),
            None => Jet::constant(p.point[i], dim),
        };
        let k = |x: f64| Jet::constant(x, dim);
        let cb = CoordBasis::new(self.n);
        let at = |i: usize| 1 + i;
        let c = k(self.c);

        let rho = var(0);
        let rc = &rho + &c;
        let r2c = &rho + &c.scale(2.0);
        let rho2 = &rho * &rho;

        let xs: Vec<CJet> = (1..self.n)
            .map(|a| CJet::new(var(at(cb.b(a))).scale(0.5), var(at(cb.t(a))).scale(0.5)))
            .collect();
        let dxs: Vec<CForm> = (1..self.n)
            .map(|a| CForm::basic(size, dim, &[(at(cb.b(a)), 0.5, 0.0), (at(cb.t(a)), 0.0, 0.5)]))
            .collect();
        let w0 = CJet::new(var(at(cb.zeta_tilde(0))).scale(0.5), var(at(cb.zeta(0))).scale(0.5));
        let dw0 = CForm::basic(size, dim, &[(at(cb.zeta_tilde(0)), 0.5, 0.0), (at(cb.zeta(0)), 0.0, 0.5)]);
        let ws: Vec<CJet> = (1..self.n)
            .map(|a| CJet::new(var(at(cb.zeta_tilde(a))).scale(0.5), var(at(cb.zeta(a))).scale(-0.5)))
            .collect();
        let dws: Vec<CForm> = (1..self.n)
            .map(|a| {
                CForm::basic(size, dim, &[(at(cb.zeta_tilde(a)), 0.5, 0.0), (at(cb.zeta(a)), 0.0, -0.5)])
            })
            .collect();

        let norm_x: Jet = xs.iter().fold(k(0.0), |acc, x| &acc + &x.abs_sq());
        let one_minus = &k(1.0) - &norm_x;
        if one_minus.v.is_nan() || one_minus.v <= 0.0 {
            return Err(Error::OutOfDomain("point outside the unit ball".into()));
        }
        let s = one_minus.recip();

        // Σ X̄ᵃ dXᵃ and dw⁰ + Σ Xᵃ dwᵃ
        let mut gamma = CForm::zero(size, dim);
        let mut beta = dw0.clone();
        let mut vertical = dw0.times(&w0.conj());
        for a in 0..self.n - 1 {
            gamma = gamma.add(&dxs[a].times(&xs[a].conj()));
            beta = beta.add(&dws[a].times(&xs[a]));
            vertical = vertical.sub(&dws[a].times(&ws[a].conj()));
        }

        let mut radial = Quadratic::zero(size, dim);
        let mut dr = RForm(vec![k(0.0); size]);
        dr.0[0] = k(1.0);
        let f = r2c.div(&(&(&rho2 * &rc) * &k(4.0)));
        radial.add_sym_product(&dr, &dr, &f);

        let mut fs = Quadratic::zero(size, dim);
        let pref = &rc.div(&rho) * &s;
        for dx in &dxs {
            fs.add_abs_sq(dx, &pref);
        }
        fs.add_abs_sq(&gamma, &(&pref * &s));

        let mut contact = Quadratic::zero(size, dim);
        let mut dphi = RForm(vec![k(0.0); size]);
        dphi.0[at(cb.phi())] = k(1.0);
        let theta = dphi
            .add(&vertical.im().scale(&k(-4.0)))
            .add(&gamma.im().scale(&(&s * &c.scale(2.0))));
        let cpref = rc.div(&(&(&rho2 * &r2c) * &k(4.0)));
        contact.add_sym_product(&theta, &theta, &cpref);

        let mut indefinite = Quadratic::zero(size, dim);
        let m2 = rho.recip().scale(-2.0);
        indefinite.add_abs_sq(&dw0, &m2);
        for dw in &dws {
            indefinite.add_abs_sq(dw, &-&m2);
        }

        let mut twisted = Quadratic::zero(size, dim);
        let tpref = &(&rc.div(&rho2) * &s) * &k(4.0);
        twisted.add_abs_sq(&beta, &tpref);

        Ok([radial, fs, contact, indefinite, twisted])
    }

    /// Each displayed summand at `p`.
    pub fn terms(&self, p: &Chart) -> Result<MetricTerms> {
        let [radial, fs, contact, indefinite, twisted] = self.terms_jets(p, &[])?;
        Ok(MetricTerms {
            radial: radial.values(),
            fubini_study: fs.values(),
            contact: contact.values(),
            indefinite: indefinite.values(),
            twisted: twisted.values(),
        })
    }

    /// Gram matrix with jets in the chart coordinates listed in `active`.
    pub fn jets(&self, p: &Chart, active: &[usize]) -> Result<MetricJets> {
        let terms = self.terms_jets(p, active)?;
        let size = self.dim();
        let mut entries = terms[0].entries.clone();
        for t in &terms[1..] {
            for (e, x) in entries.iter_mut().zip(&t.entries) {
                *e = &*e + x;
            }
        }
        Ok(MetricJets { size, entries })
    }

    pub fn gram(&self, p: &Chart) -> Result<DMatrix<f64>> {
        Ok(self.jets(p, &[])?.values())
    }

    /// Ricci tensor at `p` in chart coordinates.
    pub fn ricci_numeric(&self, p: &Chart) -> Result<DMatrix<f64>> {
        let all: Vec<usize> = (0..self.dim()).collect();
        ricci_from_jets(&self.jets(p, &all)?)
    }
}

/// Ricci tensor from a metric whose jets are taken in exactly the
/// coordinates indexing it:
/// `R_ij = ∂ₖΓᵏᵢⱼ − ∂ⱼΓᵏᵢₖ + ΓᵏₖₗΓˡᵢⱼ − ΓᵏⱼₗΓˡᵢₖ`.
pub fn ricci_from_jets(g: &MetricJets) -> Result<DMatrix<f64>> {
    let n = g.size;
    if g.entries.first().is_some_and(|e| e.dim() != n) {
        return Err(Error::DimensionMismatch("metric jets must be taken in its own coordinates".into()));
    }
    let g0 = g.values();
    let ginv = g0.clone().try_inverse().ok_or(Error::Singular)?;
    let d = |k: usize, i: usize, j: usize| g.get(i, j).d(k);
    let dd = |k: usize, l: usize, i: usize, j: usize| g.get(i, j).dd(k, l);

    // first-kind symbols C[l][i][j] and their derivatives
    let idx3 = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut first = vec![0.0; n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                first[idx3(l, i, j)] = 0.5 * (d(i, j, l) + d(j, i, l) - d(l, i, j));
            }
        }
    }
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                gamma[idx3(k, i, j)] = (0..n).map(|l| ginv[(k, l)] * first[idx3(l, i, j)]).sum();
            }
        }
    }
    // ∂ₘ g^{kl} = −g^{ka} ∂ₘg_ab g^{bl}
    let mut dginv = vec![0.0; n * n * n];
    for m in 0..n {
        let dg = DMatrix::from_fn(n, n, |a, b| d(m, a, b));
        let prod = -(&ginv * dg * &ginv);
        for k in 0..n {
            for l in 0..n {
                dginv[idx3(m, k, l)] = prod[(k, l)];
            }
        }
    }
    // ∂ₘΓᵏᵢⱼ, needed only for m = k and for m = j after contraction
    let dgamma = |m: usize, k: usize, i: usize, j: usize| -> f64 {
        (0..n)
            .map(|l| {
                let dfirst = 0.5 * (dd(m, i, j, l) + dd(m, j, i, l) - dd(m, l, i, j));
                dginv[idx3(m, k, l)] * first[idx3(l, i, j)] + ginv[(k, l)] * dfirst
            })
            .sum()
    };
    let mut ric = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut r = 0.0;
            for k in 0..n {
                r += dgamma(k, k, i, j) - dgamma(j, k, i, k);
                for l in 0..n {
                    r += gamma[idx3(k, k, l)] * gamma[idx3(l, i, j)]
                        - gamma[idx3(k, j, l)] * gamma[idx3(l, i, k)];
                }
            }
            ric[(i, j)] = r;
        }
    }
    Ok(ric)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `‖Ric − λg‖∞ / ‖g‖∞` with `λ = −2(n+2)`.
pub fn einstein_residual(metric: &AmbientMetric, p: &Chart) -> Result<f64> {
    let g = metric.gram(p)?;
    let ric = metric.ricci_numeric(p)?;
    let lambda = -2.0 * (metric.n as f64 + 2.0);
    Ok(max_abs(&(ric - g.clone() * lambda)) / max_abs(&g))
}

/// `p_ρ` followed by `count` off-centre points with `‖X‖ ≤ 1/2` and the
/// remaining level-set coordinates in `[−1, 1]`.
pub fn sample_points(n: usize, rho: f64, count: usize, seed: u64) -> Result<Vec<Chart>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cb = CoordBasis::new(n);
    let mut out = vec![Chart::base_point(n, rho)?];
    for _ in 0..count {
        let mut point: Vec<f64> = (0..4 * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        point[0] = rho;
        // |X|² = Σ(b²+t²)/4 ≤ 1/4 when every |b|,|t| ≤ 1/√(n−1)
        let bound = if n > 1 { 1.0 / ((n - 1) as f64).sqrt() } else { 0.0 };
        for a in 1..n {
            point[1 + cb.b(a)] *= bound;
            point[1 + cb.t(a)] *= bound;
        }
        out.push(Chart::new(n, point)?);
    }
    Ok(out)
}

/// One row of an Einstein residual sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub n: usize,
    pub rho: String,
    pub c: String,
    pub point: String,
    pub residual: f64,
}

pub fn einstein_rows(p: &FamilyParams<Rational>, off_centre: usize, seed: u64) -> Result<Vec<ResidualRow>> {
    let metric = AmbientMetric::new(p.n, p.c.to_f64())?;
    sample_points(p.n, p.rho.to_f64(), off_centre, seed)?
        .iter()
        .enumerate()
        .map(|(k, chart)| {
            Ok(ResidualRow {
                n: p.n,
                rho: p.rho.to_string(),
                c: p.c.to_string(),
                point: if k == 0 { "p_rho".into() } else { format!("offcentre_{k}") },
                residual: einstein_residual(&metric, chart)?,
            })
        })
        .collect()
}

pub fn write_residual_csv<W: Write>(rows: &[ResidualRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

/// Eigenvalues of the self-adjoint endomorphism `g⁻¹B`, ascending.
pub fn relative_eigenvalues(g: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = g.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let linv = chol.l().try_inverse().ok_or(Error::Singular)?;
    let sym = &linv * b * linv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let mut vals: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducedReport {
    /// Max deviation of the ambient Gram at `p_ρ` from `f dρ² ⊕ G_coord`.
    pub gram_error: f64,
    /// Max deviation of the intrinsic level-set Ricci eigenvalues from the
    /// `rᵢ` with multiplicity.
    pub intrinsic_ricci_error: f64,
    /// Same comparison for the Gauss-equation formula in floating point.
    pub formula_ricci_error: f64,
    pub expected: Vec<f64>,
    pub intrinsic: Vec<f64>,
}

impl InducedReport {
    pub fn passes(&self, gram_tol: f64, ricci_tol: f64) -> bool {
        self.gram_error < gram_tol
            && self.intrinsic_ricci_error < ricci_tol
            && self.formula_ricci_error < ricci_tol
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Compares the ambient metric at `p_ρ` against the exact level-set data.
pub fn induced_consistency(metric: &AmbientMetric, p: &FamilyParams<Rational>) -> Result<InducedReport> {
    if metric.n != p.n {
        return Err(Error::DimensionMismatch("metric and parameters disagree on n".into()));
    }
    let chart = Chart::base_point(p.n, p.rho.to_f64())?;
    let size = metric.dim();
    let g = metric.gram(&chart)?;

    let mut exact = vec![hypersurface::warp_function(p)?.v.to_f64()];
    exact.extend(hypersurface::coordinate_gram_values(p)?.iter().map(|x| x.to_f64()));
    let target = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(exact));
    let gram_error = max_abs(&(&g - target));

    let mut expected = Vec::with_capacity(size - 1);
    for (r, m) in hypersurface::principal_ricci(p).iter().zip(multiplicities(p.n)) {
        expected.extend(std::iter::repeat_n(r.to_f64(), m));
    }
    expected.sort_by(f64::total_cmp);

    let slice: Vec<usize> = (1..size).collect();
    let slice_jets = metric.jets(&chart, &slice)?.restrict(&slice);
    let intrinsic_ric = ricci_from_jets(&slice_jets)?;
    let intrinsic = relative_eigenvalues(&slice_jets.values(), &intrinsic_ric)?;

    let pf = FamilyParams::new(p.n, p.rho.to_f64(), p.c.to_f64())?;
    let formula = hypersurface::family_hypersurface_ricci(&pf)?;
    let mut formula_vals: Vec<f64> = formula.diagonal();
    let off_diag = (0..formula.rows())
        .flat_map(|i| (0..formula.cols()).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .fold(0.0_f64, |acc, (i, j)| acc.max(formula[(i, j)].abs()));
    formula_vals.sort_by(f64::total_cmp);

    Ok(InducedReport {
        gram_error,
        intrinsic_ricci_error: max_diff(&intrinsic, &expected),
        formula_ricci_error: max_diff(&formula_vals, &expected).max(off_diag),
        expected,
        intrinsic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn chart_domain() {
        assert!(Chart::new(2, vec![1.0, 1.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(matches!(
            Chart::new(2, vec![1.0, 2.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(Chart::base_point(1, -1.0), Err(Error::OutOfDomain(_))));
        assert_eq!(Chart::labels(1), ["rho", "phi~", "zeta~0", "zeta0"]);
    }

    #[test]
    fn base_point_gram_n2() {
        let m = AmbientMetric::new(2, 1.0).unwrap();
        let g = m.gram(&Chart::base_point(2, 1.0).unwrap()).unwrap();
        let expect = [3.0 / 8.0, 0.5, 0.5, 2.0 / 12.0, 1.5, 1.5, 0.5, 0.5];
        for i in 0..8 {
            for j in 0..8 {
                let e = if i == j { expect[i] } else { 0.0 };
                assert!((g[(i, j)] - e).abs() < 1e-12, "({i},{j}) {}", g[(i, j)]);
            }
        }
    }

    #[test]
    fn base_point_gram_n1_rho2() {
        let m = AmbientMetric::new(1, 0.0).unwrap();
        let g = m.gram(&Chart::base_point(1, 2.0).unwrap()).unwrap();
        let expect = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0 / 16.0, 1.0 / 16.0, 0.25, 0.25]));
        assert!(max_abs(&(g - expect)) < 1e-15);
    }

    #[test]
    fn symmetric_and_positive_off_centre() {
        for n in 1..=3 {
            let m = AmbientMetric::new(n, 0.5).unwrap();
            for chart in sample_points(n, 1.5, 3, 11).unwrap() {
                let g = m.gram(&chart).unwrap();
                assert_eq!(max_abs(&(&g - g.transpose())), 0.0);
                assert!(g.clone().cholesky().is_some());
            }
        }
    }

    fn complex_point(chart: &Chart) -> (Vec<Complex64>, Complex64, Vec<Complex64>) {
        let n = chart.n();
        let cb = CoordBasis::new(n);
        let x = chart.point();
        let xs = (1..n)
            .map(|a| Complex64::new(x[1 + cb.b(a)], x[1 + cb.t(a)]) * 0.5)
            .collect();
        let w0 = Complex64::new(x[1 + cb.zeta_tilde(0)], x[1 + cb.zeta(0)]) * 0.5;
        let ws = (1..n)
            .map(|a| Complex64::new(x[1 + cb.zeta_tilde(a)], -x[1 + cb.zeta(a)]) * 0.5)
            .collect();
        (xs, w0, ws)
    }

    #[test]
    fn terms_match_direct_complex_evaluation() {
        let (n, c) = (3, 0.7);
        let metric = AmbientMetric::new(n, c).unwrap();
        let cb = CoordBasis::new(n);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for chart in sample_points(n, 1.3, 2, 99).unwrap() {
            let terms = metric.terms(&chart).unwrap();
            let u: Vec<f64> = (0..4 * n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let quad = |m: &DMatrix<f64>| {
                let v = nalgebra::DVector::from_vec(u.clone());
                (v.transpose() * m * &v)[(0, 0)]
            };
            let (xs, w0, ws) = complex_point(&chart);
            let rho = chart.rho();
            let dx: Vec<Complex64> = (1..n)
                .map(|a| Complex64::new(u[1 + cb.b(a)], u[1 + cb.t(a)]) * 0.5)
                .collect();
            let dw0 = Complex64::new(u[1 + cb.zeta_tilde(0)], u[1 + cb.zeta(0)]) * 0.5;
            let dw: Vec<Complex64> = (1..n)
                .map(|a| Complex64::new(u[1 + cb.zeta_tilde(a)], -u[1 + cb.zeta(a)]) * 0.5)
                .collect();
            let norm: f64 = xs.iter().map(|x| x.norm_sqr()).sum();
            let s = 1.0 / (1.0 - norm);
            let gamma: Complex64 = xs.iter().zip(&dx).map(|(x, d)| x.conj() * d).sum();
            let fs = (rho + c) / rho * s * (dx.iter().map(|d| d.norm_sqr()).sum::<f64>() + s * gamma.norm_sqr());
            let vert = w0.conj() * dw0 - ws.iter().zip(&dw).map(|(w, d)| w.conj() * d).sum::<Complex64>();
            let theta = u[1 + cb.phi()] - 4.0 * vert.im + 2.0 * c * s * gamma.im;
            let contact = (rho + c) / (4.0 * rho * rho * (rho + 2.0 * c)) * theta * theta;
            let indefinite = -2.0 / rho * (dw0.norm_sqr() - dw.iter().map(|d| d.norm_sqr()).sum::<f64>());
            let beta = dw0 + xs.iter().zip(&dw).map(|(x, d)| x * d).sum::<Complex64>();
            let twisted = 4.0 * (rho + c) / (rho * rho) * s * beta.norm_sqr();
            let radial = (rho + 2.0 * c) / (4.0 * rho * rho * (rho + c)) * u[0] * u[0];
            assert_relative_eq!(quad(&terms.fubini_study), fs, epsilon = 1e-12);
            assert_relative_eq!(quad(&terms.contact), contact, epsilon = 1e-12);
            assert_relative_eq!(quad(&terms.indefinite), indefinite, epsilon = 1e-12);
            assert_relative_eq!(quad(&terms.twisted), twisted, epsilon = 1e-12);
            assert_relative_eq!(quad(&terms.radial), radial, epsilon = 1e-12);
        }
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let dim = 3;
        let entries = (0..dim * dim)
            .map(|k| Jet::constant(if k % (dim + 1) == 0 { 1.0 } else { 0.0 }, dim))
            .collect();
        let ric = ricci_from_jets(&MetricJets { size: dim, entries }).unwrap();
        assert_eq!(max_abs(&ric), 0.0);
    }

    #[test]
    fn unit_sphere_in_spherical_coordinates() {
        // dθ² + sin²θ dφ² has Ric = g
        let theta = Jet::variable(0, 0.8, 2);
        let sin = theta.compose(0.8f64.sin(), 0.8f64.cos(), -0.8f64.sin());
        let zero = Jet::constant(0.0, 2);
        let g = MetricJets {
            size: 2,
            entries: vec![Jet::constant(1.0, 2), zero.clone(), zero, &sin * &sin],
        };
        let ric = ricci_from_jets(&g).unwrap();
        assert!(max_abs(&(ric - g.values())) < 1e-14);
    }

    #[test]
    fn hyperbolic_case_is_einstein() {
        let m = AmbientMetric::new(1, 0.0).unwrap();
        let r = einstein_residual(&m, &Chart::base_point(1, 1.0).unwrap()).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn deformed_n2_is_einstein_off_centre() {
        let m = AmbientMetric::new(2, 1.0).unwrap();
        for chart in sample_points(2, 1.0, 1, 3).unwrap() {
            let r = einstein_residual(&m, &chart).unwrap();
            assert!(r < 1e-8, "{r}");
        }
    }

    #[test]
    fn induced_data_n3() {
        let p = FamilyParams::new(3, q(2, 1), q(1, 2)).unwrap();
        let report = induced_consistency(&AmbientMetric::new(3, 0.5).unwrap(), &p).unwrap();
        assert!(report.passes(1e-12, 1e-8), "{report:?}");
    }

    #[test]
    fn csv_rows() {
        let p = FamilyParams::new(1, q(1, 1), q(0, 1)).unwrap();
        let rows = einstein_rows(&p, 1, 7).unwrap();
        let mut buf = Vec::new();
        write_residual_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,rho,c,point,residual\n1,1,0,p_rho,"), "{text}");
        assert_eq!(text.lines().count(), 3);
    }
}
