//! Quillen super-connections `𝔸^σ(t) = 𝔸 + it v_σ` on trivial graded bundles over a chart.
//!
//! With `v = [[0, σ*], [σ, 0]]` the curvature is
//! `F(t) = −t²v² + it[𝔸, v] + 𝔸²`, the Chern form is `Str e^{F(t)}` and the
//! transgression form `η(t) = −Str(i v e^{F(t)})` satisfies `∂_t Ch = −dη`.

pub mod models;
pub mod product;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::{coordinate_jets, Coeff, Form, FormField, Jet, JetForm};
use crate::quadrature::{compact_order, finite_integral, half_line_integral};
use crate::relative::{p_chi, RelativeCochain, SupportDescriptor};
use crate::superlinalg::{nilpotent_exp, series_exp, HermitianEndo, JetSuperMatrix, ParitySplit, SuperMatrix};

pub use product::{b_forms, tensor_connection, tensor_morphism, BForms};

/// Spectral floor below which `v_σ²` counts as singular.
pub const CLEARANCE_FLOOR: f64 = 1e-12;

type MatrixEval = dyn Fn(&[f64], usize) -> Result<JetSuperMatrix> + Send + Sync;
type SigmaEval = dyn Fn(&[Jet]) -> Result<Vec<Jet>> + Send + Sync;

/// A super matrix of forms depending on the chart point.
#[derive(Clone)]
pub struct MatrixField {
    split: ParitySplit,
    dim: usize,
    eval: Arc<MatrixEval>,
}

impl fmt::Debug for MatrixField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixField").field("split", &self.split).field("dim", &self.dim).finish()
    }
}

impl MatrixField {
    pub fn new(
        split: ParitySplit,
        dim: usize,
        eval: impl Fn(&[f64], usize) -> Result<JetSuperMatrix> + Send + Sync + 'static,
    ) -> Self {
        MatrixField { split, dim, eval: Arc::new(eval) }
    }

    pub fn from_jets(
        split: ParitySplit,
        dim: usize,
        f: impl Fn(&[Jet]) -> Result<JetSuperMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self::new(split, dim, move |p, k| f(&coordinate_jets(p, k)))
    }

    pub fn zero(split: ParitySplit, dim: usize) -> Self {
        Self::new(split, dim, move |_, _| Ok(SuperMatrix::zero(split, dim)))
    }

    pub fn split(&self) -> ParitySplit {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval_jet(&self, p: &[f64], order: usize) -> Result<JetSuperMatrix> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        let m = (self.eval)(p, order)?;
        if m.split() != self.split || m.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.split.n(), got: m.n() });
        }
        Ok(m)
    }
}

/// A morphism `σ: E⁺ → E⁻` of trivial bundles; `sigma` returns the `minus × plus`
/// matrix row-major as jets of the coordinates.
#[derive(Clone)]
pub struct MorphismBundle {
    split: ParitySplit,
    dim: usize,
    sigma: Arc<SigmaEval>,
    growth: Option<(f64, f64)>,
    probes: Vec<Vec<f64>>,
}

impl fmt::Debug for MorphismBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MorphismBundle").field("split", &self.split).field("dim", &self.dim).finish()
    }
}

impl MorphismBundle {
    pub fn new(
        split: ParitySplit,
        dim: usize,
        sigma: impl Fn(&[Jet]) -> Result<Vec<Jet>> + Send + Sync + 'static,
    ) -> Self {
        MorphismBundle { split, dim, sigma: Arc::new(sigma), growth: None, probes: Vec::new() }
    }

    /// `(R, c)` with `v_σ²(x, ξ) ≥ c‖ξ‖²` for `‖ξ‖ ≥ R`.
    pub fn with_growth(mut self, r: f64, c: f64) -> Self {
        self.growth = Some((r, c));
        self
    }

    /// Points near `Supp σ` where cutoffs must be locally constant.
    pub fn with_probes(mut self, probes: Vec<Vec<f64>>) -> Self {
        self.probes = probes;
        self
    }

    pub fn split(&self) -> ParitySplit {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn growth(&self) -> Option<(f64, f64)> {
        self.growth
    }

    pub fn sigma_jets(&self, x: &[Jet]) -> Result<Vec<Jet>> {
        let s = (self.sigma)(x)?;
        if s.len() != self.split.plus * self.split.minus {
            return Err(Error::DimensionMismatch { expected: self.split.plus * self.split.minus, got: s.len() });
        }
        Ok(s)
    }

    /// `v_σ = [[0, σ*], [σ, 0]]` at coordinate jets.
    pub fn v_matrix(&self, x: &[Jet]) -> Result<JetSuperMatrix> {
        let s = self.sigma_jets(x)?;
        let np = self.split.plus;
        let dim = self.dim;
        Ok(SuperMatrix::from_fn(self.split, dim, |i, j| {
            let c = if i >= np && j < np {
                s[(i - np) * np + j]
            } else if i < np && j >= np {
                s[(j - np) * np + i].conj()
            } else {
                Jet::zero()
            };
            JetForm::scalar(dim, c)
        }))
    }

    /// `sm(v_σ²)` at a point.
    pub fn spectral_gap(&self, p: &[f64]) -> Result<f64> {
        let v = self.v_matrix(&coordinate_jets(p, 0))?.values();
        let v2 = v.mul(&v).degree_zero_values();
        Ok(crate::superlinalg::smallest_eigenvalue(&HermitianEndo::new(v2)?))
    }

    /// `Supp σ` as the set where `v_σ²` is singular; clearance is `sm(v_σ²)`.
    pub fn support(&self) -> SupportDescriptor {
        let (a, b) = (self.clone(), self.clone());
        SupportDescriptor::new(
            move |p| a.spectral_gap(p).map_or(true, |h| h <= CLEARANCE_FLOOR),
            move |p| b.spectral_gap(p).map_or(0.0, |h| if h <= CLEARANCE_FLOOR { 0.0 } else { h }),
        )
        .with_probes(self.probes.clone())
    }
}

/// An odd super-connection `𝔸 = d + ω` without degree-0 term.
#[derive(Clone, Debug)]
pub struct SuperConnectionData {
    omega: Option<MatrixField>,
    split: ParitySplit,
    dim: usize,
}

impl SuperConnectionData {
    /// `𝔸 = d`.
    pub fn trivial(split: ParitySplit, dim: usize) -> Self {
        SuperConnectionData { omega: None, split, dim }
    }

    /// Validates oddness and the absence of a degree-0 part at `samples`.
    pub fn new(omega: MatrixField, samples: &[Vec<f64>]) -> Result<Self> {
        for p in samples {
            let w = omega.eval_jet(p, 0)?;
            if !w.is_degree_positive() {
                return Err(Error::DegreeZeroPart);
            }
            if !w.is_zero_matrix() && w.total_parity() != Some(1) {
                return Err(Error::WrongParity("super-connection form must be odd"));
            }
        }
        Ok(SuperConnectionData { split: omega.split(), dim: omega.dim(), omega: Some(omega) })
    }

    pub fn omega(&self) -> Option<&MatrixField> {
        self.omega.as_ref()
    }

    pub fn split(&self) -> ParitySplit {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, p: &[f64], order: usize) -> Result<JetSuperMatrix> {
        match &self.omega {
            Some(w) => w.eval_jet(p, order),
            None => Ok(SuperMatrix::zero(self.split, self.dim)),
        }
    }
}

/// Pointwise data of `F(t) = −t²·v² + t·i[𝔸,v] + 𝔸²`.
#[derive(Clone)]
pub struct QuillenPoint<S> {
    v: SuperMatrix<S>,
    v2: SuperMatrix<S>,
    comm: SuperMatrix<S>,
    a2: SuperMatrix<S>,
    gap: f64,
    scalar_v2: Option<S>,
}

impl<S: Coeff> fmt::Debug for QuillenPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuillenPoint").field("gap", &self.gap).finish()
    }
}

impl QuillenPoint<Jet> {
    /// Data at `p` carrying `order` jet orders.
    pub fn jets(b: &MorphismBundle, a: &SuperConnectionData, p: &[f64], order: usize) -> Result<Self> {
        if b.split != a.split || b.dim != a.dim {
            return Err(Error::DimensionMismatch { expected: b.split.n(), got: a.split.n() });
        }
        if p.len() != b.dim {
            return Err(Error::DimensionMismatch { expected: b.dim, got: p.len() });
        }
        if order + 1 > crate::exterior::MAX_ORDER {
            return Err(Error::JetsUnavailable { needed: order + 1, available: crate::exterior::MAX_ORDER });
        }
        let x = coordinate_jets(p, order + 1);
        let v_full = b.v_matrix(&x)?;
        let dv = v_full.d_graded()?;
        let v = v_full.truncate(order);
        let w_full = a.eval(p, order + 1)?;
        let dw = w_full.d_graded()?;
        let w = w_full.truncate(order);
        let comm = dv.add(&w.mul(&v)).add(&v.mul(&w));
        let a2 = dw.add(&w.mul(&w));
        let v2 = v.mul(&v);
        let gap = crate::superlinalg::smallest_eigenvalue(&HermitianEndo::new(v2.degree_zero_values())?);
        let scalar_v2 = scalar_part(&v2);
        Ok(QuillenPoint { v, v2, comm, a2, gap, scalar_v2 })
    }

    pub fn values(&self) -> QuillenPoint<Complex64> {
        QuillenPoint {
            v: self.v.values(),
            v2: self.v2.values(),
            comm: self.comm.values(),
            a2: self.a2.values(),
            gap: self.gap,
            scalar_v2: self.scalar_v2.map(|c| c.value()),
        }
    }
}

impl<S: Coeff> QuillenPoint<S> {
    pub fn v(&self) -> &SuperMatrix<S> {
        &self.v
    }

    /// `v²` at the point.
    pub fn v_squared(&self) -> &SuperMatrix<S> {
        &self.v2
    }

    /// `[𝔸, v]`.
    pub fn commutator(&self) -> &SuperMatrix<S> {
        &self.comm
    }

    /// `𝔸²`.
    pub fn a_squared(&self) -> &SuperMatrix<S> {
        &self.a2
    }

    /// `sm(v²)` at the point.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn curvature(&self, t: f64) -> SuperMatrix<S> {
        self.v2
            .scale(Complex64::new(-t * t, 0.0))
            .add(&self.comm.scale(Complex64::new(0.0, t)))
            .add(&self.a2)
    }

    /// `e^{F(t)}`; when `v² = c·1` this is `e^{−t²c}·e^{N}` with `N = it[𝔸,v] + 𝔸²` nilpotent.
    pub fn exp_curvature(&self, t: f64) -> SuperMatrix<S> {
        match self.scalar_v2 {
            Some(c) => {
                let n = self.comm.scale(Complex64::new(0.0, t)).add(&self.a2);
                nilpotent_exp(&n)
                    .expect("degree-positive by construction")
                    .mul_coeff(c.scale(Complex64::new(-t * t, 0.0)).exp())
            }
            None => series_exp(&self.curvature(t)),
        }
    }

    /// `e^{F(t)}` by scaling and squaring, ignoring any scalar structure of `v²`.
    pub fn exp_curvature_series(&self, t: f64) -> SuperMatrix<S> {
        series_exp(&self.curvature(t))
    }

    /// `Ch(σ, 𝔸, t) = Str e^{F(t)}`.
    pub fn chern(&self, t: f64) -> Form<S> {
        self.exp_curvature(t).supertrace()
    }

    /// `η(σ, 𝔸, t) = −Str(i v e^{F(t)})`.
    pub fn eta(&self, t: f64) -> Form<S> {
        self.v.mul(&self.exp_curvature(t)).supertrace().scale(Complex64::new(0.0, -1.0))
    }
}

const SCALAR_TOL: f64 = 1e-13;

fn jet_gap(a: &Jet, b: &Jet) -> f64 {
    let d = *a - *b;
    let mut m = d.val().norm();
    for k in 0..crate::exterior::MAX_DIM {
        m = m.max(d.grad(k).norm());
        for l in 0..crate::exterior::MAX_DIM {
            m = m.max(d.hess(k, l).norm());
        }
    }
    m
}

/// `Some(c)` when `v² = c·1` up to rounding, jets included.
fn scalar_part(v2: &JetSuperMatrix) -> Option<Jet> {
    let c = v2.get(0, 0).get(0);
    let scale = c.val().norm().max(1.0);
    let zero = Jet::zero();
    for i in 0..v2.n() {
        for j in 0..v2.n() {
            let want = if i == j { &c } else { &zero };
            if jet_gap(&v2.get(i, j).get(0), want) > SCALAR_TOL * scale {
                return None;
            }
        }
    }
    Some(c)
}

fn pointwise(
    b: &MorphismBundle,
    a: &SuperConnectionData,
    f: impl Fn(&QuillenPoint<Jet>, usize) -> Result<JetForm> + Send + Sync + 'static,
) -> FormField {
    let (b, a) = (b.clone(), a.clone());
    FormField::new(b.dim, move |p, k| f(&QuillenPoint::jets(&b, &a, p, k)?, k))
}

/// The curvature `F(σ, 𝔸, t)` as a matrix field.
pub fn curvature(b: &MorphismBundle, a: &SuperConnectionData, t: f64) -> MatrixField {
    let (bb, aa) = (b.clone(), a.clone());
    MatrixField::new(b.split, b.dim, move |p, k| Ok(QuillenPoint::jets(&bb, &aa, p, k)?.curvature(t)))
}

/// `v_σ` as a matrix field.
pub fn v_sigma(b: &MorphismBundle) -> MatrixField {
    let bb = b.clone();
    MatrixField::from_jets(b.split, b.dim, move |x| bb.v_matrix(x))
}

/// `Ch(σ, 𝔸, t)`.
pub fn chern_form(b: &MorphismBundle, a: &SuperConnectionData, t: f64) -> FormField {
    pointwise(b, a, move |q, k| Ok(if k == 0 { q.values().chern(t).to_jets() } else { q.chern(t) }))
}

/// `Ch(𝔸) = Str e^{𝔸²}`.
pub fn chern_of_connection(b: &MorphismBundle, a: &SuperConnectionData) -> FormField {
    chern_form(b, a, 0.0)
}

/// `η(σ, 𝔸, t)`.
pub fn eta_form(b: &MorphismBundle, a: &SuperConnectionData, t: f64) -> FormField {
    pointwise(b, a, move |q, k| Ok(if k == 0 { q.values().eta(t).to_jets() } else { q.eta(t) }))
}

fn eta_integrand(q: &QuillenPoint<Jet>, k: usize) -> impl Fn(f64) -> Result<JetForm> + '_ {
    let vals = (k == 0).then(|| q.values());
    move |t| Ok(match &vals {
        Some(v) => v.eta(t).to_jets(),
        None => q.eta(t),
    })
}

/// `β(σ, 𝔸, t_lo) = ∫_{t_lo}^∞ η(σ, 𝔸, s) ds` on `N ∖ Supp σ`.
pub fn beta_form(b: &MorphismBundle, a: &SuperConnectionData, t_lo: f64) -> FormField {
    pointwise(b, a, move |q, k| beta_at(q, k, t_lo))
}

pub(crate) fn beta_at(q: &QuillenPoint<Jet>, k: usize, t_lo: f64) -> Result<JetForm> {
    if q.gap <= CLEARANCE_FLOOR {
        return Err(Error::Clearance(Vec::new()));
    }
    half_line_integral(eta_integrand(q, k), t_lo, q.gap)
}

/// `δ(t) = ∫_0^t η(σ, 𝔸, s) ds`.
pub fn delta_form(b: &MorphismBundle, a: &SuperConnectionData, t: f64) -> FormField {
    pointwise(b, a, move |q, k| {
        if t == 0.0 {
            return Ok(JetForm::zero(q.v.dim()));
        }
        finite_integral(eta_integrand(q, k), 0.0, t, compact_order())
    })
}

fn restore_point(f: FormField) -> FormField {
    let g = f.clone();
    FormField::new(f.dim(), move |p, k| {
        g.eval_jet(p, k).map_err(|e| match e {
            Error::Clearance(v) if v.is_empty() => Error::Clearance(p.to_vec()),
            e => e,
        })
    })
}

/// `Ch_rel(σ) = [Ch(𝔸), β(σ, 𝔸)]`.
pub fn ch_rel(b: &MorphismBundle, a: &SuperConnectionData) -> RelativeCochain {
    let alpha = chern_of_connection(b, a);
    let beta = restore_point(beta_form(b, a, 0.0));
    RelativeCochain::new(alpha, beta, b.support(), 0)
}

/// `(Ch(σ, 𝔸, t), β(σ, 𝔸, t))`.
pub fn ch_rel_at(b: &MorphismBundle, a: &SuperConnectionData, t: f64) -> RelativeCochain {
    RelativeCochain::new(chern_form(b, a, t), restore_point(beta_form(b, a, t)), b.support(), 0)
}

/// `c(σ, 𝔸, χ) = χ Ch(𝔸) + dχ ∧ β(σ, 𝔸)`.
pub fn ch_sup_rep(b: &MorphismBundle, a: &SuperConnectionData, chi: &FormField) -> Result<FormField> {
    p_chi(&ch_rel(b, a), chi)
}

/// `χ δ(1) + (χ − 1) β(σ, 𝔸, 1)`, whose `d` is `c(σ, 𝔸, χ) − Ch(σ, 𝔸, 1)`.
pub fn retard_transgression(b: &MorphismBundle, a: &SuperConnectionData, chi: &FormField) -> FormField {
    let delta = delta_form(b, a, 1.0);
    let beta1 = restore_point(beta_form(b, a, 1.0));
    let one_minus = FormField::one(b.dim).sub(chi);
    chi.wedge(&delta).sub(&one_minus.guarded_wedge(&beta1))
}

/// Least-squares fit of `log‖e^{F(t)}‖ ≈ a + m·log(1+t) − h·t²` on the given times;
/// returns `(h, m)`.
pub fn decay_fit(q: &QuillenPoint<Complex64>, ts: &[f64]) -> Result<(f64, f64)> {
    if ts.len() < 3 {
        return Err(Error::Config("decay fit needs at least three times".into()));
    }
    let rows: Vec<[f64; 3]> = ts.iter().map(|&t| [1.0, (1.0 + t).ln(), -t * t]).collect();
    let a = nalgebra::DMatrix::from_fn(ts.len(), 3, |i, j| rows[i][j]);
    let y = nalgebra::DVector::from_iterator(
        ts.len(),
        ts.iter().map(|&t| crate::superlinalg::graded_norm(&q.exp_curvature(t)).ln()),
    );
    let sol = a.svd(true, true).solve(&y, 1e-14).map_err(|e| Error::Config(e.to_string()))?;
    Ok((sol[2], sol[1]))
}

#[cfg(test)]
mod tests {
    use super::models::{bott, bott_perturbed_connection, cotangent_circle};
    use super::*;
    use crate::exterior::FormValue;
    use crate::exterior::smooth_cutoff;
    use crate::relative::{integrate_compact, IntegrationBox};
    use crate::superlinalg::graded_exp;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // dz = dx + i dy, dz̄ = dx − i dy on the chart (x, y)
    fn dz(conj: bool) -> FormValue {
        FormValue::dx(2, 1) + FormValue::dx(2, 2).scale(z(0.0, if conj { -1.0 } else { 1.0 }))
    }

    #[test]
    fn bott_curvature_matches_closed_form() {
        let (b, a) = bott();
        let (x, y, t) = (0.7, -0.4, 1.3);
        let f = curvature(&b, &a, t).eval_jet(&[x, y], 0).unwrap().values();
        let r2 = x * x + y * y;
        let diag = FormValue::scalar(2, z(-t * t * r2, 0.0));
        assert!(f.get(0, 0).max_abs_diff(&diag) < 1e-14);
        assert!(f.get(1, 1).max_abs_diff(&diag) < 1e-14);
        assert!(f.get(0, 1).max_abs_diff(&dz(true).scale(z(0.0, -t))) < 1e-14);
        assert!(f.get(1, 0).max_abs_diff(&dz(false).scale(z(0.0, -t))) < 1e-14);
    }

    #[test]
    fn bott_exponential_chern_and_eta() {
        let (b, a) = bott();
        let (x, y, t): (f64, f64, f64) = (0.3, 0.8, 0.9);
        let r2 = x * x + y * y;
        let g = (-t * t * r2).exp();
        let f = curvature(&b, &a, t).eval_jet(&[x, y], 0).unwrap().values();
        let e = graded_exp(&f).unwrap();
        let dzdzb = dz(false).wedge(&dz(true));
        let want00 = (FormValue::one(2) - dzdzb.scale(z(t * t / 2.0, 0.0))).scale(z(g, 0.0));
        assert!(e.get(0, 0).max_abs_diff(&want00) < 1e-13);
        let ch = chern_form(&b, &a, t).eval(&[x, y]).unwrap();
        assert!(ch.max_abs_diff(&dzdzb.scale(z(-g * t * t, 0.0))) < 1e-13);
        let eta = eta_form(&b, &a, t).eval(&[x, y]).unwrap();
        let zc = z(x, y);
        let want = (dz(false).scale(zc.conj()) - dz(true).scale(zc)).scale(z(-t * g, 0.0));
        assert!(eta.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn bott_beta_is_angular_form() {
        let (b, a) = bott();
        for p in [[0.5, 0.2], [-1.3, 0.9], [0.05, -0.02]] {
            let beta = beta_form(&b, &a, 0.0).eval(&p).unwrap();
            let r2 = p[0] * p[0] + p[1] * p[1];
            let want = (FormValue::dx(2, 2).scale(z(p[0], 0.0)) - FormValue::dx(2, 1).scale(z(p[1], 0.0)))
                .scale(z(0.0, -1.0 / r2));
            assert!(beta.max_abs_diff(&want) < 1e-10 * want.max_abs(), "{p:?}");
        }
        assert!(matches!(beta_form(&b, &a, 0.0).eval(&[0.0, 0.0]), Err(Error::Clearance(_))));
    }

    #[test]
    fn transgression_identity() {
        let (b, _) = bott();
        let a = bott_perturbed_connection();
        let (p, t, h) = ([0.6, -0.5], 0.8, 1e-4);
        let lhs = chern_form(&b, &a, t + h).eval(&p).unwrap() - chern_form(&b, &a, t - h).eval(&p).unwrap();
        let lhs = lhs.scale(z(0.5 / h, 0.0));
        let rhs = eta_form(&b, &a, t).d().eval(&p).unwrap();
        assert!((lhs + rhs).max_abs() < 1e-6);
    }

    #[test]
    fn tstar_curvature_and_beta() {
        let (b, a) = cotangent_circle();
        for (theta, xi) in [(0.4, 0.8), (-1.1, 1.5), (2.0, -0.8), (0.3, -2.0)] {
            let beta = beta_form(&b, &a, 0.0).eval(&[theta, xi]).unwrap();
            let want = if xi > 0.0 { FormValue::dx(2, 1).scale(z(0.0, -1.0)) } else { FormValue::zero(2) };
            assert!(beta.max_abs_diff(&want) < 1e-10, "{theta},{xi}: {beta:?}");
        }
    }

    #[test]
    fn cocycle_and_connection_change() {
        let (b, _) = bott();
        let a = bott_perturbed_connection();
        let c = ch_rel(&b, &a);
        for p in [[0.6, 0.1], [-0.3, 0.45]] {
            let dch = c.alpha().d().eval(&p).unwrap();
            assert!(dch.max_abs() < 1e-12);
            let rel = c.alpha().eval(&p).unwrap() - c.beta().d().eval(&p).unwrap();
            assert!(rel.max_abs() < 1e-8, "{rel:?}");
        }
    }

    #[test]
    fn scalar_shortcut_matches_series() {
        let (b, _) = bott();
        let a = bott_perturbed_connection();
        let q = QuillenPoint::jets(&b, &a, &[1.1, 0.5], 1).unwrap();
        assert!(q.scalar_v2.is_some());
        for t in [0.0, 0.4, 2.5] {
            let (x, y) = (q.exp_curvature(t), q.exp_curvature_series(t));
            assert!(x.max_abs_diff(&y) < 1e-12, "{t}");
        }
    }

    #[test]
    fn shifted_representative() {
        let (b, _) = bott();
        let a = bott_perturbed_connection();
        let t = 0.7;
        let p = [1.1, -0.6];
        let delta = delta_form(&b, &a, t);
        let da = chern_of_connection(&b, &a).eval(&p).unwrap() - chern_form(&b, &a, t).eval(&p).unwrap();
        assert!(da.max_abs_diff(&delta.d().eval(&p).unwrap()) < 1e-9);
        let db = beta_form(&b, &a, 0.0).eval(&p).unwrap() - beta_form(&b, &a, t).eval(&p).unwrap();
        assert!(db.max_abs_diff(&delta.eval(&p).unwrap()) < 1e-9);
    }

    #[test]
    fn retard_transgression_identity() {
        let (b, a) = bott();
        let chi = smooth_cutoff(2, 0.3, 1.5).unwrap();
        let c = ch_sup_rep(&b, &a, &chi).unwrap();
        let w = retard_transgression(&b, &a, &chi);
        for p in [[0.7, 0.4], [0.2, 0.1], [1.5, 0.2]] {
            let lhs = c.eval(&p).unwrap() - chern_form(&b, &a, 1.0).eval(&p).unwrap();
            let rhs = w.d().eval(&p).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-8, "{p:?}: {:e}", lhs.max_abs_diff(&rhs));
        }
    }

    #[test]
    fn decay_rate_matches_gap() {
        let (b, _) = bott();
        let a = bott_perturbed_connection();
        let q = QuillenPoint::jets(&b, &a, &[0.8, 0.9], 0).unwrap().values();
        let ts: Vec<f64> = (1..=10).map(f64::from).collect();
        let (h, _) = decay_fit(&q, &ts).unwrap();
        assert!((h - q.gap()).abs() < 1e-3 * q.gap(), "{h} vs {}", q.gap());
    }

    #[test]
    fn compact_class_is_connection_independent() {
        let (b, a0) = bott();
        let a1 = bott_perturbed_connection();
        let chi = smooth_cutoff(2, 0.25, 4.0).unwrap();
        let region = IntegrationBox::cube(2, 2.0).with_panels(4);
        let i0 = integrate_compact(&ch_sup_rep(&b, &a0, &chi).unwrap(), &region, 24).unwrap();
        let i1 = integrate_compact(&ch_sup_rep(&b, &a1, &chi).unwrap(), &region, 24).unwrap();
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        assert!((i0 - two_pi_i).norm() < 1e-6 * two_pi_i.norm(), "{i0}");
        assert!((i1 - i0).norm() < 1e-6 * two_pi_i.norm(), "{i1}");
    }
}
