//! Relative de Rham cochains `(α, β)` with `α` on `N` and `β` on `N∖F`.
//!
//! `d_rel(α, β) = (dα, α − dβ)`. Products of cochains over `F₁` and `F₂` use a
//! partition of unity `(Φ₁, Φ₂)` of `N∖(F₁∩F₂)` subordinate to `(N∖F₁, N∖F₂)`;
//! `p_χ` turns a cochain into a global form, and the integrals here are
//! tensor Gauss rules on boxes or along fibers.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::form::mask_sign;
use crate::exterior::{FormField, FormValue, JetForm};
use crate::quadrature::{hermite, legendre_on, pairwise_sum};

type Pred = dyn Fn(&[f64]) -> bool + Send + Sync;
type Dist = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Operational description of the closed set `F`.
///
/// `clearance(p) > 0` certifies that `p ∉ F` with room to evaluate `β`; `probes`
/// are points close to `F` where cutoffs must already be locally constant.
#[derive(Clone)]
pub struct SupportDescriptor {
    contains: Arc<Pred>,
    clearance: Arc<Dist>,
    probes: Vec<Vec<f64>>,
}

impl fmt::Debug for SupportDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SupportDescriptor").field("probes", &self.probes.len()).finish()
    }
}

impl SupportDescriptor {
    pub fn new(
        contains: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        clearance: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SupportDescriptor { contains: Arc::new(contains), clearance: Arc::new(clearance), probes: Vec::new() }
    }

    /// `F = ∅`.
    pub fn empty() -> Self {
        Self::new(|_| false, |_| f64::INFINITY)
    }

    /// `F = N`.
    pub fn everything() -> Self {
        Self::new(|_| true, |_| 0.0)
    }

    /// `F = {p : ‖p_coords‖ ≤ radius}`, clearance `‖p_coords‖ − radius`.
    pub fn ball(coords: &[usize], radius: f64) -> Self {
        let c1 = coords.to_vec();
        let c2 = coords.to_vec();
        let norm = |c: &[usize], p: &[f64]| c.iter().map(|&i| p[i] * p[i]).sum::<f64>().sqrt();
        Self::new(move |p| norm(&c1, p) <= radius, move |p| (norm(&c2, p) - radius).max(0.0))
    }

    pub fn with_probes(mut self, probes: Vec<Vec<f64>>) -> Self {
        self.probes = probes;
        self
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        (self.contains)(p)
    }

    pub fn clearance(&self, p: &[f64]) -> f64 {
        (self.clearance)(p)
    }

    pub fn probes(&self) -> &[Vec<f64>] {
        &self.probes
    }

    /// `F₁ ∩ F₂`.
    pub fn intersect(&self, o: &SupportDescriptor) -> SupportDescriptor {
        let (a, b) = (self.clone(), o.clone());
        let (c, e) = (self.clone(), o.clone());
        let mut probes = self.probes.clone();
        probes.extend(o.probes.iter().cloned());
        SupportDescriptor {
            contains: Arc::new(move |p| a.contains(p) && b.contains(p)),
            clearance: Arc::new(move |p| c.clearance(p).max(e.clearance(p))),
            probes,
        }
    }
}

/// A relative cochain of degree `degree`: `α` has that degree, `β` one less.
#[derive(Clone, Debug)]
pub struct RelativeCochain {
    alpha: FormField,
    beta: FormField,
    support: SupportDescriptor,
    degree: usize,
}

fn gate(beta: FormField, support: &SupportDescriptor) -> FormField {
    let s = support.clone();
    FormField::new(beta.dim(), move |p, k| {
        if s.clearance(p) <= 0.0 {
            return Err(Error::Clearance(p.to_vec()));
        }
        beta.eval_jet(p, k)
    })
}

fn sign(k: usize) -> Complex64 {
    Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
}

impl RelativeCochain {
    /// `β` is only evaluated where `support.clearance > 0`.
    pub fn new(alpha: FormField, beta: FormField, support: SupportDescriptor, degree: usize) -> Self {
        assert_eq!(alpha.dim(), beta.dim(), "α and β on different charts");
        let beta = gate(beta, &support);
        RelativeCochain { alpha, beta, support, degree }
    }

    /// `(α, 0)` over `F = N`.
    pub fn absolute(alpha: FormField, degree: usize) -> Self {
        let dim = alpha.dim();
        RelativeCochain { alpha, beta: FormField::zero(dim), support: SupportDescriptor::everything(), degree }
    }

    /// The unit `(1, 0)`.
    pub fn unit(dim: usize) -> Self {
        Self::absolute(FormField::one(dim), 0)
    }

    pub fn alpha(&self) -> &FormField {
        &self.alpha
    }

    pub fn beta(&self) -> &FormField {
        &self.beta
    }

    pub fn support(&self) -> &SupportDescriptor {
        &self.support
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn sub(&self, o: &RelativeCochain) -> RelativeCochain {
        RelativeCochain {
            alpha: self.alpha.sub(&o.alpha),
            beta: self.beta.sub(&o.beta),
            support: self.support.intersect(&o.support),
            degree: self.degree,
        }
    }
}

/// `d_rel(α, β) = (dα, α|_{N∖F} − dβ)`.
pub fn d_rel(c: &RelativeCochain) -> RelativeCochain {
    RelativeCochain {
        alpha: c.alpha.d(),
        beta: gate(c.alpha.sub(&c.beta.d()), &c.support),
        support: c.support.clone(),
        degree: c.degree + 1,
    }
}

/// `a₁ ◇_Φ a₂ = (α₁∧α₂, Φ₁β₁∧α₂ + (−1)^{k₁}α₁∧Φ₂β₂ − (−1)^{k₁}dΦ₁∧β₁∧β₂)`.
pub fn product_phi(a1: &RelativeCochain, a2: &RelativeCochain, phi: &(FormField, FormField)) -> RelativeCochain {
    let (phi1, phi2) = phi;
    let s = sign(a1.degree);
    let t1 = phi1.guarded_wedge(&a1.beta).wedge(&a2.alpha);
    let t2 = a1.alpha.wedge(&phi2.guarded_wedge(&a2.beta)).scale(s);
    let t3 = phi1.d().guarded_wedge(&a1.beta.wedge(&a2.beta)).scale(-s);
    let support = a1.support.intersect(&a2.support);
    RelativeCochain {
        alpha: a1.alpha.wedge(&a2.alpha),
        beta: gate(t1.add(&t2).add(&t3), &support),
        support,
        degree: a1.degree + a2.degree,
    }
}

/// `(0, (−1)^{k₁}(Φ₁ − Φ₁')β₁∧β₂)`, whose `d_rel` is `a₁◇_Φa₂ − a₁◇_{Φ'}a₂` for cocycles.
pub fn partition_change_witness(
    a1: &RelativeCochain,
    a2: &RelativeCochain,
    phi: &(FormField, FormField),
    phi_prime: &(FormField, FormField),
) -> RelativeCochain {
    let dim = a1.dim();
    let diff = phi.0.sub(&phi_prime.0).scale(sign(a1.degree));
    let support = a1.support.intersect(&a2.support);
    RelativeCochain {
        alpha: FormField::zero(dim),
        beta: gate(diff.guarded_wedge(&a1.beta.wedge(&a2.beta)), &support),
        support,
        degree: a1.degree + a2.degree,
    }
}

/// `p_χ(α, β) = χα + dχ∧β`.
///
/// Fails with [`Error::NotFlatNearSupport`] if `dχ` is nonzero at one of the
/// support probes; the returned field reports the same error at any point of
/// zero clearance where `dχ ≠ 0`.
pub fn p_chi(c: &RelativeCochain, chi: &FormField) -> Result<FormField> {
    let dchi = chi.d();
    for p in c.support.probes() {
        if !dchi.eval(p)?.is_zero() {
            return Err(Error::NotFlatNearSupport(p.clone()));
        }
    }
    let (alpha, beta, support) = (c.alpha.clone(), c.beta.clone(), c.support.clone());
    let chi = chi.clone();
    Ok(FormField::new(c.dim(), move |p, k| {
        let mut out = chi.eval_jet(p, k)?.wedge(&alpha.eval_jet(p, k)?);
        let dc = dchi.eval_jet(p, k)?;
        if !dc.is_zero() {
            if support.clearance(p) <= 0.0 {
                return Err(Error::NotFlatNearSupport(p.to_vec()));
            }
            out += &dc.wedge(&beta.eval_jet(p, k)?);
        }
        Ok(out)
    }))
}

/// `(−1)^{k₁+1}χ₁dχ₂∧Φ₁β₁∧β₂ + (−1)^{k₁}χ₂dχ₁∧β₁∧Φ₂β₂`: its `d` is
/// `p_{χ₁}(a₁)∧p_{χ₂}(a₂) − p_{χ₁χ₂}(a₁◇_Φa₂)` for cocycles.
pub fn product_transgression(
    a1: &RelativeCochain,
    a2: &RelativeCochain,
    chi1: &FormField,
    chi2: &FormField,
    phi: &(FormField, FormField),
) -> FormField {
    let s = sign(a1.degree);
    let first = chi1.wedge(&chi2.d()).guarded_wedge(&phi.0.guarded_wedge(&a1.beta).wedge(&a2.beta)).scale(-s);
    let second = chi2.wedge(&chi1.d()).guarded_wedge(&a1.beta.wedge(&phi.1.guarded_wedge(&a2.beta))).scale(s);
    first.add(&second)
}

/// `[lo, hi]` bounds per axis with a number of equal panels per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationBox {
    pub bounds: Vec<(f64, f64)>,
    pub panels: usize,
}

impl IntegrationBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        IntegrationBox { bounds, panels: 1 }
    }

    pub fn cube(dim: usize, half_width: f64) -> Self {
        Self::new(vec![(-half_width, half_width); dim])
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = panels.max(1);
        self
    }

    fn axis_rule(&self, axis: usize, order: usize) -> Vec<(f64, f64)> {
        let (a, b) = self.bounds[axis];
        let w = (b - a) / self.panels as f64;
        (0..self.panels)
            .flat_map(|k| legendre_on(a + k as f64 * w, a + (k + 1) as f64 * w, order))
            .collect()
    }
}

/// Tensor-product cubature `Σ w f(x)` over per-axis rules; the leading axis is spread over threads.
fn tensor_sum(
    rules: &[Vec<(f64, f64)>],
    f: &(impl Fn(&[f64]) -> Result<FormValue> + Sync),
    dim_out: usize,
) -> Result<FormValue> {
    let n = rules.len();
    let inner = |x0: f64| -> Result<FormValue> {
        let mut idx = vec![0usize; n];
        let mut p = vec![0.0; n];
        p[0] = x0;
        let mut terms = Vec::new();
        loop {
            let mut w = 1.0;
            for a in 1..n {
                let (x, wa) = rules[a][idx[a]];
                p[a] = x;
                w *= wa;
            }
            terms.push(f(&p)?.scale(Complex64::new(w, 0.0)));
            let mut a = 1;
            loop {
                if a >= n {
                    return Ok(pairwise_sum(terms, |x, y| x + y).unwrap_or_else(|| FormValue::zero(dim_out)));
                }
                idx[a] += 1;
                if idx[a] < rules[a].len() {
                    break;
                }
                idx[a] = 0;
                a += 1;
            }
        }
    };
    let slices: Vec<Result<FormValue>> =
        rules[0].par_iter().map(|&(x0, w0)| Ok(inner(x0)?.scale(Complex64::new(w0, 0.0)))).collect();
    let slices = slices.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(slices, |x, y| x + y).unwrap_or_else(|| FormValue::zero(dim_out)))
}

/// `∫_box ω` for the top-degree part with orientation `dx₁∧⋯∧dx_m`.
pub fn integrate_compact(w: &FormField, region: &IntegrationBox, order: usize) -> Result<Complex64> {
    let m = w.dim();
    if region.bounds.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: region.bounds.len() });
    }
    if m == 0 {
        return Ok(w.eval(&[])?.get(0));
    }
    let rules: Vec<_> = (0..m).map(|a| region.axis_rule(a, order)).collect();
    let top = (1usize << m) - 1;
    let f = |p: &[f64]| Ok(FormValue::scalar(0, w.eval(p)?.get(top)));
    Ok(tensor_sum(&rules, &f, 0)?.get(0))
}

/// Fiber integration mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntegrationMode {
    Compact,
    Gaussian,
}

impl FromStr for IntegrationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compact" => Ok(IntegrationMode::Compact),
            "gaussian" => Ok(IntegrationMode::Gaussian),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

/// Quadrature for the fiber directions.
#[derive(Clone, Debug, PartialEq)]
pub enum FiberRule {
    /// Gauss–Legendre on a box.
    Compact { region: IntegrationBox, order: usize },
    /// Gauss–Hermite for integrands behaving like `e^{−rate·‖x‖²}`.
    Gaussian { rate: f64, order: usize },
}

impl FiberRule {
    pub fn mode(&self) -> IntegrationMode {
        match self {
            FiberRule::Compact { .. } => IntegrationMode::Compact,
            FiberRule::Gaussian { .. } => IntegrationMode::Gaussian,
        }
    }

    fn axis_rules(&self, d: usize) -> Result<Vec<Vec<(f64, f64)>>> {
        match self {
            FiberRule::Compact { region, order } => {
                if region.bounds.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, got: region.bounds.len() });
                }
                Ok((0..d).map(|a| region.axis_rule(a, *order)).collect())
            }
            FiberRule::Gaussian { rate, order } => {
                let s = rate.sqrt();
                let rule: Vec<(f64, f64)> =
                    hermite(*order).iter().map(|&(y, w)| (y / s, w * (y * y).exp() / s)).collect();
                Ok(vec![rule; d])
            }
        }
    }
}

/// `π_*ω` at a base point: integrates the fiber coordinates `fiber_dims` (0-based,
/// positively oriented in the listed order) and returns a form on the base chart
/// made of the remaining coordinates in increasing order.
///
/// Terms are written `α_J dx_J ∧ dx_{f₁}∧⋯∧dx_{f_d}` before integrating.
pub fn integrate_fiber(w: &FormField, fiber_dims: &[usize], rule: &FiberRule, base_point: &[f64]) -> Result<FormValue> {
    let m = w.dim();
    let d = fiber_dims.len();
    let base_dims: Vec<usize> = (0..m).filter(|i| !fiber_dims.contains(i)).collect();
    if base_point.len() != base_dims.len() {
        return Err(Error::DimensionMismatch { expected: base_dims.len(), got: base_point.len() });
    }
    let nb = base_dims.len();
    let fiber_mask: usize = fiber_dims.iter().map(|&i| 1 << i).sum();
    // sign of reordering the fiber block from increasing order into the listed order
    let mut perm_sign = 1.0;
    for a in 0..d {
        for b in a + 1..d {
            if fiber_dims[a] > fiber_dims[b] {
                perm_sign = -perm_sign;
            }
        }
    }
    let base_for_project = base_dims.clone();
    let project = move |f: &FormValue| {
        let mut out = FormValue::zero(nb);
        for (mask, c) in f.coeffs().iter().enumerate() {
            if mask & fiber_mask != fiber_mask || c.norm() == 0.0 {
                continue;
            }
            let base = mask & !fiber_mask;
            let s = mask_sign(base, fiber_mask) * perm_sign;
            let mut bm = 0;
            for (k, &i) in base_for_project.iter().enumerate() {
                if base & (1 << i) != 0 {
                    bm |= 1 << k;
                }
            }
            *out.get_mut(bm) += c * s;
        }
        out
    };
    let eval = |x: &[f64]| {
        let mut p = vec![0.0; m];
        for (k, &i) in base_dims.iter().enumerate() {
            p[i] = base_point[k];
        }
        for (k, &i) in fiber_dims.iter().enumerate() {
            p[i] = x[k];
        }
        Ok(project(&w.eval(&p)?))
    };
    if d == 0 {
        return eval(&[]);
    }
    tensor_sum(&rule.axis_rules(d)?, &eval, nb)
}

/// Embeds a pointwise form field evaluation as a constant jet form.
pub fn constant_jets(f: &FormValue) -> JetForm {
    f.to_jets()
}
