//! Euclidean bundles over a chart: the Euler form, `f_t`, the forms `C_∧`, `η_∧`,
//! `β_∧`, the three Thom forms, the Â-genus and the rank-2 Riemann–Roch identities.
//!
//! The total space chart lists the base coordinates first and the fiber
//! coordinates `x₁..x_d` after them. The connection matrix is `ω_ik = (∇e_k, e_i)`,
//! stored row-major.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford_berezin::{
    berezin_t, pfaffian, spinor_rep, spinor_split, wedge_exp, AlgebraTag, Graded, SpinorRep2,
};
use crate::error::{Error, Result};
use crate::exterior::form::mask_sign;
use crate::exterior::{coordinate_jets, Coeff, FormField, FormValue, Jet, JetForm, MAX_DIM, MAX_ORDER};
use crate::quadrature::half_line_integral;
use crate::quillen::{
    beta_form, MatrixField, MorphismBundle, QuillenPoint, SuperConnectionData, CLEARANCE_FLOOR,
};
use crate::relative::{p_chi, RelativeCochain, SupportDescriptor};
use crate::superlinalg::SuperMatrix;

type OmegaEval = dyn Fn(&[Jet]) -> Result<Vec<JetForm>> + Send + Sync;

const ANTISYMMETRY_TOL: f64 = 1e-12;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A rank-`d` Euclidean bundle trivialized by an orthonormal frame over a base chart.
#[derive(Clone)]
pub struct EuclideanBundle {
    rank: usize,
    base_dim: usize,
    omega: Arc<OmegaEval>,
}

impl fmt::Debug for EuclideanBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EuclideanBundle").field("rank", &self.rank).field("base_dim", &self.base_dim).finish()
    }
}

impl EuclideanBundle {
    /// `omega` maps base coordinate jets to the `d×d` matrix of 1-forms on the base
    /// chart; antisymmetry is checked at `samples`.
    pub fn new(
        rank: usize,
        base_dim: usize,
        omega: impl Fn(&[Jet]) -> Result<Vec<JetForm>> + Send + Sync + 'static,
        samples: &[Vec<f64>],
    ) -> Result<Self> {
        if rank + base_dim > MAX_DIM {
            return Err(Error::DimensionCap { size: rank + base_dim, cap: MAX_DIM });
        }
        let b = EuclideanBundle { rank, base_dim, omega: Arc::new(omega) };
        for p in samples {
            let w = b.omega_on(&coordinate_jets(p, 0), base_dim)?;
            let mut defect: f64 = 0.0;
            for i in 0..rank {
                for k in 0..rank {
                    defect = defect.max((&w[i * rank + k] + &w[k * rank + i]).max_abs());
                }
            }
            if defect > ANTISYMMETRY_TOL {
                return Err(Error::NotAntisymmetric(defect));
            }
        }
        Ok(b)
    }

    /// The trivial connection.
    pub fn flat(rank: usize, base_dim: usize) -> Result<Self> {
        let n = rank * rank;
        Self::new(rank, base_dim, move |_| Ok(vec![JetForm::zero(base_dim); n]), &[])
    }

    /// Rank 2 with `∇e₁ = ηe₂`, `∇e₂ = −ηe₁`.
    pub fn rank2(base_dim: usize, eta: impl Fn(&[Jet]) -> JetForm + Send + Sync + 'static) -> Result<Self> {
        Self::new(
            2,
            base_dim,
            move |x| {
                let e = eta(x);
                Ok(vec![JetForm::zero(base_dim), -&e, e, JetForm::zero(base_dim)])
            },
            &[vec![0.0; base_dim]],
        )
    }

    /// Rank 2 over the torus chart `(θ₁, θ₂)` with `η = λ cos θ₁ dθ₂`.
    pub fn torus(lambda: f64) -> Self {
        Self::rank2(2, move |x| JetForm::term(2, &[2], x[0].cos().scale(c(lambda)))).expect("antisymmetric")
    }

    /// `TS²` in the chart `(θ, φ)` with frame `(∂_θ, ∂_φ/sin θ)`: `η = cos θ dφ`.
    pub fn sphere_tangent() -> Self {
        Self::rank2(2, |x| JetForm::term(2, &[2], x[0].cos())).expect("antisymmetric")
    }

    /// `V₁ ⊕ V₂` over a common base, frame `(e¹, e²)`.
    pub fn direct_sum(a: &EuclideanBundle, b: &EuclideanBundle) -> Result<Self> {
        if a.base_dim != b.base_dim {
            return Err(Error::DimensionMismatch { expected: a.base_dim, got: b.base_dim });
        }
        let (da, db) = (a.rank, b.rank);
        let d = da + db;
        let m = a.base_dim;
        let (wa, wb) = (a.omega.clone(), b.omega.clone());
        Self::new(
            d,
            m,
            move |x| {
                let (u, v) = (wa(x)?, wb(x)?);
                let mut w = vec![JetForm::zero(m); d * d];
                for i in 0..da {
                    for k in 0..da {
                        w[i * d + k] = u[i * da + k].clone();
                    }
                }
                for i in 0..db {
                    for k in 0..db {
                        w[(da + i) * d + da + k] = v[i * db + k].clone();
                    }
                }
                Ok(w)
            },
            &[vec![0.0; m]],
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn total_dim(&self) -> usize {
        self.base_dim + self.rank
    }

    /// 0-based fiber coordinates of the total chart.
    pub fn fiber_coords(&self) -> Vec<usize> {
        (self.base_dim..self.total_dim()).collect()
    }

    /// `ω` from coordinate jets whose first `base_dim` entries are the base coordinates,
    /// as forms on a chart of dimension `n`.
    fn omega_on(&self, x: &[Jet], n: usize) -> Result<Vec<JetForm>> {
        let w = (self.omega)(&x[..self.base_dim])?;
        if w.len() != self.rank * self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank * self.rank, got: w.len() });
        }
        w.iter()
            .map(|f| {
                if f.dim() != self.base_dim {
                    return Err(Error::DimensionMismatch { expected: self.base_dim, got: f.dim() });
                }
                Ok(f.embed(n))
            })
            .collect()
    }

    /// `F = dω + ω∧ω` at order `order` from jets of order `order + 1`.
    fn curvature_on(&self, x: &[Jet], n: usize, order: usize) -> Result<Vec<JetForm>> {
        let d = self.rank;
        let w = self.omega_on(x, n)?;
        let mut f = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut fij = w[i * d + j].d()?.truncate(order);
                for k in 0..d {
                    fij.add_wedge(&w[i * d + k].truncate(order), &w[k * d + j].truncate(order), false);
                }
                f.push(fij);
            }
        }
        Ok(f)
    }

    /// The connection matrix at a base point.
    pub fn connection(&self, p: &[f64], order: usize) -> Result<Vec<JetForm>> {
        self.check_base(p)?;
        self.omega_on(&coordinate_jets(p, order), self.base_dim)
    }

    /// The antisymmetric curvature matrix at a base point.
    pub fn curvature_matrix(&self, p: &[f64], order: usize) -> Result<Vec<JetForm>> {
        self.check_base(p)?;
        check_order(order)?;
        self.curvature_on(&coordinate_jets(p, order + 1), self.base_dim, order)
    }

    /// `Σ_{i<j} F_ji e_i∧e_j` at a base point.
    pub fn curvature_lambda(&self, p: &[f64], order: usize) -> Result<Graded<Jet>> {
        let f = self.curvature_matrix(p, order)?;
        Ok(lambda_of(&f, self.rank, self.base_dim))
    }

    fn check_base(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.base_dim {
            return Err(Error::DimensionMismatch { expected: self.base_dim, got: p.len() });
        }
        Ok(())
    }
}

fn check_order(order: usize) -> Result<()> {
    if order + 1 > MAX_ORDER {
        return Err(Error::JetsUnavailable { needed: order + 1, available: MAX_ORDER });
    }
    Ok(())
}

/// `A ↦ Σ_{i<j} A_ji e_i∧e_j`.
fn lambda_of(a: &[JetForm], d: usize, n: usize) -> Graded<Jet> {
    let mut g = Graded::zero(AlgebraTag::Wedge, d, n);
    for i in 0..d {
        for j in i + 1..d {
            g.set((1 << i) | (1 << j), a[j * d + i].clone());
        }
    }
    g
}

/// `Eul = Pf(−F/2π)` on the base.
pub fn euler_form(b: &EuclideanBundle) -> FormField {
    let b = b.clone();
    FormField::new(b.base_dim, move |p, k| {
        let l = b.curvature_lambda(p, k)?;
        pfaffian(&l.scale(c(-1.0 / (2.0 * PI))))
    })
}

/// `ε_d = (−1)^{d(d−1)/2} π^{d/2}`.
pub fn epsilon_d(d: usize) -> f64 {
    let s = if (d * (d.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    s * PI.powf(d as f64 / 2.0)
}

/// `Γ(m/2)` for `m ≥ 1`.
fn gamma_half(m: usize) -> f64 {
    let (mut g, mut s) = if m % 2 == 1 { (PI.sqrt(), 0.5) } else { (1.0, 1.0) };
    while 2.0 * s < m as f64 {
        g *= s;
        s += 1.0;
    }
    g
}

fn gamma_masks(k: usize, i: usize, j: usize) -> f64 {
    let nj = j.count_ones() as usize;
    let s = if (nj * (nj + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    -0.5 * s * gamma_half(nj + 1) * mask_sign(i, j) * mask_sign(1 << k, i | j)
}

/// `γ_(k,I,J) = −½(−1)^{|J|(|J|+1)/2} Γ((|J|+1)/2) ε(I,J) ε({k}, I∪J)` with 1-based indices.
pub fn gamma_coefficient(k: usize, i: &[usize], j: &[usize], d: usize) -> Result<f64> {
    let mut seen = 0usize;
    for &a in std::iter::once(&k).chain(i).chain(j) {
        if a == 0 || a > d || seen & (1 << (a - 1)) != 0 {
            return Err(Error::NotPartition { d });
        }
        seen |= 1 << (a - 1);
    }
    if seen != (1 << d) - 1 {
        return Err(Error::NotPartition { d });
    }
    let mask = |s: &[usize]| s.iter().map(|&a| 1usize << (a - 1)).sum::<usize>();
    Ok(gamma_masks(k - 1, mask(i), mask(j)))
}

/// Pfaffian of the principal minor on `idx` of the antisymmetric matrix `B_ab = A_ba`
/// by expansion along the first row.
fn pfaffian_minor(a: &[JetForm], d: usize, idx: &[usize], n: usize) -> JetForm {
    if idx.is_empty() {
        return JetForm::one(n);
    }
    if idx.len() % 2 == 1 {
        return JetForm::zero(n);
    }
    let first = idx[0];
    let mut out = JetForm::zero(n);
    for r in 1..idx.len() {
        let rest: Vec<usize> = idx.iter().enumerate().filter(|&(q, _)| q != 0 && q != r).map(|(_, &v)| v).collect();
        let minor = pfaffian_minor(a, d, &rest, n);
        let term = a[idx[r] * d + first].wedge(&minor);
        if r % 2 == 1 {
            out += &term;
        } else {
            out -= &term;
        }
    }
    out
}

fn mask_indices(mask: usize, d: usize) -> Vec<usize> {
    (0..d).filter(|i| mask & (1 << i) != 0).collect()
}

/// The data of `f_t` at a point of the total space.
#[derive(Clone, Debug)]
pub struct ThomPoint {
    n: usize,
    d: usize,
    x: Vec<Jet>,
    norm2: Jet,
    eta: Vec<JetForm>,
    omega: Vec<JetForm>,
    half_f: Vec<JetForm>,
}

impl ThomPoint {
    pub fn new(b: &EuclideanBundle, p: &[f64], order: usize) -> Result<Self> {
        let (n, d, mb) = (b.total_dim(), b.rank, b.base_dim);
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        check_order(order)?;
        let jets = coordinate_jets(p, order + 1);
        let f = b.curvature_on(&jets, n, order)?;
        let omega: Vec<JetForm> = b.omega_on(&jets, n)?.iter().map(|w| w.truncate(order)).collect();
        let x: Vec<Jet> = jets[mb..].iter().map(|j| j.truncate(order)).collect();
        let norm2 = x.iter().fold(Jet::zero(), |acc, &xi| acc + xi * xi);
        let eta = (0..d)
            .map(|i| {
                let mut e = JetForm::term(n, &[mb + i + 1], Jet::one());
                for k in 0..d {
                    e += &omega[i * d + k].mul_coeff(x[k]);
                }
                e
            })
            .collect();
        let half_f = f.iter().map(|fij| fij.scale(c(0.5))).collect();
        Ok(ThomPoint { n, d, x, norm2, eta, omega, half_f })
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    /// Fiber coordinates.
    pub fn x(&self) -> &[Jet] {
        &self.x
    }

    pub fn norm2(&self) -> Jet {
        self.norm2
    }

    /// `η_i = dx_i + Σ_k x_k ω_ik`.
    pub fn eta_components(&self) -> &[JetForm] {
        &self.eta
    }

    /// `½F` in `Λ²V`.
    pub fn half_curvature(&self) -> Graded<Jet> {
        lambda_of(&self.half_f, self.d, self.n)
    }

    fn nilpotent_part(&self, t: f64) -> Graded<Jet> {
        let mut g = self.half_curvature();
        for i in 0..self.d {
            g.set(1 << i, self.eta[i].scale(c(t)));
        }
        g
    }

    /// `f_t = −t²‖x‖² + tΣη_i e_i + ½F`.
    pub fn f_t(&self, t: f64) -> Graded<Jet> {
        let mut g = self.nilpotent_part(t);
        g.set(0, JetForm::scalar(self.n, self.norm2.scale(c(-t * t))));
        g
    }

    /// `e^{f_t}`.
    pub fn exp_f(&self, t: f64) -> Result<Graded<Jet>> {
        wedge_exp(&self.nilpotent_part(t), &JetForm::scalar(self.n, self.norm2.scale(c(-t * t))))
    }

    /// `C_∧^t = T(e^{f_t})`.
    pub fn c_wedge(&self, t: f64) -> Result<JetForm> {
        Ok(berezin_t(&self.exp_f(t)?))
    }

    /// `x = Σ x_i e_i`.
    pub fn section(&self) -> Graded<Jet> {
        let fs: Vec<JetForm> = self.x.iter().map(|&xi| JetForm::scalar(self.n, xi)).collect();
        Graded::vector(AlgebraTag::Wedge, &fs)
    }

    /// `η_∧^t = −T(x·e^{f_t})`.
    pub fn eta_wedge(&self, t: f64) -> Result<JetForm> {
        Ok(-&berezin_t(&self.section().mul(&self.exp_f(t)?)?))
    }

    fn check_clearance(&self) -> Result<()> {
        if self.norm2.val().re <= CLEARANCE_FLOOR {
            return Err(Error::Clearance(Vec::new()));
        }
        Ok(())
    }

    /// `β_∧ = ∫₀^∞ η_∧^t dt` by quadrature.
    pub fn beta_quadrature(&self) -> Result<JetForm> {
        self.check_clearance()?;
        half_line_integral(|t| self.eta_wedge(t), 0.0, self.norm2.val().re)
    }

    /// `β_∧ = Σ γ_(k,I,J) Pf(F_I/2) x_k η_J / ‖x‖^{|J|+1}`.
    pub fn beta_closed(&self) -> Result<JetForm> {
        self.check_clearance()?;
        let (d, n) = (self.d, self.n);
        let inv_norm = self.norm2.sqrt().recip();
        let full = (1usize << d) - 1;
        let mut out = JetForm::zero(n);
        for k in 0..d {
            let rest = full & !(1 << k);
            let mut j = rest;
            loop {
                let i = rest & !j;
                if i.count_ones() % 2 == 0 {
                    let g = gamma_masks(k, i, j);
                    let mut term = pfaffian_minor(&self.half_f, d, &mask_indices(i, d), n);
                    for a in mask_indices(j, d) {
                        term = term.wedge(&self.eta[a]);
                    }
                    let scale = self.x[k] * inv_norm.powi(j.count_ones() as i32 + 1);
                    out += &term.mul_coeff(scale.scale(c(g)));
                }
                if j == 0 {
                    break;
                }
                j = (j - 1) & rest;
            }
        }
        Ok(out)
    }

    /// `Pf(F/2) = T(e^{½F})`.
    pub fn pfaffian_half(&self) -> Result<JetForm> {
        pfaffian(&self.half_curvature())
    }

    /// `∇^∧` on `Λ(T*) ⊗ ΛV`: the odd derivation extending `d` with `∇e_k = Σ_i ω_ik e_i`.
    pub fn nabla(&self, a: &Graded<Jet>) -> Result<Graded<Jet>> {
        let (d, n) = (self.d, self.n);
        let tag = AlgebraTag::Wedge;
        let nabla_e: Vec<Graded<Jet>> = (0..d)
            .map(|k| {
                let fs: Vec<JetForm> = (0..d).map(|i| self.omega[i * d + k].clone()).collect();
                Graded::vector(tag, &fs)
            })
            .collect();
        let mut out = Graded::zero(tag, d, n);
        for mask in 0..1usize << d {
            let alpha = a.term(mask);
            if alpha.is_zero() {
                continue;
            }
            out = out.add(&Graded::basis(tag, d, mask, alpha.d()?))?;
            let idx = mask_indices(mask, d);
            let lifted = Graded::scalar(tag, d, alpha.parity_flip());
            for (r, &k) in idx.iter().enumerate() {
                let before: usize = idx[..r].iter().map(|&q| 1 << q).sum();
                let after: usize = idx[r + 1..].iter().map(|&q| 1 << q).sum();
                let e = |m| Graded::basis(tag, d, m, JetForm::one(n));
                let mut term = e(before).mul(&nabla_e[k])?.mul(&e(after))?;
                if r % 2 == 1 {
                    term = term.scale(c(-1.0));
                }
                out = out.add(&lifted.mul(&term)?)?;
            }
        }
        Ok(out)
    }
}

fn point_field(
    b: &EuclideanBundle,
    f: impl Fn(&ThomPoint) -> Result<JetForm> + Send + Sync + 'static,
) -> FormField {
    let b = b.clone();
    FormField::new(b.total_dim(), move |p, k| {
        f(&ThomPoint::new(&b, p, k)?).map_err(|e| match e {
            Error::Clearance(v) if v.is_empty() => Error::Clearance(p.to_vec()),
            e => e,
        })
    })
}

/// `C_∧^t` on the total space.
pub fn c_wedge(b: &EuclideanBundle, t: f64) -> FormField {
    point_field(b, move |q| q.c_wedge(t))
}

/// `η_∧^t` on the total space.
pub fn eta_wedge(b: &EuclideanBundle, t: f64) -> FormField {
    point_field(b, move |q| q.eta_wedge(t))
}

/// `β_∧` off the zero section, by quadrature in `t`.
pub fn beta_wedge(b: &EuclideanBundle) -> FormField {
    point_field(b, |q| q.beta_quadrature())
}

/// `β_∧` off the zero section, by the γ-coefficient formula.
pub fn beta_wedge_closed(b: &EuclideanBundle) -> FormField {
    point_field(b, |q| q.beta_closed())
}

/// The zero section `x = 0`, clearance `‖x‖²`.
pub fn zero_section(b: &EuclideanBundle) -> SupportDescriptor {
    let fiber = b.fiber_coords();
    let f2 = fiber.clone();
    let norm2 = move |c: &[usize], p: &[f64]| c.iter().map(|&i| p[i] * p[i]).sum::<f64>();
    let mut base_probe = vec![0.0; b.total_dim()];
    let probes = vec![base_probe.clone(), {
        base_probe[b.base_dim] = 1e-3;
        base_probe
    }];
    SupportDescriptor::new(
        move |p| norm2(&fiber, p) <= CLEARANCE_FLOOR,
        move |p| {
            let r = norm2(&f2, p);
            if r <= CLEARANCE_FLOOR {
                0.0
            } else {
                r
            }
        },
    )
    .with_probes(probes)
}

/// `Th_rel = (1/ε_d)[Pf(F/2), β_∧]` with the closed-form `β_∧`.
pub fn thom_rel(b: &EuclideanBundle) -> RelativeCochain {
    let s = c(1.0 / epsilon_d(b.rank));
    let alpha = point_field(b, |q| q.pfaffian_half()).scale(s);
    let beta = beta_wedge_closed(b).scale(s);
    RelativeCochain::new(alpha, beta, zero_section(b), b.rank)
}

/// `Th_c = (1/ε_d)(χ Pf(F/2) + dχ ∧ β_∧)` for a cutoff `χ` of the fiber.
pub fn thom_c(b: &EuclideanBundle, chi: &FormField) -> Result<FormField> {
    p_chi(&thom_rel(b), chi)
}

/// `Th_MQ = (1/ε_d) C_∧^1`.
pub fn thom_mq(b: &EuclideanBundle) -> FormField {
    c_wedge(b, 1.0).scale(c(1.0 / epsilon_d(b.rank)))
}

mod series {
    //! Truncated power series in one variable, coefficients in increasing degree.

    pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = a.len().min(b.len());
        (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
    }

    pub fn recip(a: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; a.len()];
        r[0] = 1.0 / a[0];
        for k in 1..a.len() {
            r[k] = -(1..=k).map(|i| a[i] * r[k - i]).sum::<f64>() / a[0];
        }
        r
    }

    /// `log a` for `a₀ = 1`, from `(log a)′ = a′/a`.
    pub fn log(a: &[f64]) -> Vec<f64> {
        assert!((a[0] - 1.0).abs() < 1e-15, "log needs a unit constant term");
        let da: Vec<f64> = (1..a.len()).map(|k| k as f64 * a[k]).collect();
        let q = mul(&da, &recip(&a[..a.len() - 1]));
        let mut out = vec![0.0; a.len()];
        for (k, qk) in q.iter().enumerate() {
            out[k + 1] = qk / (k + 1) as f64;
        }
        out
    }

    pub fn exp(a: &[f64]) -> Vec<f64> {
        assert!(a[0] == 0.0, "exp needs a zero constant term");
        let n = a.len();
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        // e′ = a′e
        for k in 1..n {
            e[k] = (1..=k).map(|i| i as f64 * a[i] * e[k - i]).sum::<f64>() / k as f64;
        }
        e
    }
}

/// Coefficients `c_m` (`m = 1..=terms`) of `log g(x) = Σ c_m x^{2m}`, `g(x) = x/(e^{x/2} − e^{−x/2})`.
pub fn log_g_coefficients(terms: usize) -> Vec<f64> {
    let len = 2 * terms + 1;
    // sinh(x/2)/(x/2) = Σ (x/2)^{2k}/(2k+1)!
    let mut s = vec![0.0; len];
    let mut fact = 1.0;
    for k in 0..=terms {
        if k > 0 {
            fact *= ((2 * k) * (2 * k + 1)) as f64;
        }
        s[2 * k] = 1.0 / (4f64.powi(k as i32) * fact);
    }
    let log_s = series::log(&s);
    (1..=terms).map(|m| -log_s[2 * m]).collect()
}

/// Taylor coefficients of `g(x) = (x/2)/sinh(x/2)`, for tests.
pub fn series_of_g(terms: usize) -> Vec<f64> {
    let coeffs = log_g_coefficients(terms);
    let mut l = vec![0.0; 2 * terms + 1];
    for (m, cm) in coeffs.iter().enumerate() {
        l[2 * (m + 1)] = *cm;
    }
    series::exp(&l)
}

fn mat_mul(a: &[JetForm], b: &[JetForm], d: usize, n: usize) -> Vec<JetForm> {
    let mut out = vec![JetForm::zero(n); d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out[i * d + j].add_wedge(&a[i * d + k], &b[k * d + j], false);
            }
        }
    }
    out
}

/// `exp(±½ Σ_m c_m tr F^{2m})`.
fn a_hat_of(f: &[JetForm], d: usize, n: usize, inverse: bool) -> JetForm {
    let terms = n / 4;
    let coeffs = log_g_coefficients(terms.max(1));
    let f2 = mat_mul(f, f, d, n);
    let mut power = f2.clone();
    let mut acc = JetForm::zero(n);
    for (m, cm) in coeffs.iter().enumerate().take(terms) {
        if m > 0 {
            power = mat_mul(&power, &f2, d, n);
        }
        let mut tr = JetForm::zero(n);
        for i in 0..d {
            tr += &power[i * d + i];
        }
        acc += &tr.scale(c(0.5 * cm));
    }
    if inverse {
        acc = -&acc;
    }
    acc.exp()
}

fn a_hat_field(b: &EuclideanBundle, inverse: bool) -> FormField {
    let b = b.clone();
    FormField::new(b.base_dim, move |p, k| {
        let f = b.curvature_matrix(p, k)?;
        Ok(a_hat_of(&f, b.rank, b.base_dim, inverse))
    })
}

/// `Â = det^{1/2}(F/(e^{F/2} − e^{−F/2}))` on the base.
pub fn a_hat_genus(b: &EuclideanBundle) -> FormField {
    a_hat_field(b, false)
}

/// `Â⁻¹` on the base.
pub fn a_hat_inverse(b: &EuclideanBundle) -> FormField {
    a_hat_field(b, true)
}

fn require_rank2(b: &EuclideanBundle) -> Result<()> {
    if b.rank != 2 {
        return Err(Error::UnsupportedRank(b.rank));
    }
    Ok(())
}

/// `F^S = ½ c(Σ⁻¹F)` at a base point.
pub fn clifford_curvature(b: &EuclideanBundle, rep: &SpinorRep2, p: &[f64], order: usize) -> Result<SuperMatrix<Jet>> {
    require_rank2(b)?;
    let l = b.curvature_lambda(p, order)?.retag(AlgebraTag::Clifford);
    Ok(spinor_rep(&l, rep)?.scale(c(0.5)))
}

/// The spinor connection `d + ½ c(Σ⁻¹ ω)` pulled back to the total space.
pub fn spin_connection(b: &EuclideanBundle, rep: &SpinorRep2) -> Result<SuperConnectionData> {
    require_rank2(b)?;
    let (bb, rep) = (b.clone(), rep.clone());
    let n = b.total_dim();
    let omega = MatrixField::from_jets(spinor_split(), n, move |x| {
        let w = bb.omega_on(x, n)?;
        let l = lambda_of(&w, 2, n).retag(AlgebraTag::Clifford);
        Ok(spinor_rep(&l, &rep)?.scale(c(0.5)))
    });
    let mut sample = vec![0.0; n];
    sample[b.base_dim] = 1.0;
    SuperConnectionData::new(omega, &[sample])
}

/// `σ_𝒱 = −i c(x): S⁺ → S⁻` on the total space.
pub fn sigma_v(b: &EuclideanBundle, rep: &SpinorRep2) -> Result<MorphismBundle> {
    require_rank2(b)?;
    let mb = b.base_dim;
    let mi = Complex64::new(0.0, -1.0);
    let (k1, k2) = (rep.c1()[(1, 0)] * mi, rep.c2()[(1, 0)] * mi);
    let mut probe = vec![0.0; b.total_dim()];
    let zero = probe.clone();
    probe[mb] = 1e-3;
    Ok(MorphismBundle::new(spinor_split(), b.total_dim(), move |x| Ok(vec![x[mb].scale(k1) + x[mb + 1].scale(k2)]))
        .with_probes(vec![zero, probe]))
}

/// Largest absolute and relative coefficient error of one identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct IdentityError {
    pub abs: f64,
    /// Relative to the largest coefficient of the left side.
    pub rel: f64,
}

impl IdentityError {
    fn record(&mut self, lhs: &FormValue, rhs: &FormValue) {
        let diff = lhs.max_abs_diff(rhs);
        self.abs = self.abs.max(diff);
        self.rel = self.rel.max(diff / lhs.max_abs().max(f64::MIN_POSITIVE));
    }
}

/// Errors of the rank-2 Riemann–Roch identities over a set of points.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RiemannRochReport {
    pub points: usize,
    /// `Ch(σ_𝒱, ∇^S, t)` against `(−2i) Â⁻¹ C_∧^t`.
    pub chern: IdentityError,
    /// `η(σ_𝒱, ∇^S, t)` against `(−2i) Â⁻¹ η_∧^t`.
    pub eta: IdentityError,
    /// `Ch(∇^S)` against `(2iπ) Â⁻¹ Th_rel.α`.
    pub rel_alpha: IdentityError,
    /// `β(σ_𝒱, ∇^S)` against `(2iπ) Â⁻¹ Th_rel.β`.
    pub rel_beta: IdentityError,
}

impl RiemannRochReport {
    fn all(&self) -> [IdentityError; 4] {
        [self.chern, self.eta, self.rel_alpha, self.rel_beta]
    }

    pub fn max_abs(&self) -> f64 {
        self.all().iter().map(|e| e.abs).fold(0.0, f64::max)
    }

    pub fn max_rel(&self) -> f64 {
        self.all().iter().map(|e| e.rel).fold(0.0, f64::max)
    }
}

/// Checks the pointwise Riemann–Roch identities at points of the total space off the zero section.
pub fn riemann_roch_check(
    b: &EuclideanBundle,
    rep: &SpinorRep2,
    t: f64,
    points: &[Vec<f64>],
) -> Result<RiemannRochReport> {
    require_rank2(b)?;
    let sv = sigma_v(b, rep)?;
    let conn = spin_connection(b, rep)?;
    let beta_c = beta_form(&sv, &conn, 0.0);
    let th = thom_rel(b);
    let a_inv = a_hat_inverse(b);
    let n = b.total_dim();
    let minus_2i = Complex64::new(0.0, -2.0);
    let two_i_pi = Complex64::new(0.0, 2.0 * PI);
    let mut rep_out = RiemannRochReport { points: points.len(), ..Default::default() };
    for p in points {
        let a = a_inv.eval(&p[..b.base_dim])?.embed(n);
        let q = QuillenPoint::jets(&sv, &conn, p, 0)?.values();
        let tp = ThomPoint::new(b, p, 0)?;
        let ch = q.chern(t);
        let ch_b = a.wedge(&tp.c_wedge(t)?.values()).scale(minus_2i);
        rep_out.chern.record(&ch, &ch_b);
        let eta = q.eta(t);
        let eta_b = a.wedge(&tp.eta_wedge(t)?.values()).scale(minus_2i);
        rep_out.eta.record(&eta, &eta_b);
        let ch0 = q.chern(0.0);
        let ch0_b = a.wedge(&th.alpha().eval(p)?).scale(two_i_pi);
        rep_out.rel_alpha.record(&ch0, &ch0_b);
        let bc = beta_c.eval(p)?;
        let bc_b = a.wedge(&th.beta().eval(p)?).scale(two_i_pi);
        rep_out.rel_beta.record(&bc, &bc_b);
    }
    Ok(rep_out)
}

/// Reference formulas for rank 2 with connection form `η`, used by tests and the harness.
pub mod rank2 {
    use super::*;

    /// `(η₁, η₂, dη, η)` at a total-space point.
    pub fn pieces(b: &EuclideanBundle, p: &[f64]) -> Result<(FormValue, FormValue, FormValue, FormValue)> {
        let q = ThomPoint::new(b, p, 0)?;
        let n = b.total_dim();
        let jets = coordinate_jets(p, 1);
        let w = b.omega_on(&jets, n)?;
        let eta = w[2].values();
        let deta = w[2].d()?.values();
        Ok((q.eta[0].values(), q.eta[1].values(), deta, eta))
    }

    fn norm2(b: &EuclideanBundle, p: &[f64]) -> f64 {
        p[b.base_dim..].iter().map(|v| v * v).sum()
    }

    /// `e^{−t²‖x‖²}(dη/2 − t²η₁∧η₂)`.
    pub fn c_wedge(b: &EuclideanBundle, p: &[f64], t: f64) -> Result<FormValue> {
        let (e1, e2, de, _) = pieces(b, p)?;
        let g = (-t * t * norm2(b, p)).exp();
        Ok((de.scale(c(0.5)) - e1.wedge(&e2).scale(c(t * t))).scale(c(g)))
    }

    /// `t e^{−t²‖x‖²}(x₁η₂ − x₂η₁)`.
    pub fn eta_wedge(b: &EuclideanBundle, p: &[f64], t: f64) -> Result<FormValue> {
        let (e1, e2, _, _) = pieces(b, p)?;
        let (x1, x2) = (p[b.base_dim], p[b.base_dim + 1]);
        let g = t * (-t * t * norm2(b, p)).exp();
        Ok((e2.scale(c(x1)) - e1.scale(c(x2))).scale(c(g)))
    }

    /// `(x₁η₂ − x₂η₁)/(2‖x‖²)`.
    pub fn beta_wedge(b: &EuclideanBundle, p: &[f64]) -> Result<FormValue> {
        let (e1, e2, _, _) = pieces(b, p)?;
        let (x1, x2) = (p[b.base_dim], p[b.base_dim + 1]);
        Ok((e2.scale(c(x1)) - e1.scale(c(x2))).scale(c(0.5 / norm2(b, p))))
    }

    /// `(1/2π)e^{−‖x‖²}(2dx₁∧dx₂ − dη + d‖x‖²∧η)`.
    pub fn thom_mq(b: &EuclideanBundle, p: &[f64]) -> Result<FormValue> {
        let (_, _, de, eta) = pieces(b, p)?;
        let n = b.total_dim();
        let mb = b.base_dim;
        let (x1, x2) = (p[mb], p[mb + 1]);
        let dx1 = FormValue::dx(n, mb + 1);
        let dx2 = FormValue::dx(n, mb + 2);
        let dr = dx1.scale(c(2.0 * x1)) + dx2.scale(c(2.0 * x2));
        let body = dx1.wedge(&dx2).scale(c(2.0)) - de + dr.wedge(&eta);
        Ok(body.scale(c((-norm2(b, p)).exp() / (2.0 * PI))))
    }

    /// `(−2i)e^{−t²‖x‖²}(sin(dη/2) − t²(sin(dη/2)/(dη/2))η₁∧η₂)`, with the
    /// trigonometric functions of the nilpotent `dη/2` summed as power series.
    pub fn clifford_chern(b: &EuclideanBundle, p: &[f64], t: f64) -> Result<FormValue> {
        let (e1, e2, de, _) = pieces(b, p)?;
        let half = de.scale(c(0.5));
        let (sin, sinc) = sin_sinc(&half);
        let g = (-t * t * norm2(b, p)).exp();
        Ok((sin - sinc.wedge(&e1.wedge(&e2)).scale(c(t * t))).scale(Complex64::new(0.0, -2.0 * g)))
    }

    /// `(−2i)(sin(dη/2)/(dη/2))(x₁η₂ − x₂η₁)/(2‖x‖²)`.
    pub fn clifford_beta(b: &EuclideanBundle, p: &[f64]) -> Result<FormValue> {
        let (_, _, de, _) = pieces(b, p)?;
        let (_, sinc) = sin_sinc(&de.scale(c(0.5)));
        Ok(sinc.wedge(&beta_wedge(b, p)?).scale(Complex64::new(0.0, -2.0)))
    }

    /// `(sin y, sin y / y)` for a nilpotent even form `y`.
    pub fn sin_sinc(y: &FormValue) -> (FormValue, FormValue) {
        let n = y.dim();
        let y2 = y.wedge(y);
        let mut sinc = FormValue::zero(n);
        let mut power = FormValue::one(n);
        let mut fact = 1.0;
        for k in 0..=n / 2 {
            if k > 0 {
                fact *= ((2 * k) * (2 * k + 1)) as f64;
                power = power.wedge(&y2);
            }
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            sinc += &power.scale(c(s / fact));
        }
        (y.wedge(&sinc), sinc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford_berezin::contraction;
    use crate::quillen::{chern_form, eta_form};
    use crate::exterior::smooth_cutoff_on;
    use crate::relative::{integrate_compact, integrate_fiber, FiberRule, IntegrationBox};

    fn torus_points() -> Vec<Vec<f64>> {
        vec![
            vec![0.4, -1.1, 0.7, -0.3],
            vec![-2.0, 0.5, -0.2, 0.9],
            vec![1.3, 2.4, 1.1, 0.6],
            vec![0.0, 0.0, -0.5, -0.8],
        ]
    }

    fn block4() -> EuclideanBundle {
        let a = EuclideanBundle::torus(0.3);
        let b = EuclideanBundle::rank2(2, |x| {
            JetForm::term(2, &[1], x[1].sin().scale(c(0.5))) + JetForm::term(2, &[2], (x[0] * x[1]).scale(c(0.2)))
        })
        .unwrap();
        EuclideanBundle::direct_sum(&a, &b).unwrap()
    }

    #[test]
    fn rank2_curvature_is_d_eta() {
        let b = EuclideanBundle::torus(0.3);
        let p = [0.7, -0.2];
        let l = b.curvature_lambda(&p, 0).unwrap().values();
        let want = FormValue::basis(2, 0b11, c(-0.3 * 0.7f64.sin()));
        assert!(l.term(0b11).max_abs_diff(&want) < 1e-15);
        let f = b.curvature_matrix(&p, 0).unwrap();
        assert!((&f[1] + &f[2]).max_abs() < 1e-15);
        assert!(EuclideanBundle::flat(2, 2).unwrap().curvature_lambda(&p, 0).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_antisymmetric() {
        let r = EuclideanBundle::new(2, 1, |x| Ok(vec![JetForm::term(1, &[1], x[0]); 4]), &[vec![1.0]]);
        assert!(matches!(r, Err(Error::NotAntisymmetric(_))));
    }

    #[test]
    fn euler_forms() {
        let b = EuclideanBundle::torus(0.3);
        let e = euler_form(&b).eval(&[0.7, -0.2]).unwrap();
        assert!((e.get(0b11) - c(0.3 * 0.7f64.sin() / (2.0 * PI))).norm() < 1e-15);
        let s = EuclideanBundle::sphere_tangent();
        let region = IntegrationBox::new(vec![(0.0, PI), (-PI, PI)]);
        let total = integrate_compact(&euler_form(&s), &region, 32).unwrap();
        assert!((total - c(2.0)).norm() < 1e-12);
        assert!(euler_form(&EuclideanBundle::flat(2, 2).unwrap()).eval(&[0.1, 0.2]).unwrap().is_zero());
        assert!(euler_form(&EuclideanBundle::flat(3, 2).unwrap()).eval(&[0.1, 0.2]).unwrap().is_zero());
    }

    #[test]
    fn f_t_rank2_components() {
        let b = EuclideanBundle::torus(0.3);
        let p = [0.4, -1.1, 0.7, -0.3];
        let q = ThomPoint::new(&b, &p, 0).unwrap();
        let f = q.f_t(1.5).values();
        let eta = 0.3 * 0.4f64.cos();
        assert!((f.term(0).get(0) - c(-2.25 * 0.58)).norm() < 1e-14);
        let eta1 = FormValue::dx(4, 3) - FormValue::dx(4, 2).scale(c(-0.3 * eta));
        let eta2 = FormValue::dx(4, 4) + FormValue::dx(4, 2).scale(c(0.7 * eta));
        assert!(f.term(1).max_abs_diff(&eta1.scale(c(1.5))) < 1e-14);
        assert!(f.term(2).max_abs_diff(&eta2.scale(c(1.5))) < 1e-14);
        let half = FormValue::basis(4, 0b11, c(-0.15 * 0.4f64.sin()));
        assert!(f.term(3).max_abs_diff(&half) < 1e-14);
    }

    #[test]
    fn rank2_closed_forms() {
        let b = EuclideanBundle::torus(0.3);
        for p in torus_points() {
            let q = ThomPoint::new(&b, &p, 0).unwrap();
            for t in [0.0, 0.6, 1.7] {
                let cw = q.c_wedge(t).unwrap().values();
                assert!(cw.max_abs_diff(&rank2::c_wedge(&b, &p, t).unwrap()) < 1e-14);
                let ew = q.eta_wedge(t).unwrap().values();
                assert!(ew.max_abs_diff(&rank2::eta_wedge(&b, &p, t).unwrap()) < 1e-14);
            }
            let want = rank2::beta_wedge(&b, &p).unwrap();
            assert!(q.beta_closed().unwrap().values().max_abs_diff(&want) < 1e-14);
            assert!(q.beta_quadrature().unwrap().values().max_abs_diff(&want) < 1e-9 * want.max_abs());
            let mq = thom_mq(&b).eval(&p).unwrap();
            assert!(mq.max_abs_diff(&rank2::thom_mq(&b, &p).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_coefficient(1, &[], &[2], 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((gamma_coefficient(2, &[], &[1], 2).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(gamma_coefficient(1, &[1], &[2], 2), Err(Error::NotPartition { .. })));
        assert!(matches!(gamma_coefficient(1, &[], &[], 2), Err(Error::NotPartition { .. })));
        assert!((epsilon_d(2) + PI).abs() < 1e-15);
        assert!((epsilon_d(4) - PI * PI).abs() < 1e-13);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_formula_matches_quadrature_rank4() {
        let b = block4();
        for p in [vec![0.3, -0.6, 0.5, -0.2, 0.4, 0.7], vec![-1.2, 0.8, -0.1, 0.9, -0.6, 0.3]] {
            let q = ThomPoint::new(&b, &p, 0).unwrap();
            let closed = q.beta_closed().unwrap().values();
            let quad = q.beta_quadrature().unwrap().values();
            assert!(closed.max_abs_diff(&quad) < 1e-7 * closed.max_abs(), "{:e}", closed.max_abs_diff(&quad));
        }
    }

    #[test]
    fn transgression_and_closedness() {
        let b = EuclideanBundle::torus(0.3);
        let p = [0.4, -1.1, 0.7, -0.3];
        for t in [0.3, 1.2] {
            assert!(c_wedge(&b, t).d().eval(&p).unwrap().max_abs() < 1e-12);
            let h = 1e-5;
            let dc = (c_wedge(&b, t + h).eval(&p).unwrap() - c_wedge(&b, t - h).eval(&p).unwrap()).scale(c(0.5 / h));
            let deta = eta_wedge(&b, t).d().eval(&p).unwrap();
            assert!((dc + deta).max_abs() < 1e-8);
        }
        let db = beta_wedge_closed(&b).d().eval(&p).unwrap();
        assert!(db.max_abs_diff(&c_wedge(&b, 0.0).eval(&p).unwrap()) < 1e-12);
        let db4 = beta_wedge_closed(&block4()).d().eval(&[0.3, -0.6, 0.5, -0.2, 0.4, 0.7]).unwrap();
        let c4 = c_wedge(&block4(), 0.0).eval(&[0.3, -0.6, 0.5, -0.2, 0.4, 0.7]).unwrap();
        assert!(db4.max_abs_diff(&c4) < 1e-11);
    }

    #[test]
    fn structure_identity() {
        for (b, p) in [
            (EuclideanBundle::torus(0.3), vec![0.4, -1.1, 0.7, -0.3]),
            (block4(), vec![0.3, -0.6, 0.5, -0.2, 0.4, 0.7]),
        ] {
            let q = ThomPoint::new(&b, &p, 1).unwrap();
            let t = 0.8;
            let f = q.f_t(t);
            let x: Vec<Jet> = q.x().iter().map(|v| v.truncate(0)).collect();
            let lhs = q.nabla(&f).unwrap().sub(&contraction(&x, &f).scale(c(2.0 * t))).unwrap();
            assert!(lhs.values().max_abs() < 1e-12, "{:e}", lhs.values().max_abs());
        }
    }

    #[test]
    fn thom_fiber_integrals() {
        let b = EuclideanBundle::torus(0.3);
        let fiber = b.fiber_coords();
        let chi = smooth_cutoff_on(4, &fiber, 0.25, 4.0).unwrap();
        let thc = thom_c(&b, &chi).unwrap();
        let rule = FiberRule::Compact { region: IntegrationBox::cube(2, 2.0).with_panels(4), order: 24 };
        let gauss = FiberRule::Gaussian { rate: 1.0, order: 32 };
        let mq = thom_mq(&b);
        for base in [[0.4, -1.1], [2.0, 0.3]] {
            let v = integrate_fiber(&thc, &fiber, &rule, &base).unwrap();
            assert!((v.get(0) - c(1.0)).norm() < 1e-6, "{}", v.get(0));
            let g = integrate_fiber(&mq, &fiber, &gauss, &base).unwrap();
            assert!((g.get(0) - c(1.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn thom_c_is_closed() {
        let b = EuclideanBundle::torus(0.3);
        let chi = smooth_cutoff_on(4, &b.fiber_coords(), 0.25, 4.0).unwrap();
        let thc = thom_c(&b, &chi).unwrap();
        for p in torus_points() {
            assert!(thc.d().eval(&p).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn log_g_series() {
        let cs = log_g_coefficients(8);
        assert!((cs[0] + 1.0 / 24.0).abs() < 1e-16);
        assert!((cs[1] - 1.0 / 2880.0).abs() < 1e-17);
        let x: f64 = 0.3;
        let sum: f64 = cs.iter().enumerate().map(|(m, cm)| cm * x.powi(2 * (m as i32 + 1))).sum();
        let want = ((x / 2.0) / (x / 2.0).sinh()).ln();
        assert!((sum - want).abs() < 1e-14);
        let g = series_of_g(8);
        let gx: f64 = g.iter().enumerate().map(|(k, gk)| gk * x.powi(k as i32)).sum();
        assert!((gx - (x / 2.0) / (x / 2.0).sinh()).abs() < 1e-14);
    }

    fn four_base() -> EuclideanBundle {
        EuclideanBundle::rank2(4, |x| {
            JetForm::term(4, &[2], x[0].cos().scale(c(0.3))) + JetForm::term(4, &[4], x[2].sin().scale(c(0.2)))
        })
        .unwrap()
    }

    #[test]
    fn a_hat_rank2() {
        let b = four_base();
        let p = [0.3, -0.5, 0.8, 0.1];
        let a = a_hat_genus(&b).eval(&p).unwrap();
        let ai = a_hat_inverse(&b).eval(&p).unwrap();
        assert!(a.wedge(&ai).max_abs_diff(&FormValue::one(4)) < 1e-15);
        let de = b.curvature_lambda(&p, 0).unwrap().values().term(0b11).clone();
        let (_, sinc) = rank2::sin_sinc(&de.scale(c(0.5)));
        assert!(ai.max_abs_diff(&sinc) < 1e-15);
        let want = FormValue::one(4) + de.wedge(&de).scale(c(1.0 / 24.0));
        assert!(a.max_abs_diff(&want) < 1e-15);
        assert!(a_hat_genus(&EuclideanBundle::flat(2, 4).unwrap()).eval(&p).unwrap().max_abs_diff(&FormValue::one(4)) == 0.0);
    }

    #[test]
    fn spinor_objects() {
        let b = EuclideanBundle::torus(0.3);
        let rep = SpinorRep2::standard();
        let fs = clifford_curvature(&b, &rep, &[0.7, -0.2], 0).unwrap().values();
        let a = -0.3 * 0.7f64.sin();
        assert!((fs.get(0, 0).get(0b11) - Complex64::new(0.0, -a / 2.0)).norm() < 1e-15);
        assert!((fs.get(1, 1).get(0b11) - Complex64::new(0.0, a / 2.0)).norm() < 1e-15);
        let sv = sigma_v(&b, &rep).unwrap();
        let conn = spin_connection(&b, &rep).unwrap();
        let p = [0.7, -0.2, 0.5, -1.3];
        let q = QuillenPoint::jets(&sv, &conn, &p, 0).unwrap().values();
        let fs_total = clifford_curvature(&b, &rep, &p[..2], 0).unwrap().values();
        for i in 0..2 {
            for j in 0..2 {
                assert!(q.a_squared().get(i, j).max_abs_diff(&fs_total.get(i, j).embed(4)) < 1e-15);
            }
        }
        assert!((q.v_squared().get(0, 0).get(0) - c(0.25 + 1.69)).norm() < 1e-15);
        let unit = sv.sigma_jets(&coordinate_jets(&[0.0, 0.0, 1.0, 0.0], 0)).unwrap();
        assert!((unit[0].val().norm() - 1.0).abs() < 1e-15);
        assert!(matches!(sigma_v(&block4(), &rep), Err(Error::UnsupportedRank(4))));
    }

    #[test]
    fn clifford_side_closed_forms() {
        let b = EuclideanBundle::torus(0.3);
        let rep = SpinorRep2::standard();
        let sv = sigma_v(&b, &rep).unwrap();
        let conn = spin_connection(&b, &rep).unwrap();
        for p in torus_points() {
            let ch = chern_form(&sv, &conn, 0.9).eval(&p).unwrap();
            assert!(ch.max_abs_diff(&rank2::clifford_chern(&b, &p, 0.9).unwrap()) < 1e-14);
        }
        let p = [0.4, -1.1, 0.7, -0.3];
        let bc = beta_form(&sv, &conn, 0.0).eval(&p).unwrap();
        let want = rank2::clifford_beta(&b, &p).unwrap();
        assert!(bc.max_abs_diff(&want) < 1e-9 * want.max_abs());
        let e = eta_form(&sv, &conn, 0.9).eval(&p).unwrap();
        assert!(e.max_abs() > 0.0);
    }

    #[test]
    fn riemann_roch_identities() {
        let rep = SpinorRep2::standard();
        let b = EuclideanBundle::torus(0.3);
        let r = riemann_roch_check(&b, &rep, 0.7, &torus_points()).unwrap();
        assert!(r.max_rel() < 1e-9, "{r:?}");
        let b4 = four_base();
        let pts = vec![vec![0.3, -0.5, 0.8, 0.1, 0.6, -0.4], vec![-1.0, 0.2, 1.4, -0.7, -0.3, 0.9]];
        let r4 = riemann_roch_check(&b4, &rep, 1.1, &pts).unwrap();
        assert!(r4.max_rel() < 1e-9, "{r4:?}");
        let flat = EuclideanBundle::flat(2, 2).unwrap();
        let rf = riemann_roch_check(&flat, &rep, 0.5, &torus_points()).unwrap();
        assert!(rf.max_rel() < 1e-12);
    }

    #[test]
    fn real_forms() {
        let b = block4();
        let p = [0.3, -0.6, 0.5, -0.2, 0.4, 0.7];
        for f in [c_wedge(&b, 0.8), eta_wedge(&b, 0.8), beta_wedge_closed(&b), thom_mq(&b)] {
            assert!(f.eval(&p).unwrap().max_imag() < 1e-12);
        }
    }
}
