//! Exterior and Clifford algebras of a fiber `V = ℝ^d` with form coefficients,
//! the symbol map, the Berezin integral and the rank-2 spinor representation.
//!
//! An element is `Σ_I α_I e_I` (or `α_I c_I`) with the form coefficient on the
//! left; products follow `(α e_I)(β e_J) = (−1)^{|I||β|} αβ e_I e_J`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::form::mask_sign;
use crate::exterior::{Coeff, Form, FormValue};
use crate::superlinalg::{ParitySplit, SuperMatrix, SuperMatrixForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraTag {
    /// `ΛV`: `e_i e_i = 0`.
    Wedge,
    /// `C(V)`: `c_i c_j + c_j c_i = −2δ_ij`.
    Clifford,
}

/// Element of `Λ(T*) ⊗ ΛV` or `Λ(T*) ⊗ C(V)`, dense over fiber subsets.
#[derive(Clone, PartialEq)]
pub struct Graded<S> {
    tag: AlgebraTag,
    d: usize,
    dim: usize,
    terms: Vec<Form<S>>,
}

pub type GradedElement = Graded<Complex64>;

impl<S: Coeff> std::fmt::Debug for Graded<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (mask, t) in self.terms.iter().enumerate() {
            if !t.is_zero() {
                m.entry(&crate::exterior::MultiIndex::from_mask(mask).to_string(), t);
            }
        }
        m.finish()
    }
}

fn fiber_sign(tag: AlgebraTag, a: usize, b: usize) -> Option<(f64, usize)> {
    match tag {
        AlgebraTag::Wedge => (a & b == 0).then(|| (mask_sign(a, b), a | b)),
        AlgebraTag::Clifford => {
            let s = mask_sign(a, b) * if (a & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            Some((s, a ^ b))
        }
    }
}

impl<S: Coeff> Graded<S> {
    pub fn zero(tag: AlgebraTag, d: usize, dim: usize) -> Self {
        Graded { tag, d, dim, terms: vec![Form::zero(dim); 1 << d] }
    }

    pub fn scalar(tag: AlgebraTag, d: usize, f: Form<S>) -> Self {
        let mut g = Self::zero(tag, d, f.dim());
        g.terms[0] = f;
        g
    }

    pub fn one(tag: AlgebraTag, d: usize, dim: usize) -> Self {
        Self::scalar(tag, d, Form::one(dim))
    }

    /// `f · e_I` with `I` given by its bitmask.
    pub fn basis(tag: AlgebraTag, d: usize, mask: usize, f: Form<S>) -> Self {
        let mut g = Self::zero(tag, d, f.dim());
        g.terms[mask] = f;
        g
    }

    /// The generator `e_i` / `c_i` (1-based).
    pub fn generator(tag: AlgebraTag, d: usize, dim: usize, i: usize) -> Self {
        assert!((1..=d).contains(&i));
        Self::basis(tag, d, 1 << (i - 1), Form::one(dim))
    }

    /// `Σ_i f_i e_i`.
    pub fn vector(tag: AlgebraTag, fs: &[Form<S>]) -> Self {
        let d = fs.len();
        let mut g = Self::zero(tag, d, fs[0].dim());
        for (i, f) in fs.iter().enumerate() {
            g.terms[1 << i] = f.clone();
        }
        g
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn fiber_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn term(&self, mask: usize) -> &Form<S> {
        &self.terms[mask]
    }

    pub fn set(&mut self, mask: usize, f: Form<S>) {
        assert_eq!(f.dim(), self.dim);
        self.terms[mask] = f;
    }

    pub fn terms(&self) -> &[Form<S>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.tag != o.tag {
            return Err(Error::TagMismatch);
        }
        if self.d != o.d || self.dim != o.dim {
            return Err(Error::DimensionMismatch { expected: self.d, got: o.d });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let terms = self.terms.iter().zip(&o.terms).map(|(a, b)| a + b).collect();
        Ok(Graded { tag: self.tag, d: self.d, dim: self.dim, terms })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let terms = self.terms.iter().zip(&o.terms).map(|(a, b)| a - b).collect();
        Ok(Graded { tag: self.tag, d: self.d, dim: self.dim, terms })
    }

    pub fn map(&self, f: impl Fn(&Form<S>) -> Form<S>) -> Self {
        Graded { tag: self.tag, d: self.d, dim: self.dim, terms: self.terms.iter().map(f).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|t| t.scale(c))
    }

    /// Left multiplication by an even form.
    pub fn mul_form(&self, f: &Form<S>) -> Self {
        self.map(|t| f.wedge(t))
    }

    /// The algebra product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = Self::zero(self.tag, self.d, self.dim);
        let flipped: Vec<Form<S>> = o.terms.iter().map(|t| t.parity_flip()).collect();
        for (a, ta) in self.terms.iter().enumerate() {
            if ta.is_zero() {
                continue;
            }
            let odd_a = a.count_ones() % 2 == 1;
            for (b, tb) in o.terms.iter().enumerate() {
                if tb.is_zero() {
                    continue;
                }
                let Some((s, mask)) = fiber_sign(self.tag, a, b) else { continue };
                let rhs = if odd_a { &flipped[b] } else { tb };
                let p = ta.wedge(rhs);
                if s < 0.0 {
                    out.terms[mask] -= &p;
                } else {
                    out.terms[mask] += &p;
                }
            }
        }
        Ok(out)
    }

    /// Same coefficients under the other algebra tag (the symbol map and its inverse).
    pub fn retag(&self, tag: AlgebraTag) -> Self {
        Graded { tag, ..self.clone() }
    }

    /// Values of the coefficients.
    pub fn values(&self) -> Graded<Complex64> {
        Graded { tag: self.tag, d: self.d, dim: self.dim, terms: self.terms.iter().map(|t| t.values()).collect() }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.terms.iter().zip(&o.terms).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|t| t.max_abs()).fold(0.0, f64::max)
    }
}

/// Free-function form of [`Graded::mul`].
pub fn algebra_mul<S: Coeff>(a: &Graded<S>, b: &Graded<S>) -> Result<Graded<S>> {
    a.mul(b)
}

/// `Σ(c_{i₁}⋯c_{i_k}) = e_{i₁}∧⋯∧e_{i_k}`.
pub fn symbol_map<S: Coeff>(a: &Graded<S>) -> Graded<S> {
    a.retag(AlgebraTag::Wedge)
}

pub fn symbol_inverse<S: Coeff>(a: &Graded<S>) -> Graded<S> {
    a.retag(AlgebraTag::Clifford)
}

fn only_degree_two<S: Coeff>(a: &Graded<S>) -> Result<()> {
    let ok = a.terms.iter().enumerate().all(|(m, t)| t.is_zero() || m.count_ones() == 2);
    if ok {
        Ok(())
    } else {
        Err(Error::WrongDegree)
    }
}

/// `τ(c)v = cv − vc` as a `d×d` matrix of forms (row-major), for `c ∈ C²(V)`.
pub fn tau_map<S: Coeff>(c: &Graded<S>) -> Result<Vec<Form<S>>> {
    only_degree_two(c)?;
    let d = c.d;
    let mut out = vec![Form::zero(c.dim); d * d];
    for i in 0..d {
        for j in i + 1..d {
            let t = &c.terms[(1 << i) | (1 << j)];
            if t.is_zero() {
                continue;
            }
            let two = t.scale(Complex64::new(2.0, 0.0));
            out[j * d + i] += &two;
            out[i * d + j] -= &two;
        }
    }
    Ok(out)
}

/// [`tau_map`] of a numeric element.
pub fn tau_numeric(c: &GradedElement) -> Result<DMatrix<Complex64>> {
    let d = c.d;
    let t = tau_map(c)?;
    Ok(DMatrix::from_fn(d, d, |i, j| t[i * d + j].get(0)))
}

/// Berezin integral: the coefficient of `e₁∧⋯∧e_d`.
pub fn berezin_t<S: Coeff>(a: &Graded<S>) -> Form<S> {
    a.terms[(1 << a.d) - 1].clone()
}

/// `e^{s}·Σ_{k ≤ d+m} a^k/k!` in the exterior algebra.
pub fn wedge_exp<S: Coeff>(a: &Graded<S>, scalar_part: &Form<S>) -> Result<Graded<S>> {
    let mut acc = Graded::one(a.tag, a.d, a.dim);
    let mut power = acc.clone();
    for k in 1..=a.d + a.dim {
        power = power.mul(a)?.scale(Complex64::new(1.0 / k as f64, 0.0));
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power)?;
    }
    Ok(acc.mul_form(&scalar_part.exp()))
}

/// `Pf(L) = T(e^L)`.
pub fn pfaffian<S: Coeff>(l: &Graded<S>) -> Result<Form<S>> {
    only_degree_two(l)?;
    if l.d % 2 == 1 {
        return Ok(Form::zero(l.dim));
    }
    Ok(berezin_t(&wedge_exp(l, &Form::zero(l.dim))?))
}

/// Contraction `ι(x)`: the odd derivation with `ι(e_i) e_j = x_i δ_ij` extended to forms by `ι(αe_I) = (−1)^{|α|} α ι(e_I)`.
pub fn contraction<S: Coeff>(x: &[S], a: &Graded<S>) -> Graded<S> {
    assert_eq!(x.len(), a.d);
    let mut out = Graded::zero(a.tag, a.d, a.dim);
    for (mask, t) in a.terms.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        let flipped = t.parity_flip();
        let mut before = 0;
        for i in 0..a.d {
            if mask & (1 << i) == 0 {
                continue;
            }
            let term = flipped.mul_coeff(x[i]);
            if before % 2 == 1 {
                out.terms[mask & !(1 << i)] -= &term;
            } else {
                out.terms[mask & !(1 << i)] += &term;
            }
            before += 1;
        }
    }
    out
}

/// Power series `Σ_k c_k b^k` of an even form.
fn form_series<S: Coeff>(b: &Form<S>, coeffs: &[f64]) -> Form<S> {
    let mut acc = Form::zero(b.dim());
    let mut power = Form::one(b.dim());
    for (k, &c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = power.wedge(b);
        }
        if c != 0.0 {
            acc += &power.scale(Complex64::new(c, 0.0));
        }
    }
    acc
}

/// `f(b₀ + n) = Σ_k f^{(k)}(b₀) n^k/k!` for the nilpotent part `n`.
fn form_taylor<S: Coeff>(b: &Form<S>, derivs: &[S]) -> Form<S> {
    let mut n = b.clone();
    n.set(0, S::zero());
    let mut acc = Form::scalar(b.dim(), derivs[0]);
    let mut power = Form::one(b.dim());
    for (k, &dk) in derivs.iter().enumerate().skip(1) {
        power = power.wedge(&n).scale(Complex64::new(1.0 / k as f64, 0.0));
        if power.is_zero() {
            break;
        }
        acc += &power.mul_coeff(dk);
    }
    acc
}

const SERIES_TERMS: usize = 48;
const SERIES_RADIUS: f64 = 0.5;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `(cos b, sin b, sin b / b, (sin b − b cos b)/b²)` for an even form `b`.
fn trig_family<S: Coeff>(b: &Form<S>) -> [Form<S>; 4] {
    let b0 = b.get(0);
    let dim = b.dim();
    if b0.value().norm() < SERIES_RADIUS {
        let mut cos = vec![0.0; SERIES_TERMS];
        let mut sin = vec![0.0; SERIES_TERMS];
        let mut sinc = vec![0.0; SERIES_TERMS];
        let mut rest = vec![0.0; SERIES_TERMS];
        for j in 0..SERIES_TERMS / 2 {
            let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
            cos[2 * j] = sgn / factorial(2 * j);
            if 2 * j + 1 < SERIES_TERMS {
                sin[2 * j + 1] = sgn / factorial(2 * j + 1);
            }
            sinc[2 * j] = sgn / factorial(2 * j + 1);
            if j >= 1 {
                rest[2 * j - 1] = -sgn * 2.0 * j as f64 / factorial(2 * j + 1);
            }
        }
        return [form_series(b, &cos), form_series(b, &sin), form_series(b, &sinc), form_series(b, &rest)];
    }
    let order = dim / 2 + 1;
    let (s0, c0) = (b0.sin(), b0.cos());
    let cycle = [s0, c0, -s0, -c0];
    let sin_d: Vec<S> = (0..=order).map(|k| cycle[k % 4]).collect();
    let cos_d: Vec<S> = (0..=order).map(|k| cycle[(k + 1) % 4]).collect();
    let sin = form_taylor(b, &sin_d);
    let cos = form_taylor(b, &cos_d);
    let inv0 = b0.recip();
    let inv_d: Vec<S> = (0..=order)
        .scan(inv0, |p, k| {
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            let v = p.scale(Complex64::new(sgn * factorial(k), 0.0));
            *p = *p * inv0;
            Some(v)
        })
        .collect();
    let inv = form_taylor(b, &inv_d);
    let sinc = sin.wedge(&inv);
    let rest = (&sin - &b.wedge(&cos)).wedge(&inv).wedge(&inv);
    [cos, sin, sinc, rest]
}

/// `exp(a₁c₁ + a₂c₂ + b c₁c₂)` in `C(ℝ²)` by the closed form
/// `cos b + sin b·c₁c₂ + (sin b/b)(a₁c₁+a₂c₂) + ((sin b − b cos b)/b²)a₁a₂ − (sin b/b)a₁a₂c₁c₂`.
pub fn clifford_exp_dim2<S: Coeff>(a1: &Form<S>, a2: &Form<S>, b: &Form<S>) -> Result<Graded<S>> {
    if !a1.has_parity(1) || !a2.has_parity(1) {
        return Err(Error::WrongParity("a₁, a₂ must be odd"));
    }
    if !b.has_parity(0) {
        return Err(Error::WrongParity("b must be even"));
    }
    let [cos, sin, sinc, rest] = trig_family(b);
    let a12 = a1.wedge(a2);
    let tag = AlgebraTag::Clifford;
    let mut g = Graded::zero(tag, 2, b.dim());
    g.set(0, cos + rest.wedge(&a12));
    g.set(0b01, sinc.wedge(a1));
    g.set(0b10, sinc.wedge(a2));
    g.set(0b11, sin - sinc.wedge(&a12));
    Ok(g)
}

/// Two anti-Hermitian odd `2×2` matrices representing `c₁, c₂` on `S = S⁺ ⊕ S⁻`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorRep2 {
    c1: DMatrix<Complex64>,
    c2: DMatrix<Complex64>,
}

const REP_TOL: f64 = 1e-12;

impl SpinorRep2 {
    /// Validates `c_i² = −I`, `c_i* = −c_i`, `c₁c₂ = −c₂c₁`, oddness and `Str(c₁c₂) = −2i`.
    pub fn new(c1: DMatrix<Complex64>, c2: DMatrix<Complex64>) -> Result<Self> {
        let dev = |a: &DMatrix<Complex64>| a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for c in [&c1, &c2] {
            if c.shape() != (2, 2) {
                return Err(Error::InvalidSpinorRep("not 2×2"));
            }
            let id = DMatrix::<Complex64>::identity(2, 2);
            if dev(&(c * c + &id)) > REP_TOL {
                return Err(Error::InvalidSpinorRep("c_i² ≠ −1"));
            }
            if dev(&(c + c.adjoint())) > REP_TOL {
                return Err(Error::InvalidSpinorRep("c_i not anti-Hermitian"));
            }
            if c[(0, 0)].norm() > REP_TOL || c[(1, 1)].norm() > REP_TOL {
                return Err(Error::InvalidSpinorRep("c_i does not swap parity"));
            }
        }
        if dev(&(&c1 * &c2 + &c2 * &c1)) > REP_TOL {
            return Err(Error::InvalidSpinorRep("c₁, c₂ do not anticommute"));
        }
        let p = &c1 * &c2;
        let str = p[(0, 0)] - p[(1, 1)];
        if (str - Complex64::new(0.0, -2.0)).norm() > REP_TOL {
            return Err(Error::InvalidSpinorRep("Str(c₁c₂) ≠ −2i"));
        }
        Ok(SpinorRep2 { c1, c2 })
    }

    /// `c₁ = [[0,−1],[1,0]]`, `c₂ = [[0,i],[i,0]]`.
    pub fn standard() -> Self {
        let z = |re, im| Complex64::new(re, im);
        let c1 = DMatrix::from_row_slice(2, 2, &[z(0.0, 0.0), z(-1.0, 0.0), z(1.0, 0.0), z(0.0, 0.0)]);
        let c2 = DMatrix::from_row_slice(2, 2, &[z(0.0, 0.0), z(0.0, 1.0), z(0.0, 1.0), z(0.0, 0.0)]);
        Self::new(c1, c2).expect("standard spinor representation")
    }

    pub fn c1(&self) -> &DMatrix<Complex64> {
        &self.c1
    }

    pub fn c2(&self) -> &DMatrix<Complex64> {
        &self.c2
    }

    /// Matrix of `c_I`.
    pub fn monomial(&self, mask: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::identity(2, 2);
        if mask & 1 != 0 {
            m = &m * &self.c1;
        }
        if mask & 2 != 0 {
            m = &m * &self.c2;
        }
        m
    }
}

pub fn spinor_split() -> ParitySplit {
    ParitySplit { plus: 1, minus: 1 }
}

/// Image of a Clifford element in `End(S) ⊗ Λ`: `α c_I ↦ Σ_ij (−1)^{|α|(p_i+p_j)} E_ij (C_I)_ij α`.
pub fn spinor_rep<S: Coeff>(a: &Graded<S>, rep: &SpinorRep2) -> Result<SuperMatrix<S>> {
    if a.d != 2 {
        return Err(Error::UnsupportedRank(a.d));
    }
    if a.tag != AlgebraTag::Clifford {
        return Err(Error::TagMismatch);
    }
    let split = spinor_split();
    let mut out = SuperMatrix::zero(split, a.dim);
    for (mask, t) in a.terms.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        let cm = rep.monomial(mask);
        let flipped = t.parity_flip();
        for i in 0..2 {
            for j in 0..2 {
                let c = cm[(i, j)];
                if c.norm() == 0.0 {
                    continue;
                }
                let f = if (split.parity(i) + split.parity(j)) % 2 == 1 { &flipped } else { t };
                *out.get_mut(i, j) += &f.scale(c);
            }
        }
    }
    Ok(out)
}

/// `c(x) = x₁c₁ + x₂c₂` as a matrix, for scalar `x`.
pub fn clifford_vector(x: &[Complex64; 2], rep: &SpinorRep2, dim: usize) -> SuperMatrixForm {
    let m = rep.c1() * x[0] + rep.c2() * x[1];
    SuperMatrix::from_numeric(spinor_split(), dim, &m)
}

/// `det^{1/2}((e^{τ/2} − e^{−τ/2})/τ)` for a real antisymmetric `2×2` matrix `τ` of rotation angle `θ`.
pub fn half_sinh_ratio_det(tau: &DMatrix<Complex64>) -> Complex64 {
    let half = tau[(1, 0)] * 0.5;
    if half.norm() < 1e-8 {
        Complex64::new(1.0, 0.0) - half * half / 6.0
    } else {
        half.sin() / half
    }
}

/// Numeric value of a form with only a degree-0 part, as a `FormValue` on a 0-chart.
pub fn numeric(c: Complex64) -> FormValue {
    FormValue::scalar(0, c)
}
