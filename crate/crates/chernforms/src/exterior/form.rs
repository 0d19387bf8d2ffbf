//! Pointwise differential forms: dense coefficient vectors indexed by subsets of `{1..m}`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::jet::{Coeff, Jet};
use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped by [`FormValue::normalize`].
pub const NORMALIZE_FLOOR: f64 = 1e-300;

/// Strictly increasing list of 1-based exterior indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i == 0 || i > 32) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("not a strictly increasing index list: {indices:?}")));
        }
        Ok(MultiIndex(indices.to_vec()))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn from_mask(mask: usize) -> Self {
        MultiIndex((0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
    }

    pub fn mask(&self) -> usize {
        self.0.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("dx{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// Sign of `e_a ∧ e_b = ±e_{a∪b}` for disjoint bitmasks.
#[inline]
pub fn mask_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// ε(I,J): `e_I ∧ e_J = ε(I,J) e_{I∪J}`, and 0 when the sets meet.
pub fn epsilon_sign(i: &MultiIndex, j: &MultiIndex) -> i32 {
    let (a, b) = (i.mask(), j.mask());
    if a & b != 0 {
        0
    } else {
        mask_sign(a, b) as i32
    }
}

/// A form at a point: coefficient of `dx_I` stored at the bitmask of `I`.
#[derive(Clone, PartialEq)]
pub struct Form<S> {
    dim: usize,
    coeffs: Vec<S>,
}

/// A form with plain complex coefficients.
pub type FormValue = Form<Complex64>;
/// A form whose coefficients carry derivative jets.
pub type JetForm = Form<Jet>;

impl<S: Coeff> Form<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= 16, "chart dimension {dim} too large for dense forms");
        Form { dim, coeffs: vec![S::zero(); 1 << dim] }
    }

    pub fn scalar(dim: usize, s: S) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs[0] = s;
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    /// `s · dx_mask`.
    pub fn basis(dim: usize, mask: usize, s: S) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs[mask] = s;
        f
    }

    /// `s · dx_{i₁} ∧ … ∧ dx_{i_k}` for 1-based indices in any order (sign applied).
    pub fn term(dim: usize, indices: &[usize], s: S) -> Self {
        let mut mask = 0usize;
        let mut sign = 1.0;
        for &i in indices {
            assert!(i >= 1 && i <= dim, "index {i} outside 1..={dim}");
            let b = 1 << (i - 1);
            if mask & b != 0 {
                return Self::zero(dim);
            }
            sign *= mask_sign(mask, b);
            mask |= b;
        }
        Self::basis(dim, mask, s.scale(Complex64::new(sign, 0.0)))
    }

    /// The 1-form `dx_i`.
    pub fn dx(dim: usize, i: usize) -> Self {
        Self::term(dim, &[i], S::one())
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), 1 << dim);
        Form { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, mask: usize) -> S {
        self.coeffs[mask]
    }

    pub fn get_mut(&mut self, mask: usize) -> &mut S {
        &mut self.coeffs[mask]
    }

    pub fn set(&mut self, mask: usize, s: S) {
        self.coeffs[mask] = s;
    }

    pub fn coeff(&self, idx: &MultiIndex) -> S {
        self.coeffs[idx.mask()]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of the top-degree monomial `dx_1 ∧ … ∧ dx_m`.
    pub fn top(&self) -> S {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// Nonzero terms in increasing bitmask order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, S)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (MultiIndex::from_mask(m), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Form { dim: self.dim, coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|s| s.scale(c))
    }

    /// Multiplies every coefficient by a function (degree-0 coefficient ring element).
    pub fn mul_coeff(&self, s: S) -> Self {
        self.map(|c| c * s)
    }

    /// Part of exterior degree `k`.
    pub fn degree_part(&self, k: usize) -> Self {
        let mut f = Self::zero(self.dim);
        for (m, c) in self.coeffs.iter().enumerate() {
            if m.count_ones() as usize == k {
                f.coeffs[m] = *c;
            }
        }
        f
    }

    /// Negates every odd-degree component (the grading automorphism).
    pub fn parity_flip(&self) -> Self {
        Form {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, &c)| if m.count_ones() % 2 == 1 { -c } else { c })
                .collect(),
        }
    }

    /// Highest degree with a nonzero coefficient, `None` for the zero form.
    pub fn max_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, _)| m.count_ones() as usize)
            .max()
    }

    /// `true` when all nonzero terms have the same degree parity `p`.
    pub fn has_parity(&self, p: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| c.is_zero() || m.count_ones() as usize % 2 == p % 2)
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        out.add_wedge(self, o, false);
        out
    }

    /// `self += ā ∧ b`, where `ā` is `a` or its [`parity_flip`](Self::parity_flip).
    pub fn add_wedge(&mut self, a: &Self, b: &Self, flip: bool) {
        assert!(self.dim == a.dim && a.dim == b.dim, "wedge of forms on different charts");
        let full = self.coeffs.len() - 1;
        for (ma, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let odd = flip && ma.count_ones() % 2 == 1;
            let comp = full & !ma;
            let mut mb = comp;
            loop {
                let cb = &b.coeffs[mb];
                if !cb.is_zero() {
                    let p = *ca * *cb;
                    if (mask_sign(ma, mb) < 0.0) != odd {
                        self.coeffs[ma | mb] -= p;
                    } else {
                        self.coeffs[ma | mb] += p;
                    }
                }
                if mb == 0 {
                    break;
                }
                mb = (mb - 1) & comp;
            }
        }
    }

    /// `e^ω = e^{ω₀}·Σ_k N^k/k!` with `N` the positive-degree part.
    pub fn exp(&self) -> Self {
        let e0 = self.coeffs[0].exp();
        let mut n = self.clone();
        n.coeffs[0] = S::zero();
        let mut acc = Self::one(self.dim);
        let mut power = Self::one(self.dim);
        for k in 1..=self.dim {
            power = power.wedge(&n).scale(Complex64::new(1.0 / k as f64, 0.0));
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        acc.mul_coeff(e0)
    }

    /// Values of the coefficients (derivatives discarded).
    pub fn values(&self) -> FormValue {
        Form { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c.value()).collect() }
    }

    /// Reinterprets the form on a chart whose first `self.dim` coordinates are this chart's.
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        let mut f = Self::zero(dim);
        f.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        f
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.value().norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise modulus of the difference of values.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        assert_eq!(self.dim, o.dim);
        self.coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| (a.value() - b.value()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part among the coefficient values.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.value().im.abs()).fold(0.0, f64::max)
    }
}

impl FormValue {
    /// Drops coefficients of magnitude below [`NORMALIZE_FLOOR`].
    pub fn normalize(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            if c.norm() < NORMALIZE_FLOOR {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        self
    }

    /// Promotes values to constant jets.
    pub fn to_jets(&self) -> JetForm {
        Form { dim: self.dim, coeffs: self.coeffs.iter().map(|&c| Jet::constant(c)).collect() }
    }
}

impl JetForm {
    /// Exterior derivative `d(f dx_I) = Σ_k ∂_k f dx_k ∧ dx_I`; the result has one jet order less.
    pub fn d(&self) -> Result<JetForm> {
        let n = self.coeffs.len();
        let mut out = vec![Jet::constant(Complex64::new(0.0, 0.0)); n];
        let mut order = usize::MAX;
        for (a, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            if f.order() == 0 {
                return Err(Error::JetsUnavailable { needed: 1, available: 0 });
            }
            order = order.min(f.order() - 1);
            for k in 0..self.dim {
                let b = 1 << k;
                if a & b != 0 {
                    continue;
                }
                let pk = f.partial(k).expect("order checked");
                if pk.is_zero() {
                    continue;
                }
                if mask_sign(b, a) < 0.0 {
                    out[a | b] -= pk;
                } else {
                    out[a | b] += pk;
                }
            }
        }
        let mut f = Form { dim: self.dim, coeffs: out };
        if order != usize::MAX {
            f = f.map(|c| c.truncate(order));
        }
        Ok(f)
    }

    /// Lowest jet order among nonzero coefficients (`MAX_ORDER` for the zero form).
    pub fn jet_order(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.order())
            .min()
            .unwrap_or(super::jet::MAX_ORDER)
    }

    pub fn truncate(&self, order: usize) -> JetForm {
        self.map(|c| c.truncate(order))
    }
}

/// `a ∧ b` with a chart-dimension check.
pub fn wedge(a: &FormValue, b: &FormValue) -> Result<FormValue> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, got: b.dim });
    }
    Ok(a.wedge(b))
}

impl<S: Coeff> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let v = c.value();
            write!(f, "({:.6e}{:+.6e}i) {}", v.re, v.im, MultiIndex::from_mask(m))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: Coeff> AddAssign<&Form<S>> for Form<S> {
    fn add_assign(&mut self, o: &Form<S>) {
        assert_eq!(self.dim, o.dim);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            if !b.is_zero() {
                *a += *b;
            }
        }
    }
}

impl<S: Coeff> SubAssign<&Form<S>> for Form<S> {
    fn sub_assign(&mut self, o: &Form<S>) {
        assert_eq!(self.dim, o.dim);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            if !b.is_zero() {
                *a -= *b;
            }
        }
    }
}

impl<S: Coeff> Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, o: &Form<S>) -> Form<S> {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl<S: Coeff> Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, o: &Form<S>) -> Form<S> {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl<S: Coeff> Add for Form<S> {
    type Output = Form<S>;
    fn add(mut self, o: Form<S>) -> Form<S> {
        self += &o;
        self
    }
}

impl<S: Coeff> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(mut self, o: Form<S>) -> Form<S> {
        self -= &o;
        self
    }
}

impl<S: Coeff> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.map(|c| -c)
    }
}

impl<S: Coeff> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.map(|c| -c)
    }
}
