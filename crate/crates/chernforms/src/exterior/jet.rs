//! Truncated second-order Taylor jets over a chart.
//!
//! A [`Jet`] carries a complex value together with its first and (optionally)
//! second partial derivatives with respect to the chart coordinates. Arithmetic
//! propagates derivatives exactly (forward mode), truncating to the smaller of
//! the two operand orders.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// Largest chart dimension for which jets are available.
pub const MAX_DIM: usize = 6;
/// Highest derivative order tracked by a [`Jet`].
pub const MAX_ORDER: usize = 2;

const HESS_LEN: usize = MAX_DIM * (MAX_DIM + 1) / 2;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
fn hidx(k: usize, l: usize) -> usize {
    let (a, b) = if k <= l { (k, l) } else { (l, k) };
    b * (b + 1) / 2 + a
}

/// Scalar coefficient ring used by forms and graded matrices.
///
/// Implemented by plain complex numbers (values only) and by [`Jet`].
pub trait Coeff:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn from_c(c: Complex64) -> Self;
    fn value(&self) -> Complex64;
    fn scale(self, c: Complex64) -> Self;
    /// Exact zero test (value and every tracked derivative).
    fn is_zero(&self) -> bool;
    fn conj(self) -> Self;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn recip(self) -> Self;
    fn sqrt(self) -> Self;
    /// Number of derivative orders carried (0 for plain values).
    fn jet_order(&self) -> usize;

    fn zero() -> Self {
        Self::from_c(ZERO)
    }
    fn one() -> Self {
        Self::from_c(Complex64::new(1.0, 0.0))
    }
    fn from_f64(x: f64) -> Self {
        Self::from_c(Complex64::new(x, 0.0))
    }
}

impl Coeff for Complex64 {
    fn from_c(c: Complex64) -> Self {
        c
    }
    fn value(&self) -> Complex64 {
        *self
    }
    fn scale(self, c: Complex64) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn recip(self) -> Self {
        Complex64::new(1.0, 0.0) / self
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
    fn jet_order(&self) -> usize {
        0
    }
}

/// Value, gradient and Hessian of a complex function of the chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: u8,
    value: Complex64,
    grad: [Complex64; MAX_DIM],
    hess: [Complex64; HESS_LEN],
}

impl Jet {
    /// A constant: exact to every order.
    pub fn constant(c: Complex64) -> Self {
        Jet {
            order: MAX_ORDER as u8,
            value: c,
            grad: [ZERO; MAX_DIM],
            hess: [ZERO; HESS_LEN],
        }
    }

    /// The coordinate function `x_k` (0-based `k`) evaluated at `x`, carrying `order` derivatives.
    pub fn variable(x: f64, k: usize, order: usize) -> Self {
        assert!(k < MAX_DIM, "jets support at most {MAX_DIM} coordinates");
        let mut j = Jet::constant(Complex64::new(x, 0.0));
        j.order = order.min(MAX_ORDER) as u8;
        if order >= 1 {
            j.grad[k] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Builds a jet from explicit derivative data; `hess` is read as a full symmetric matrix.
    pub fn from_parts(value: Complex64, grad: &[Complex64], hess: Option<&[Vec<Complex64>]>) -> Self {
        let mut j = Jet::constant(value);
        j.order = 1;
        for (k, g) in grad.iter().enumerate() {
            j.grad[k] = *g;
        }
        if let Some(h) = hess {
            j.order = 2;
            for (k, row) in h.iter().enumerate() {
                for (l, v) in row.iter().enumerate().skip(k) {
                    j.hess[hidx(k, l)] = *v;
                }
            }
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn val(&self) -> Complex64 {
        self.value
    }

    pub fn grad(&self, k: usize) -> Complex64 {
        if self.order >= 1 {
            self.grad[k]
        } else {
            ZERO
        }
    }

    pub fn hess(&self, k: usize, l: usize) -> Complex64 {
        if self.order >= 2 {
            self.hess[hidx(k, l)]
        } else {
            ZERO
        }
    }

    /// Drops derivative information above `order`.
    pub fn truncate(mut self, order: usize) -> Self {
        let o = order.min(self.order as usize);
        self.order = o as u8;
        if o < 2 {
            self.hess = [ZERO; HESS_LEN];
        }
        if o < 1 {
            self.grad = [ZERO; MAX_DIM];
        }
        self
    }

    /// The partial derivative `∂_k` as a jet of one lower order.
    pub fn partial(&self, k: usize) -> Option<Jet> {
        if self.order == 0 {
            return None;
        }
        let mut j = Jet::constant(self.grad[k]);
        j.order = self.order - 1;
        if self.order >= 2 {
            for l in 0..MAX_DIM {
                j.grad[l] = self.hess[hidx(k, l)];
            }
        }
        Some(j)
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    pub fn compose(self, f0: Complex64, f1: Complex64, f2: Complex64) -> Self {
        let mut r = Jet::constant(f0);
        r.order = self.order;
        if self.order >= 1 {
            for k in 0..MAX_DIM {
                r.grad[k] = f1 * self.grad[k];
            }
        }
        if self.order >= 2 {
            for l in 0..MAX_DIM {
                for k in 0..=l {
                    let i = hidx(k, l);
                    r.hess[i] = f1 * self.hess[i] + f2 * self.grad[k] * self.grad[l];
                }
            }
        }
        r
    }

    pub fn powi(self, n: i32) -> Self {
        let v = self.value;
        let nf = n as f64;
        let f0 = v.powi(n);
        let f1 = if n == 0 { ZERO } else { v.powi(n - 1) * nf };
        let f2 = if n == 0 || n == 1 { ZERO } else { v.powi(n - 2) * (nf * (nf - 1.0)) };
        self.compose(f0, f1, f2)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self += o;
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        if o.order < self.order {
            *self = self.truncate(o.order as usize);
        }
        self.value += o.value;
        if self.order >= 1 {
            for k in 0..MAX_DIM {
                self.grad[k] += o.grad[k];
            }
        }
        if self.order >= 2 {
            for i in 0..HESS_LEN {
                self.hess[i] += o.hess[i];
            }
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        self -= o;
        self
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        *self += -o;
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.value = -self.value;
        for g in self.grad.iter_mut() {
            *g = -*g;
        }
        for h in self.hess.iter_mut() {
            *h = -*h;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut r = Jet::constant(self.value * o.value);
        r.order = order;
        if order >= 1 {
            for k in 0..MAX_DIM {
                r.grad[k] = self.value * o.grad[k] + self.grad[k] * o.value;
            }
        }
        if order >= 2 {
            for l in 0..MAX_DIM {
                for k in 0..=l {
                    let i = hidx(k, l);
                    r.hess[i] = self.value * o.hess[i]
                        + self.hess[i] * o.value
                        + self.grad[k] * o.grad[l]
                        + self.grad[l] * o.grad[k];
                }
            }
        }
        r
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Coeff for Jet {
    fn from_c(c: Complex64) -> Self {
        Jet::constant(c)
    }
    fn value(&self) -> Complex64 {
        self.value
    }
    fn scale(mut self, c: Complex64) -> Self {
        self.value *= c;
        for g in self.grad.iter_mut() {
            *g *= c;
        }
        for h in self.hess.iter_mut() {
            *h *= c;
        }
        self
    }
    fn is_zero(&self) -> bool {
        self.value == ZERO && self.grad.iter().all(|g| *g == ZERO) && self.hess.iter().all(|h| *h == ZERO)
    }
    fn conj(mut self) -> Self {
        self.value = self.value.conj();
        for g in self.grad.iter_mut() {
            *g = g.conj();
        }
        for h in self.hess.iter_mut() {
            *h = h.conj();
        }
        self
    }
    fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }
    fn sin(self) -> Self {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.compose(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.compose(c, -s, -c)
    }
    fn recip(self) -> Self {
        let r = Complex64::new(1.0, 0.0) / self.value;
        self.compose(r, -r * r, r * r * r * 2.0)
    }
    fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * self.value))
    }
    fn jet_order(&self) -> usize {
        self.order as usize
    }
}

/// Coordinate jets `x_0, …, x_{m−1}` at a chart point.
pub fn coordinate_jets(p: &[f64], order: usize) -> Vec<Jet> {
    p.iter().enumerate().map(|(k, &x)| Jet::variable(x, k, order)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn product_rule_and_hessian() {
        let x = Jet::variable(2.0, 0, 2);
        let y = Jet::variable(3.0, 1, 2);
        let f = x * x * y;
        assert_eq!(f.val(), c(12.0));
        assert_eq!(f.grad(0), c(12.0));
        assert_eq!(f.grad(1), c(4.0));
        assert_eq!(f.hess(0, 0), c(6.0));
        assert_eq!(f.hess(0, 1), c(4.0));
        assert_eq!(f.hess(1, 1), c(0.0));
    }

    #[test]
    fn order_truncates_to_minimum() {
        let x = Jet::variable(1.0, 0, 1);
        let y = Jet::variable(1.0, 1, 2);
        assert_eq!((x * y).order(), 1);
        assert_eq!((x * Jet::constant(c(2.0))).order(), 1);
    }

    #[test]
    fn elementary_functions_match_finite_differences() {
        let f = |x: f64| -> Jet {
            let j = Jet::variable(x, 0, 2);
            (j.sin() * j.exp() + j.sqrt()).recip()
        };
        let x0 = 0.7;
        let h = 1e-4;
        let fv = |x: f64| f(x).val().re;
        let d1 = (fv(x0 + h) - fv(x0 - h)) / (2.0 * h);
        let d2 = (fv(x0 + h) - 2.0 * fv(x0) + fv(x0 - h)) / (h * h);
        let j = f(x0);
        assert!((j.grad(0).re - d1).abs() < 1e-7);
        assert!((j.hess(0, 0).re - d2).abs() < 1e-5);
    }

    #[test]
    fn partial_lowers_order() {
        let x = Jet::variable(2.0, 0, 2);
        let y = Jet::variable(5.0, 1, 2);
        let f = x * x * y;
        let fx = f.partial(0).unwrap();
        assert_eq!(fx.order(), 1);
        assert_eq!(fx.val(), c(20.0));
        assert_eq!(fx.grad(1), c(4.0));
        assert!(fx.partial(0).unwrap().partial(0).is_none());
    }
}
