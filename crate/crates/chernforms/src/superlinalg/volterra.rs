//! `e^{H+R}` by Volterra series for Hermitian `H` and degree-positive `R`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::exp::series_exp;
use super::matrix::{SuperMatrix, SuperMatrixForm};
use super::norm::HermitianEndo;
use crate::error::{Error, Result};
use crate::quadrature::legendre_on;

/// Default Gauss–Legendre order per simplex axis.
pub const DEFAULT_SIMPLEX_ORDER: usize = 12;

/// `e^H + Σ_{k=1}^{m} ∫_{Δ_k} e^{s₁H} R e^{s₂H} ⋯ R e^{s_{k+1}H} ds`.
///
/// `Δ_k` is mapped to `[0,1]^k` by `s_i = u_i Π_{j<i}(1 − u_j)`; each axis uses a
/// `quad_order`-point Gauss–Legendre rule. For scalar `H = h` the exact value
/// `e^h Σ_k R^k/k!` is returned.
pub fn volterra_exp(h: &HermitianEndo, r: &SuperMatrixForm, quad_order: usize) -> Result<SuperMatrixForm> {
    if h.n() != r.n() {
        return Err(Error::DimensionMismatch { expected: r.n(), got: h.n() });
    }
    if !r.is_degree_positive() {
        return Err(Error::DegreeZeroPart);
    }
    let (split, dim) = (r.split(), r.dim());
    if let Some(hs) = h.as_scalar() {
        return Ok(series_exp(r).scale(Complex64::new(hs.exp(), 0.0)));
    }
    let heat = |s: f64| SuperMatrix::from_numeric(split, dim, &h.exp_scaled(s));
    let mut total = heat(1.0);
    let mut power = r.clone();
    let rule = legendre_on(0.0, 1.0, quad_order.max(1));
    for k in 1..=dim {
        if power.is_zero_matrix() {
            break;
        }
        total = total.add(&simplex_term(&heat, r, k, &rule));
        power = power.mul(r);
    }
    Ok(total)
}

fn simplex_term(
    heat: &impl Fn(f64) -> SuperMatrixForm,
    r: &SuperMatrixForm,
    k: usize,
    rule: &[(f64, f64)],
) -> SuperMatrixForm {
    let q = rule.len();
    let mut acc = SuperMatrix::zero(r.split(), r.dim());
    let mut idx = vec![0usize; k];
    loop {
        let mut rest = 1.0;
        let mut weight = 1.0;
        let mut s = Vec::with_capacity(k + 1);
        for &i in &idx {
            let (u, w) = rule[i];
            weight *= w * rest;
            s.push(u * rest);
            rest *= 1.0 - u;
        }
        s.push(rest);
        let mut prod = heat(s[0]);
        for &si in &s[1..] {
            prod = prod.mul(r).mul(&heat(si));
        }
        acc = acc.add(&prod.scale(Complex64::new(weight, 0.0)));
        let mut a = 0;
        loop {
            if a == k {
                return acc;
            }
            idx[a] += 1;
            if idx[a] < q {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// Convenience constructor for a Hermitian matrix from row-major entries.
pub fn hermitian_from_rows(n: usize, rows: &[Complex64]) -> Result<HermitianEndo> {
    HermitianEndo::new(DMatrix::from_row_slice(n, n, rows))
}
