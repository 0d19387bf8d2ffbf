//! Contiguous storage for super matrices, used by the Taylor kernel of [`super::series_exp`].

use std::sync::OnceLock;

use num_complex::Complex64;

use super::matrix::{ParitySplit, SuperMatrix};
use crate::exterior::form::mask_sign;
use crate::exterior::{Coeff, Form};

const MAX_FORM_DIM: usize = 16;

/// For each mask `a`, the masks `b` disjoint from it with `a|b` and the two signs
/// of `e_a ∧ e_b` (plain, and with `e_a` parity-flipped).
pub(crate) struct WedgeTable {
    rows: Vec<Vec<(usize, usize, f64, f64)>>,
}

impl WedgeTable {
    /// Shared table for chart dimension `dim`.
    pub(crate) fn cached(dim: usize) -> &'static WedgeTable {
        static TABLES: OnceLock<Vec<OnceLock<WedgeTable>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| (0..=MAX_FORM_DIM).map(|_| OnceLock::new()).collect());
        tables[dim].get_or_init(|| WedgeTable::new(dim))
    }

    fn new(dim: usize) -> Self {
        let len = 1usize << dim;
        let rows = (0..len)
            .map(|a| {
                (0..len)
                    .filter(|&b| a & b == 0)
                    .map(|b| {
                        let s = mask_sign(a, b);
                        let f = if a.count_ones() % 2 == 1 { -s } else { s };
                        (b, a | b, s, f)
                    })
                    .collect()
            })
            .collect();
        WedgeTable { rows }
    }
}

/// Entry `(i, j)` occupies `data[(i·n + j)·len ..][..len]`.
#[derive(Clone)]
pub(crate) struct Flat<S> {
    n: usize,
    len: usize,
    odd: Vec<bool>,
    data: Vec<S>,
}

impl<S: Coeff> Flat<S> {
    pub(crate) fn from_matrix(m: &SuperMatrix<S>) -> Self {
        let n = m.n();
        let len = 1usize << m.dim();
        let mut data = Vec::with_capacity(n * n * len);
        for e in m.entries() {
            data.extend_from_slice(e.coeffs());
        }
        let split = m.split();
        Flat { n, len, odd: (0..n).map(|i| split.parity(i) == 1).collect(), data }
    }

    pub(crate) fn to_matrix(&self, split: ParitySplit, dim: usize) -> SuperMatrix<S> {
        SuperMatrix::from_fn(split, dim, |i, j| {
            let k = (i * self.n + j) * self.len;
            Form::from_coeffs(dim, self.data[k..k + self.len].to_vec())
        })
    }

    pub(crate) fn identity_like(&self) -> Self {
        let mut out = self.zeros_like();
        for i in 0..self.n {
            out.data[(i * self.n + i) * self.len] = S::one();
        }
        out
    }

    pub(crate) fn zeros_like(&self) -> Self {
        Flat { n: self.n, len: self.len, odd: self.odd.clone(), data: vec![S::zero(); self.data.len()] }
    }

    pub(crate) fn scale(&mut self, c: Complex64) {
        for x in &mut self.data {
            *x = x.scale(c);
        }
    }

    pub(crate) fn add_assign(&mut self, o: &Self) {
        for (x, y) in self.data.iter_mut().zip(&o.data) {
            *x += *y;
        }
    }

    /// `Σ_I ‖M_I‖_F` on values.
    pub(crate) fn frobenius_graded_norm(&self) -> f64 {
        let mut sq = vec![0.0; self.len];
        for (k, x) in self.data.iter().enumerate() {
            sq[k % self.len] += x.value().norm_sqr();
        }
        sq.iter().map(|s| s.sqrt()).sum()
    }

    /// `out = self · o` in `End(E) ⊗ Λ`.
    pub(crate) fn mul_into(&self, o: &Self, table: &WedgeTable, out: &mut Self) {
        let (n, len) = (self.n, self.len);
        out.data.iter_mut().for_each(|x| *x = S::zero());
        for i in 0..n {
            for j in 0..n {
                let a = &self.data[(i * n + j) * len..][..len];
                for l in 0..n {
                    let flip = self.odd[j] != self.odd[l];
                    let b = &o.data[(j * n + l) * len..][..len];
                    let dst = &mut out.data[(i * n + l) * len..][..len];
                    for (ma, ca) in a.iter().enumerate() {
                        if ca.is_zero() {
                            continue;
                        }
                        for &(mb, mab, s, f) in &table.rows[ma] {
                            let cb = b[mb];
                            if cb.is_zero() {
                                continue;
                            }
                            let p = *ca * cb;
                            if (if flip { f } else { s }) < 0.0 {
                                dst[mab] -= p;
                            } else {
                                dst[mab] += p;
                            }
                        }
                    }
                }
            }
        }
    }
}
