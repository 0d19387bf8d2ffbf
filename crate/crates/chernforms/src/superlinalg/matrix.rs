//! Super matrices with form entries.
//!
//! An element of `End(E) ⊗ Λ` is stored as the matrix `(m_ij)` of the sum
//! `Σ E_ij m_ij`: the matrix unit stands on the left and the form acts first.
//! Moving a form past an odd matrix unit costs the form's parity, which gives
//! `(MN)_il = Σ_j (−1)^{|m_ij|(p_j+p_l)} m_ij n_jl`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::{Coeff, Form, FormValue, Jet, JetForm};

/// Ranks of the even and odd summands `E = E⁺ ⊕ E⁻`; even basis vectors come first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParitySplit {
    pub plus: usize,
    pub minus: usize,
}

impl ParitySplit {
    pub fn new(plus: usize, minus: usize) -> Result<Self> {
        if plus + minus == 0 {
            return Err(Error::Config("empty parity split".into()));
        }
        Ok(ParitySplit { plus, minus })
    }

    pub fn n(&self) -> usize {
        self.plus + self.minus
    }

    /// 0 for even basis vectors, 1 for odd ones.
    pub fn parity(&self, i: usize) -> usize {
        usize::from(i >= self.plus)
    }
}

/// Square matrix of forms over a parity split.
#[derive(Clone, PartialEq)]
pub struct SuperMatrix<S> {
    split: ParitySplit,
    dim: usize,
    entries: Vec<Form<S>>,
}

/// Pointwise super matrix with complex coefficients.
pub type SuperMatrixForm = SuperMatrix<Complex64>;
/// Super matrix whose entries carry jets.
pub type JetSuperMatrix = SuperMatrix<Jet>;

impl<S: Coeff> std::fmt::Debug for SuperMatrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SuperMatrix").field("split", &self.split).field("entries", &self.entries).finish()
    }
}

impl<S: Coeff> SuperMatrix<S> {
    pub fn zero(split: ParitySplit, dim: usize) -> Self {
        let n = split.n();
        SuperMatrix { split, dim, entries: vec![Form::zero(dim); n * n] }
    }

    pub fn identity(split: ParitySplit, dim: usize) -> Self {
        let mut m = Self::zero(split, dim);
        for i in 0..split.n() {
            m.set(i, i, Form::one(dim));
        }
        m
    }

    pub fn from_fn(split: ParitySplit, dim: usize, mut f: impl FnMut(usize, usize) -> Form<S>) -> Self {
        let n = split.n();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                assert_eq!(e.dim(), dim);
                entries.push(e);
            }
        }
        SuperMatrix { split, dim, entries }
    }

    /// Degree-0 matrix from row-major scalars.
    pub fn from_scalars(split: ParitySplit, dim: usize, a: &[S]) -> Self {
        let n = split.n();
        assert_eq!(a.len(), n * n);
        Self::from_fn(split, dim, |i, j| Form::scalar(dim, a[i * n + j]))
    }

    pub fn split(&self) -> ParitySplit {
        self.split
    }

    pub fn n(&self) -> usize {
        self.split.n()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Form<S> {
        &self.entries[i * self.n() + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Form<S> {
        let n = self.n();
        &mut self.entries[i * n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form<S>) {
        assert_eq!(f.dim(), self.dim);
        let n = self.n();
        self.entries[i * n + j] = f;
    }

    pub fn entries(&self) -> &[Form<S>] {
        &self.entries
    }

    fn zip(&self, o: &Self, f: impl Fn(&Form<S>, &Form<S>) -> Form<S>) -> Self {
        assert_eq!(self.split, o.split);
        assert_eq!(self.dim, o.dim);
        SuperMatrix {
            split: self.split,
            dim: self.dim,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Form<S>) -> Form<S>) -> Self {
        SuperMatrix { split: self.split, dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn mul_coeff(&self, s: S) -> Self {
        self.map(|a| a.mul_coeff(s))
    }

    /// Left multiplication by a form: `ω · M`.
    pub fn left_form_mul(&self, w: &Form<S>) -> Self {
        let n = self.n();
        let flipped = w.parity_flip();
        SuperMatrix::from_fn(self.split, self.dim, |i, j| {
            let odd_unit = (self.split.parity(i) + self.split.parity(j)) % 2 == 1;
            let lhs = if odd_unit { &flipped } else { w };
            lhs.wedge(&self.entries[i * n + j])
        })
    }

    /// Graded product in `End(E) ⊗ Λ`.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.split, o.split);
        assert_eq!(self.dim, o.dim);
        let n = self.n();
        let mut out = Self::zero(self.split, self.dim);
        for i in 0..n {
            for j in 0..n {
                let a = &self.entries[i * n + j];
                if a.is_zero() {
                    continue;
                }
                for l in 0..n {
                    let b = &o.entries[j * n + l];
                    if b.is_zero() {
                        continue;
                    }
                    let odd_unit = (self.split.parity(j) + self.split.parity(l)) % 2 == 1;
                    out.entries[i * n + l].add_wedge(a, b, odd_unit);
                }
            }
        }
        out
    }

    /// `Str M = Σ_{i even} M_ii − Σ_{i odd} M_ii`.
    pub fn supertrace(&self) -> Form<S> {
        let mut acc = Form::zero(self.dim);
        for i in 0..self.n() {
            if self.split.parity(i) == 0 {
                acc += self.get(i, i);
            } else {
                acc -= self.get(i, i);
            }
        }
        acc
    }

    /// Ordinary trace (used for even matrices of commuting entries).
    pub fn trace(&self) -> Form<S> {
        let mut acc = Form::zero(self.dim);
        for i in 0..self.n() {
            acc += self.get(i, i);
        }
        acc
    }

    /// Matrix of degree-0 coefficient values.
    pub fn degree_zero_values(&self) -> DMatrix<Complex64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| self.get(i, j).get(0).value())
    }

    /// Removes the degree-0 component of every entry.
    pub fn positive_part(&self) -> Self {
        self.map(|e| {
            let mut e = e.clone();
            e.set(0, S::zero());
            e
        })
    }

    pub fn degree_zero_part(&self) -> Self {
        self.map(|e| e.degree_part(0))
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// `true` when every degree-0 coefficient vanishes.
    pub fn is_degree_positive(&self) -> bool {
        self.entries.iter().all(|e| e.get(0).is_zero())
    }

    /// Total parity of every nonzero term (row + column + form degree), if homogeneous.
    pub fn total_parity(&self) -> Option<usize> {
        let n = self.n();
        let mut found = None;
        for i in 0..n {
            for j in 0..n {
                let unit = self.split.parity(i) + self.split.parity(j);
                for (m, c) in self.get(i, j).coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let p = (unit + m.count_ones() as usize) % 2;
                    match found {
                        None => found = Some(p),
                        Some(q) if q != p => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(found.unwrap_or(0))
    }

    /// Graded commutator `[A,B] = AB − (−1)^{|A||B|}BA` of homogeneous matrices.
    pub fn supercommutator(&self, o: &Self) -> Self {
        let pa = self.total_parity().unwrap_or(0);
        let pb = o.total_parity().unwrap_or(0);
        let ab = self.mul(o);
        let ba = o.mul(self);
        if pa * pb % 2 == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    pub fn values(&self) -> SuperMatrixForm {
        SuperMatrix { split: self.split, dim: self.dim, entries: self.entries.iter().map(|e| e.values()).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.entries.iter().zip(&o.entries).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    /// Σ_I ‖M_I‖_F over the form components of the values; an upper bound for the graded norm.
    pub fn frobenius_graded_norm(&self) -> f64 {
        let len = 1usize << self.dim;
        let mut sq = vec![0.0; len];
        for e in &self.entries {
            for (m, c) in e.coeffs().iter().enumerate() {
                sq[m] += c.value().norm_sqr();
            }
        }
        sq.iter().map(|s| s.sqrt()).sum()
    }
}

impl JetSuperMatrix {
    /// Matrix of the graded commutator `[d, M]`: entries `(−1)^{p_i+p_j} d m_ij`.
    pub fn d_graded(&self) -> Result<JetSuperMatrix> {
        let n = self.n();
        let mut out = SuperMatrix::zero(self.split, self.dim);
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let de = e.d()?;
                let odd = (self.split.parity(i) + self.split.parity(j)) % 2 == 1;
                out.set(i, j, if odd { -de } else { de });
            }
        }
        Ok(out)
    }

    pub fn truncate(&self, order: usize) -> JetSuperMatrix {
        self.map(|e| e.truncate(order))
    }
}

impl SuperMatrixForm {
    pub fn from_numeric(split: ParitySplit, dim: usize, a: &DMatrix<Complex64>) -> Self {
        let n = split.n();
        assert_eq!((a.nrows(), a.ncols()), (n, n));
        Self::from_fn(split, dim, |i, j| FormValue::scalar(dim, a[(i, j)]))
    }

    pub fn to_jets(&self) -> JetSuperMatrix {
        SuperMatrix { split: self.split, dim: self.dim, entries: self.entries.iter().map(|e| e.to_jets()).collect() }
    }
}

/// Building block for jet matrices from scalar jets.
pub fn jet_scalar_matrix(split: ParitySplit, dim: usize, a: &[Jet]) -> JetSuperMatrix {
    SuperMatrix::from_scalars(split, dim, a)
}

/// Jet form helper used by matrix builders.
pub fn jet_entry(dim: usize, s: Jet) -> JetForm {
    JetForm::scalar(dim, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn supertrace_of_diagonal() {
        let s = ParitySplit::new(1, 1).unwrap();
        let m = SuperMatrixForm::from_scalars(s, 1, &[c(3.0), c(0.0), c(0.0), c(5.0)]);
        assert_eq!(m.supertrace().get(0), c(-2.0));
    }

    #[test]
    fn odd_form_past_odd_unit() {
        // (E12 dx)(E21 dy) = −E11 dx∧dy
        let s = ParitySplit::new(1, 1).unwrap();
        let mut a = SuperMatrixForm::zero(s, 2);
        a.set(0, 1, FormValue::dx(2, 1));
        let mut b = SuperMatrixForm::zero(s, 2);
        b.set(1, 0, FormValue::dx(2, 2));
        let p = a.mul(&b);
        assert_eq!(p.get(0, 0).get(0b11), c(-1.0));
        let q = b.mul(&a);
        assert_eq!(q.get(1, 1).get(0b11), c(1.0));
    }

    #[test]
    fn parity_of_bott_v() {
        let s = ParitySplit::new(1, 1).unwrap();
        let v = SuperMatrixForm::from_scalars(s, 2, &[c(0.0), c(1.0), c(2.0), c(0.0)]);
        assert_eq!(v.total_parity(), Some(1));
        let dv = s;
        let _ = dv;
        let mut w = SuperMatrixForm::zero(s, 2);
        w.set(0, 0, FormValue::dx(2, 1));
        assert_eq!(w.total_parity(), Some(1));
        assert_eq!(v.add(&SuperMatrixForm::identity(s, 2)).total_parity(), None);
    }
}
