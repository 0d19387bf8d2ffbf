//! Hermitian endomorphisms and the graded operator norm.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::SuperMatrix;
use crate::error::{Error, Result};
use crate::exterior::Coeff;

/// Hermitian defect tolerated by [`HermitianEndo::new`], relative to `max(1, max|H_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A square complex matrix with `H = H*`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianEndo {
    m: DMatrix<Complex64>,
}

impl HermitianEndo {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        let defect = max_modulus(&(&m - m.adjoint()));
        if defect > HERMITIAN_TOL * max_modulus(&m).max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(HermitianEndo { m })
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            d.len(),
            d.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        HermitianEndo { m }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    /// Real eigenvalues (ascending) and unitary eigenvectors as columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let e = self.m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
        let vals = order.iter().map(|&i| e.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(self.n(), self.n(), |r, c| e.eigenvectors[(r, order[c])]);
        (vals, vecs)
    }

    /// `e^{sH}` through the eigendecomposition.
    pub fn exp_scaled(&self, s: f64) -> DMatrix<Complex64> {
        let (vals, u) = self.eigen();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            vals.len(),
            vals.iter().map(|&l| Complex64::new((s * l).exp(), 0.0)),
        ));
        &u * d * u.adjoint()
    }

    /// `Some(h)` when `H = h·I`.
    pub fn as_scalar(&self) -> Option<f64> {
        let h = self.m[(0, 0)].re;
        let id = DMatrix::<Complex64>::identity(self.n(), self.n()) * Complex64::new(h, 0.0);
        (max_modulus(&(&self.m - id)) <= 1e-15 * h.abs().max(1.0)).then_some(h)
    }
}

/// Largest entry modulus.
pub fn max_modulus(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `sm(H)`, the smallest eigenvalue.
pub fn smallest_eigenvalue(h: &HermitianEndo) -> f64 {
    h.eigen().0[0]
}

/// Largest singular value.
pub fn operator_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// `‖Σ_I M_I dx_I‖ = Σ_I ‖M_I‖_op`, on coefficient values.
pub fn graded_norm<S: Coeff>(m: &SuperMatrix<S>) -> f64 {
    let n = m.n();
    (0..1usize << m.dim())
        .map(|mask| {
            let block = DMatrix::from_fn(n, n, |i, j| m.get(i, j).get(mask).value());
            if max_modulus(&block) == 0.0 {
                0.0
            } else {
                operator_norm(&block)
            }
        })
        .sum()
}

/// `𝒫(t) = Σ_{k=0}^{m} t^k/k!`.
pub fn truncated_exp_polynomial(t: f64, m: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=m {
        term *= t / k as f64;
        sum += term;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_of_diagonal() {
        assert!((smallest_eigenvalue(&HermitianEndo::diagonal(&[3.0, -2.0])) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(HermitianEndo::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn norm_of_heat_operator() {
        let z = |re, im| Complex64::new(re, im);
        let m = DMatrix::from_row_slice(2, 2, &[z(1.0, 0.0), z(0.3, -0.4), z(0.3, 0.4), z(-0.7, 0.0)]);
        let h = HermitianEndo::new(m).unwrap();
        let e = h.exp_scaled(-1.0);
        assert!((operator_norm(&e) - (-smallest_eigenvalue(&h)).exp()).abs() < 1e-13);
    }

    #[test]
    fn polynomial() {
        assert!((truncated_exp_polynomial(2.0, 2) - 5.0).abs() < 1e-15);
    }
}
