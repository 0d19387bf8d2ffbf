//! Exponentials in `End(E) ⊗ Λ`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::flat::{Flat, WedgeTable};
use super::matrix::SuperMatrix;
use crate::error::{Error, Result};
use crate::exterior::form::mask_sign;
use crate::exterior::{Coeff, Form};

/// Largest matrix size `n·2^m` accepted by [`graded_exp`].
pub const REGULAR_REP_CAP: usize = 4096;

const TAYLOR_TERMS: usize = 20;
const SCALE_TARGET: f64 = 0.5;
const TAIL_TOL: f64 = 1e-17;

fn sign(odd: bool) -> f64 {
    if odd {
        -1.0
    } else {
        1.0
    }
}

/// Faithful representation of `End(E) ⊗ Λ` on `Λ ⊗ E`; basis `(K, l)` at index `K·n + l`.
pub fn regular_representation<S: Coeff>(m: &SuperMatrix<S>) -> Result<DMatrix<Complex64>> {
    let n = m.n();
    let len = 1usize << m.dim();
    let size = n * len;
    if size > REGULAR_REP_CAP {
        return Err(Error::DimensionCap { size, cap: REGULAR_REP_CAP });
    }
    let split = m.split();
    let mut out = DMatrix::zeros(size, size);
    for i in 0..n {
        for l in 0..n {
            let unit_odd = (split.parity(i) + split.parity(l)) % 2 == 1;
            for (im, c) in m.get(i, l).coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = c.value();
                for k in 0..len {
                    if im & k != 0 {
                        continue;
                    }
                    let deg = (im.count_ones() + k.count_ones()) as usize;
                    let s = mask_sign(im, k) * sign(unit_odd && deg % 2 == 1);
                    out[((im | k) * n + i, k * n + l)] += c * s;
                }
            }
        }
    }
    Ok(out)
}

/// Inverse of [`regular_representation`] on its image: reads the column block of `K = ∅`.
pub fn from_regular_representation(
    y: &DMatrix<Complex64>,
    split: super::ParitySplit,
    dim: usize,
) -> SuperMatrix<Complex64> {
    let n = split.n();
    let len = 1usize << dim;
    SuperMatrix::from_fn(split, dim, |i, l| {
        let unit_odd = (split.parity(i) + split.parity(l)) % 2 == 1;
        let coeffs = (0..len)
            .map(|im| y[(im * n + i, l)] * sign(unit_odd && im.count_ones() % 2 == 1))
            .collect();
        Form::from_coeffs(dim, coeffs)
    })
}

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn dense_exp(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = one_norm(a);
    let squarings = if norm > SCALE_TARGET { (norm / SCALE_TARGET).log2().ceil() as u32 } else { 0 };
    let x = a * Complex64::new(0.5f64.powi(squarings as i32), 0.0);
    let id = DMatrix::<Complex64>::identity(a.nrows(), a.ncols());
    let mut t = id.clone();
    for k in (1..=TAYLOR_TERMS).rev() {
        t = &id + (&x * &t) * Complex64::new(1.0 / k as f64, 0.0);
    }
    for _ in 0..squarings {
        t = &t * &t;
    }
    t
}

/// `exp(M)` through the regular representation of dimension `n·2^m`.
///
/// Dense scaling and squaring with a degree-20 Taylor polynomial. Fails with
/// [`Error::DimensionCap`] when `n·2^m` exceeds [`REGULAR_REP_CAP`].
pub fn graded_exp<S: Coeff>(m: &SuperMatrix<S>) -> Result<SuperMatrix<Complex64>> {
    let rep = regular_representation(m)?;
    Ok(from_regular_representation(&dense_exp(&rep), m.split(), m.dim()))
}

/// `exp(M)` computed directly in the super-matrix algebra, generic over jets.
///
/// Scaling and squaring on `Σ_I ‖M_I‖_F`; the nilpotent form part makes the
/// Taylor tail vanish past degree `m`, so the error is governed by the degree-0 block.
pub fn series_exp<S: Coeff>(m: &SuperMatrix<S>) -> SuperMatrix<S> {
    let norm = m.frobenius_graded_norm();
    let squarings = if norm > SCALE_TARGET { (norm / SCALE_TARGET).log2().ceil() as u32 } else { 0 };
    let table = WedgeTable::cached(m.dim());
    let mut x = Flat::from_matrix(m);
    x.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut t = x.identity_like();
    let mut term = t.clone();
    let mut buf = x.zeros_like();
    for k in 1..=TAYLOR_TERMS {
        x.mul_into(&term, table, &mut buf);
        std::mem::swap(&mut term, &mut buf);
        term.scale(Complex64::new(1.0 / k as f64, 0.0));
        t.add_assign(&term);
        if term.frobenius_graded_norm() < TAIL_TOL {
            break;
        }
    }
    for _ in 0..squarings {
        t.mul_into(&t, table, &mut buf);
        std::mem::swap(&mut t, &mut buf);
    }
    t.to_matrix(m.split(), m.dim())
}

/// `exp(N) = Σ_{k≤m} N^k/k!` for `N` without degree-0 part; the sum is exact.
pub fn nilpotent_exp<S: Coeff>(n: &SuperMatrix<S>) -> Result<SuperMatrix<S>> {
    if !n.is_degree_positive() {
        return Err(Error::DegreeZeroPart);
    }
    let table = WedgeTable::cached(n.dim());
    let x = Flat::from_matrix(n);
    let mut t = x.identity_like();
    let mut term = t.clone();
    let mut buf = x.zeros_like();
    for k in 1..=n.dim() {
        x.mul_into(&term, table, &mut buf);
        std::mem::swap(&mut term, &mut buf);
        term.scale(Complex64::new(1.0 / k as f64, 0.0));
        t.add_assign(&term);
    }
    Ok(t.to_matrix(n.split(), n.dim()))
}

#[cfg(test)]
mod tests {
    use super::super::ParitySplit;
    use super::*;
    use super::super::norm::max_modulus;
    use crate::exterior::FormValue;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(split: ParitySplit, dim: usize, seed: u64) -> SuperMatrix<Complex64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        SuperMatrix::from_fn(split, dim, |_, _| {
            Form::from_coeffs(dim, (0..1 << dim).map(|_| c(next(), next())).collect())
        })
    }

    #[test]
    fn representation_is_multiplicative() {
        let s = ParitySplit::new(2, 1).unwrap();
        let a = sample(s, 3, 1);
        let b = sample(s, 3, 2);
        let lhs = regular_representation(&a.mul(&b)).unwrap();
        let rhs = regular_representation(&a).unwrap() * regular_representation(&b).unwrap();
        assert!(max_modulus(&(lhs - rhs)) < 1e-13);
    }

    #[test]
    fn representation_round_trip() {
        let s = ParitySplit::new(1, 2).unwrap();
        let a = sample(s, 2, 7);
        let back = from_regular_representation(&regular_representation(&a).unwrap(), s, 2);
        assert!(back.max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn engines_agree() {
        let s = ParitySplit::new(2, 2).unwrap();
        let a = sample(s, 3, 11).scale(c(3.0, 0.0));
        let g = graded_exp(&a).unwrap();
        let e = series_exp(&a);
        assert!(g.max_abs_diff(&e) < 1e-11 * g.max_abs().max(1.0));
    }

    #[test]
    fn exp_of_nilpotent_two_form() {
        // exp(E11·dx1∧dx2) = I + E11·dx1∧dx2
        let s = ParitySplit::new(1, 1).unwrap();
        let mut a = SuperMatrix::<Complex64>::zero(s, 2);
        a.set(0, 0, FormValue::basis(2, 0b11, c(1.0, 0.0)));
        let e = graded_exp(&a).unwrap();
        let mut want = SuperMatrix::identity(s, 2);
        want.set(0, 0, FormValue::one(2) + FormValue::basis(2, 0b11, c(1.0, 0.0)));
        assert!(e.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn nilpotent_exp_matches_series() {
        let s = ParitySplit::new(2, 1).unwrap();
        let a = sample(s, 3, 5).positive_part().scale(c(2.0, 0.0));
        assert!(nilpotent_exp(&a).unwrap().max_abs_diff(&series_exp(&a)) < 1e-13);
        assert!(matches!(nilpotent_exp(&sample(s, 3, 5)), Err(Error::DegreeZeroPart)));
    }

    #[test]
    fn dimension_cap() {
        let s = ParitySplit::new(40, 40).unwrap();
        let a = SuperMatrix::<Complex64>::zero(s, 6);
        assert!(matches!(graded_exp(&a), Err(Error::DimensionCap { .. })));
    }
}
