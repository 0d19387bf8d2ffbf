//! Graded tensor products `E₁ ⊗ E₂` of super matrices.
//!
//! Basis order: even part `E₁⁺⊗E₂⁺` then `E₁⁻⊗E₂⁻`, odd part `E₁⁻⊗E₂⁺` then
//! `E₁⁺⊗E₂⁻`, each block lexicographic in `(i, k)`.

use super::matrix::{ParitySplit, SuperMatrix};
use crate::exterior::{Coeff, Form};

/// Split of `E₁ ⊗ E₂` and the pair `(i, k)` behind each basis index.
pub fn tensor_split(a: ParitySplit, b: ParitySplit) -> (ParitySplit, Vec<(usize, usize)>) {
    let block = |p1: usize, p2: usize| {
        let r1: Vec<usize> = (0..a.n()).filter(|&i| a.parity(i) == p1).collect();
        let r2: Vec<usize> = (0..b.n()).filter(|&k| b.parity(k) == p2).collect();
        r1.iter().flat_map(|&i| r2.iter().map(move |&k| (i, k))).collect::<Vec<_>>()
    };
    let mut pairs = block(0, 0);
    pairs.extend(block(1, 1));
    let plus = pairs.len();
    pairs.extend(block(1, 0));
    pairs.extend(block(0, 1));
    let minus = pairs.len() - plus;
    (ParitySplit { plus, minus }, pairs)
}

/// `X ⊗ 1`: entry `((i,k),(j,k)) = x_ij`.
pub fn kron_left<S: Coeff>(x: &SuperMatrix<S>, b: ParitySplit) -> SuperMatrix<S> {
    let (split, pairs) = tensor_split(x.split(), b);
    SuperMatrix::from_fn(split, x.dim(), |r, c| {
        let ((i, k), (j, l)) = (pairs[r], pairs[c]);
        if k == l {
            x.get(i, j).clone()
        } else {
            Form::zero(x.dim())
        }
    })
}

/// `1 ⊗ Y`: entry `((j,k),(j,l)) = (−1)^{(p_k+p_l)p_j} y_kl`.
pub fn kron_right<S: Coeff>(a: ParitySplit, y: &SuperMatrix<S>) -> SuperMatrix<S> {
    let (split, pairs) = tensor_split(a, y.split());
    let b = y.split();
    SuperMatrix::from_fn(split, y.dim(), |r, c| {
        let ((i, k), (j, l)) = (pairs[r], pairs[c]);
        if i != j {
            return Form::zero(y.dim());
        }
        let e = y.get(k, l);
        if (b.parity(k) + b.parity(l)) * a.parity(j) % 2 == 1 {
            -e
        } else {
            e.clone()
        }
    })
}
