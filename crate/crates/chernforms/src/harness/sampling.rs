//! Seeded random inputs for the checks.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{Coeff, Form, FormField, FormValue, Jet, JetForm};
use crate::relative::{RelativeCochain, SupportDescriptor};
use crate::superlinalg::{HermitianEndo, ParitySplit, SuperMatrixForm};

/// Generator for one check: the stream is the criterion number, so results do
/// not depend on which other checks run or in what order.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(uniform(rng, -scale, scale), uniform(rng, -scale, scale))
}

/// A point of `ℝ²` with radius in `[r_lo, r_hi]`.
pub fn annulus_point(rng: &mut impl Rng, r_lo: f64, r_hi: f64) -> Vec<f64> {
    let r = uniform(rng, r_lo, r_hi);
    let th = uniform(rng, -PI, PI);
    vec![r * th.cos(), r * th.sin()]
}

/// A point of `ℂ² = ℝ⁴` with `|z₁|, |z₂| ∈ [r_lo, r_hi]`.
pub fn c2_point(rng: &mut impl Rng, r_lo: f64, r_hi: f64) -> Vec<f64> {
    let mut p = annulus_point(rng, r_lo, r_hi);
    p.extend(annulus_point(rng, r_lo, r_hi));
    p
}

/// A point of `[lo, hi]^dim`.
pub fn box_point(rng: &mut impl Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| uniform(rng, lo, hi)).collect()
}

/// Quadratic polynomial coefficients: constant, linear, then upper-triangular quadratic.
#[derive(Clone, Debug)]
struct Quadratic {
    c0: Complex64,
    lin: Vec<Complex64>,
    quad: Vec<Complex64>,
}

impl Quadratic {
    fn random(rng: &mut impl Rng, dim: usize) -> Self {
        Quadratic {
            c0: complex(rng, 1.0),
            lin: (0..dim).map(|_| complex(rng, 1.0)).collect(),
            quad: (0..dim * (dim + 1) / 2).map(|_| complex(rng, 0.5)).collect(),
        }
    }

    fn eval(&self, x: &[Jet]) -> Jet {
        let mut out = Jet::constant(self.c0);
        for (xi, c) in x.iter().zip(&self.lin) {
            out += xi.scale(*c);
        }
        let mut k = 0;
        for i in 0..x.len() {
            for j in i..x.len() {
                out += (x[i] * x[j]).scale(self.quad[k]);
                k += 1;
            }
        }
        out
    }
}

/// A form of the given degree whose coefficients are random quadratic polynomials.
pub fn polynomial_form(rng: &mut impl Rng, dim: usize, degree: usize) -> FormField {
    let terms: Vec<(usize, Quadratic)> = (0..1usize << dim)
        .filter(|m| m.count_ones() as usize == degree)
        .map(|m| (m, Quadratic::random(rng, dim)))
        .collect();
    FormField::from_jets(dim, move |x| {
        let mut out = JetForm::zero(dim);
        for (mask, q) in &terms {
            out.set(*mask, q.eval(x));
        }
        Ok(out)
    })
}

/// A random polynomial cochain `(α, β)` of degree `k ≥ 1` on the chart.
pub fn polynomial_cochain(rng: &mut impl Rng, dim: usize, k: usize, support: SupportDescriptor) -> RelativeCochain {
    let alpha = polynomial_form(rng, dim, k);
    let beta = polynomial_form(rng, dim, k - 1);
    RelativeCochain::new(alpha, beta, support, k)
}

/// A random Hermitian `n × n` matrix with entries of modulus at most `scale`.
pub fn hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> HermitianEndo {
    let mut a = DMatrix::from_fn(n, n, |_, _| complex(rng, scale));
    a = (&a + a.adjoint()).scale(0.5);
    HermitianEndo::new(a).expect("symmetrized")
}

/// A random super matrix of forms on a `dim`-chart with no degree-0 part.
pub fn degree_positive(rng: &mut impl Rng, split: ParitySplit, dim: usize, scale: f64) -> SuperMatrixForm {
    SuperMatrixForm::from_fn(split, dim, |_, _| {
        let mut coeffs: Vec<Complex64> = (0..1usize << dim).map(|_| complex(rng, scale)).collect();
        coeffs[0] = Complex64::new(0.0, 0.0);
        Form::from_coeffs(dim, coeffs)
    })
}

/// A random form on a `dim`-chart with constant coefficients.
pub fn constant_form(rng: &mut impl Rng, dim: usize, degree: usize, scale: f64) -> FormValue {
    let mut out = FormValue::zero(dim);
    for m in (0..1usize << dim).filter(|m| m.count_ones() as usize == degree) {
        out.set(m, complex(rng, scale));
    }
    out
}
