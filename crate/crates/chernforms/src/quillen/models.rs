//! The worked scenarios: the Bott morphism on `ℂ`, the symbol on `T*S¹` and the
//! external product on `ℂ²`.

use num_complex::Complex64;

use super::{tensor_connection, tensor_morphism, MatrixField, MorphismBundle, SuperConnectionData};
use crate::exterior::cutoff::radial_profile;
use crate::exterior::field::squared_norm;
use crate::exterior::{partition_pair, smooth_step, Coeff, FormField, Jet, JetForm};
use crate::superlinalg::{ParitySplit, SuperMatrix};

fn line_split() -> ParitySplit {
    ParitySplit::new(1, 1).expect("nonempty split")
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// `σ(z) = z` with `z = x_re + i x_im` (0-based coordinates) on a chart of dimension `dim`.
pub fn bott_on(dim: usize, re: usize, im: usize) -> MorphismBundle {
    let mut probe = vec![0.0; dim];
    probe[re] = 1e-3;
    MorphismBundle::new(line_split(), dim, move |x| Ok(vec![x[re] + x[im].scale(i())]))
        .with_growth(1.0, 1.0)
        .with_probes(vec![vec![0.0; dim], probe])
}

/// The Bott morphism `σ_b(z) = z` on `ℂ = ℝ²` with the trivial super-connection.
pub fn bott() -> (MorphismBundle, SuperConnectionData) {
    (bott_on(2, 0, 1), SuperConnectionData::trivial(line_split(), 2))
}

/// `d + ψ·(0.3i dx_a E₀₀ − 0.2i dx_b E₁₁ + 0.5 dx_a∧dx_b E₀₁)` with `ψ` supported in `|x|² ≤ 4`.
pub fn perturbed_connection_on(dim: usize, a: usize, b: usize) -> SuperConnectionData {
    let split = line_split();
    let coords = vec![a, b];
    let omega = MatrixField::from_jets(split, dim, move |x| {
        let psi = radial_profile(squared_norm(x, &coords), 1.0, 4.0);
        let mut w = SuperMatrix::<Jet>::zero(split, dim);
        w.set(0, 0, JetForm::term(dim, &[a + 1], psi.scale(Complex64::new(0.0, 0.3))));
        w.set(1, 1, JetForm::term(dim, &[b + 1], psi.scale(Complex64::new(0.0, -0.2))));
        w.set(0, 1, JetForm::term(dim, &[a + 1, b + 1], psi.scale(Complex64::new(0.5, 0.0))));
        Ok(w)
    });
    let samples: Vec<Vec<f64>> = [0.0, 0.9, 1.7]
        .iter()
        .map(|&r| {
            let mut p = vec![0.0; dim];
            p[a] = r;
            p
        })
        .collect();
    SuperConnectionData::new(omega, &samples).expect("odd and degree-positive by construction")
}

/// The Bott super-connection perturbed by a compactly supported odd term.
pub fn bott_perturbed_connection() -> SuperConnectionData {
    perturbed_connection_on(2, 0, 1)
}

/// `u(ξ) = h((ξ² − 1/4)/(3/4))`: 0 for `|ξ| ≤ 1/2`, 1 for `|ξ| ≥ 1`.
pub fn cotangent_profile(xi: Jet) -> Jet {
    smooth_step((xi * xi - Jet::from_f64(0.25)).scale(Complex64::new(4.0 / 3.0, 0.0)))
}

/// The symbol on `T*S¹` in the chart `(θ, ξ)`: `u(ξ)e^{iθ}` for `ξ ≥ 0` and `u(ξ)` for `ξ ≤ 0`.
pub fn cotangent_circle() -> (MorphismBundle, SuperConnectionData) {
    let b = MorphismBundle::new(line_split(), 2, |x| {
        let u = cotangent_profile(x[1]);
        Ok(vec![if x[1].val().re >= 0.0 { u * x[0].scale(i()).exp() } else { u }])
    })
    .with_growth(1.0, 1.0)
    .with_probes(vec![vec![0.0, 0.0], vec![1.0, 0.45], vec![-2.0, -0.45]]);
    (b, SuperConnectionData::trivial(line_split(), 2))
}

/// Two Bott factors on `ℂ²` with coordinates `(x₁, y₁, x₂, y₂)`, their product and the
/// partition `Φ` built from `|z₁|²/|z|²`.
#[derive(Clone, Debug)]
pub struct C2Scenario {
    pub b1: MorphismBundle,
    pub a1: SuperConnectionData,
    pub b2: MorphismBundle,
    pub a2: SuperConnectionData,
    pub product: MorphismBundle,
    pub a12: SuperConnectionData,
    pub phi: (FormField, FormField),
}

/// The `ℂ²` scenario with trivial super-connections.
pub fn c2_scenario() -> C2Scenario {
    c2_scenario_with(false)
}

/// The `ℂ²` scenario, optionally with perturbed factor super-connections.
pub fn c2_scenario_with(perturbed: bool) -> C2Scenario {
    let b1 = bott_on(4, 0, 1);
    let b2 = bott_on(4, 2, 3);
    let (a1, a2) = if perturbed {
        (perturbed_connection_on(4, 0, 1), perturbed_connection_on(4, 2, 3))
    } else {
        (SuperConnectionData::trivial(line_split(), 4), SuperConnectionData::trivial(line_split(), 4))
    };
    let product = tensor_morphism(&b1, &b2).expect("same chart");
    let a12 = tensor_connection(&a1, &a2).expect("same chart");
    let selector = FormField::scalar(4, |x| {
        let n1 = squared_norm(x, &[0, 1]);
        n1 * (n1 + squared_norm(x, &[2, 3])).recip()
    })
    .with_domain(|p| p.iter().any(|&v| v != 0.0));
    let phi = partition_pair(&selector);
    C2Scenario { b1, a1, b2, a2, product, a12, phi }
}
