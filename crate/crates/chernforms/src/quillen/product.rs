//! The product `σ₁ ⊙ σ₂` on `ℰ₁ ⊗ ℰ₂` and the forms `B₁, B₂` comparing
//! `Ch_rel(σ₁ ⊙ σ₂)` with `Ch_rel(σ₁) ◇_Φ Ch_rel(σ₂)`.

use num_complex::Complex64;

use super::{MatrixField, MorphismBundle, QuillenPoint, SuperConnectionData, CLEARANCE_FLOOR};
use crate::error::{Error, Result};
use crate::exterior::{FormField, JetForm};
use crate::quadrature::{legendre_on, pairwise_sum, truncation_point};
use crate::relative::RelativeCochain;
use crate::superlinalg::{kron_left, kron_right, tensor_split};

const OUTER_NODES: usize = 96;
const TAIL_NODES: usize = 24;
const SEGMENT_NODES: usize = 8;

fn same_chart(d1: usize, d2: usize) -> Result<()> {
    if d1 != d2 {
        return Err(Error::DimensionMismatch { expected: d1, got: d2 });
    }
    Ok(())
}

/// `σ₁ ⊙ σ₂`, read off as the odd block of `v₁ ⊗ 1 + 1 ⊗ v₂`.
pub fn tensor_morphism(b1: &MorphismBundle, b2: &MorphismBundle) -> Result<MorphismBundle> {
    same_chart(b1.dim(), b2.dim())?;
    let (split, _) = tensor_split(b1.split(), b2.split());
    let (c1, c2) = (b1.clone(), b2.clone());
    let mut probes = b1.probes.clone();
    probes.extend(b2.probes.iter().cloned());
    let growth = match (b1.growth(), b2.growth()) {
        (Some((r1, k1)), Some((r2, k2))) => Some((r1.max(r2), k1.min(k2))),
        _ => None,
    };
    let mut out = MorphismBundle::new(split, b1.dim(), move |x| {
        let v1 = c1.v_matrix(x)?;
        let v2 = c2.v_matrix(x)?;
        let v = kron_left(&v1, c2.split()).add(&kron_right(c1.split(), &v2));
        let np = split.plus;
        let mut s = Vec::with_capacity(np * split.minus);
        for i in np..split.n() {
            for j in 0..np {
                s.push(v.get(i, j).get(0));
            }
        }
        Ok(s)
    })
    .with_probes(probes);
    out.growth = growth;
    Ok(out)
}

/// `𝔸₁ ⊗ 1 + 1 ⊗ 𝔸₂` with the graded sign on the second factor.
pub fn tensor_connection(a1: &SuperConnectionData, a2: &SuperConnectionData) -> Result<SuperConnectionData> {
    same_chart(a1.dim(), a2.dim())?;
    let (split, _) = tensor_split(a1.split(), a2.split());
    if a1.omega().is_none() && a2.omega().is_none() {
        return Ok(SuperConnectionData::trivial(split, a1.dim()));
    }
    let (c1, c2) = (a1.clone(), a2.clone());
    let omega = MatrixField::new(split, a1.dim(), move |p, k| {
        let w1 = c1.eval(p, k)?;
        let w2 = c2.eval(p, k)?;
        Ok(kron_left(&w1, c2.split()).add(&kron_right(c1.split(), &w2)))
    });
    Ok(SuperConnectionData { omega: Some(omega), split, dim: a1.dim() })
}

/// `B₁ = ∬_{0≤t≤s} Φ₁ η₁(s)∧η₂(t)` and `B₂ = ∬_{0≤s≤t} Φ₂ η₁(s)∧η₂(t)`.
#[derive(Clone, Debug)]
pub struct BForms {
    pub b1: FormField,
    pub b2: FormField,
}

impl BForms {
    /// `(0, B₁ − B₂)`, whose `d_rel` is `Ch_rel(σ₁) ◇_Φ Ch_rel(σ₂) − Ch_rel(σ₁ ⊙ σ₂)`.
    pub fn witness(&self, support: crate::relative::SupportDescriptor) -> RelativeCochain {
        let dim = self.b1.dim();
        RelativeCochain::new(FormField::zero(dim), self.b1.sub(&self.b2), support, 0)
    }
}

fn outer_nodes(h: f64) -> Vec<(f64, f64)> {
    let t0 = truncation_point(0.0, h);
    let mut nodes = legendre_on(0.0, t0, OUTER_NODES);
    nodes.extend(
        legendre_on(0.0, 1.0, TAIL_NODES).into_iter().map(|(u, w)| (t0 + u / (1.0 - u), w / ((1.0 - u) * (1.0 - u)))),
    );
    nodes
}

fn eta_fn(q: &QuillenPoint<crate::exterior::Jet>, k: usize) -> impl Fn(f64) -> JetForm + '_ {
    let vals = (k == 0).then(|| q.values());
    move |t| match &vals {
        Some(v) => v.eta(t).to_jets(),
        None => q.eta(t),
    }
}

/// `∫_0^∞ f(s) ∧ (∫_0^s g)` if `inner_right`, else `∫_0^∞ (∫_0^s f) ∧ g(s)`; the outer
/// factor decays at rate `h`.
fn iterated(outer: &dyn Fn(f64) -> JetForm, inner: &dyn Fn(f64) -> JetForm, h: f64, inner_right: bool) -> JetForm {
    let nodes = outer_nodes(h);
    let mut acc: Option<JetForm> = None;
    let mut last = 0.0;
    let mut terms = Vec::with_capacity(nodes.len());
    for &(s, w) in &nodes {
        let seg = legendre_on(last, s, SEGMENT_NODES)
            .into_iter()
            .map(|(t, wt)| inner(t).scale(Complex64::new(wt, 0.0)))
            .collect();
        let seg = pairwise_sum(seg, |a, b| a + b).expect("nonempty rule");
        let delta = match acc.take() {
            Some(a) => a + seg,
            None => seg,
        };
        let o = outer(s);
        let term = if inner_right { o.wedge(&delta) } else { delta.wedge(&o) };
        terms.push(term.scale(Complex64::new(w, 0.0)));
        acc = Some(delta);
        last = s;
    }
    pairwise_sum(terms, |a, b| a + b).expect("nonempty rule")
}

/// The forms `B₁, B₂` on `U₁ = N ∖ Supp σ₁` and `U₂ = N ∖ Supp σ₂`.
pub fn b_forms(
    b1: &MorphismBundle,
    a1: &SuperConnectionData,
    b2: &MorphismBundle,
    a2: &SuperConnectionData,
    phi: &(FormField, FormField),
) -> Result<BForms> {
    same_chart(b1.dim(), b2.dim())?;
    let dim = b1.dim();
    let make = |first: bool| {
        let (b1, a1, b2, a2) = (b1.clone(), a1.clone(), b2.clone(), a2.clone());
        let weight = if first { phi.0.clone() } else { phi.1.clone() };
        FormField::new(dim, move |p, k| {
            let w = weight.eval_jet(p, k)?;
            if w.is_zero() {
                return Ok(JetForm::zero(dim));
            }
            let q1 = QuillenPoint::jets(&b1, &a1, p, k)?;
            let q2 = QuillenPoint::jets(&b2, &a2, p, k)?;
            let (e1, e2) = (eta_fn(&q1, k), eta_fn(&q2, k));
            let h = if first { q1.gap() } else { q2.gap() };
            if h <= CLEARANCE_FLOOR {
                return Err(Error::Clearance(p.to_vec()));
            }
            let integral = if first { iterated(&e1, &e2, h, true) } else { iterated(&e2, &e1, h, false) };
            Ok(w.wedge(&integral))
        })
    };
    Ok(BForms { b1: make(true), b2: make(false) })
}

#[cfg(test)]
mod tests {
    use super::super::models::{c2_scenario, C2Scenario};
    use super::super::{ch_rel, chern_of_connection, v_sigma, beta_form};
    use super::*;
    use crate::exterior::{coordinate_jets, FormValue};
    use crate::relative::{d_rel, product_phi};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const P: [f64; 4] = [0.7, -0.3, 0.4, 0.5];

    fn dz(k: usize, conj: bool) -> FormValue {
        let s = if conj { -1.0 } else { 1.0 };
        FormValue::dx(4, 2 * k - 1) + FormValue::dx(4, 2 * k).scale(c(0.0, s))
    }

    fn zk(p: &[f64], k: usize) -> Complex64 {
        c(p[2 * k - 2], p[2 * k - 1])
    }

    // z̄_k dz_k − z_k dz̄_k
    fn angular(p: &[f64], k: usize) -> FormValue {
        dz(k, false).scale(zk(p, k).conj()) - dz(k, true).scale(zk(p, k))
    }

    #[test]
    fn product_sigma_matrix() {
        let C2Scenario { product, .. } = c2_scenario();
        let s = product.sigma_jets(&coordinate_jets(&P, 0)).unwrap();
        let (z1, z2) = (zk(&P, 1), zk(&P, 2));
        let want = [z1, -z2.conj(), z2, z1.conj()];
        for (a, b) in s.iter().zip(want) {
            assert!((a.val() - b).norm() < 1e-15);
        }
        let v = v_sigma(&product).eval_jet(&P, 0).unwrap().values();
        let v2 = v.mul(&v).degree_zero_values();
        let r2 = z1.norm_sqr() + z2.norm_sqr();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { r2 } else { 0.0 };
                assert!((v2[(i, j)] - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn product_connection_chern_factorizes() {
        let C2Scenario { b1, a1, b2, a2, .. } = c2_scenario_perturbed();
        let prod = tensor_morphism(&b1, &b2).unwrap();
        let a12 = tensor_connection(&a1, &a2).unwrap();
        let p = [1.2, 0.3, -0.9, 0.8];
        let lhs = chern_of_connection(&prod, &a12).eval(&p).unwrap();
        let rhs = chern_of_connection(&b1, &a1).eval(&p).unwrap().wedge(&chern_of_connection(&b2, &a2).eval(&p).unwrap());
        assert!(rhs.max_abs() > 1e-3);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{lhs:?}\n{rhs:?}");
    }

    fn c2_scenario_perturbed() -> C2Scenario {
        super::super::models::c2_scenario_with(true)
    }

    #[test]
    fn beta_of_product_closed_form() {
        let C2Scenario { product, a12, .. } = c2_scenario();
        let beta = beta_form(&product, &a12, 0.0).eval(&P).unwrap();
        let r2 = zk(&P, 1).norm_sqr() + zk(&P, 2).norm_sqr();
        let dd = |k| dz(k, true).wedge(&dz(k, false));
        let want = (angular(&P, 1).wedge(&dd(2)) + angular(&P, 2).wedge(&dd(1))).scale(c(-0.5 / (r2 * r2), 0.0));
        assert!(beta.max_abs_diff(&want) < 1e-9, "{beta:?}\n{want:?}");
    }

    #[test]
    fn b_forms_closed_form() {
        let C2Scenario { b1, a1, b2, a2, phi, .. } = c2_scenario();
        let b = b_forms(&b1, &a1, &b2, &a2, &phi).unwrap();
        let (n1, n2) = (zk(&P, 1).norm_sqr(), zk(&P, 2).norm_sqr());
        let aa = angular(&P, 1).wedge(&angular(&P, 2));
        let phi1 = phi.0.eval(&P).unwrap().get(0);
        let phi2 = phi.1.eval(&P).unwrap().get(0);
        assert!(phi1.norm() > 0.1 && phi2.norm() > 0.1);
        let want1 = aa.scale(phi1 / (4.0 * n1 * (n1 + n2)));
        let want2 = aa.scale(phi2 / (4.0 * n2 * (n1 + n2)));
        assert!(b.b1.eval(&P).unwrap().max_abs_diff(&want1) < 1e-9);
        assert!(b.b2.eval(&P).unwrap().max_abs_diff(&want2) < 1e-9);
        let zero = (FormField::zero(4), FormField::one(4));
        let bz = b_forms(&b1, &a1, &b2, &a2, &zero).unwrap();
        assert!(bz.b1.eval(&[0.0, 0.0, 0.3, 0.1]).unwrap().is_zero());
    }

    #[test]
    fn multiplicativity_witness() {
        let C2Scenario { b1, a1, b2, a2, product, a12, phi } = c2_scenario();
        let diamond = product_phi(&ch_rel(&b1, &a1), &ch_rel(&b2, &a2), &phi);
        let prod = ch_rel(&product, &a12);
        let w = b_forms(&b1, &a1, &b2, &a2, &phi).unwrap().witness(prod.support().clone());
        let dw = d_rel(&w);
        for p in [P, [0.2, 0.5, -0.6, 0.1], [1.1, 0.0, 0.05, -0.3]] {
            let alpha = diamond.alpha().eval(&p).unwrap() - prod.alpha().eval(&p).unwrap();
            assert!(alpha.max_abs() < 1e-12);
            let beta = diamond.beta().eval(&p).unwrap() - prod.beta().eval(&p).unwrap();
            let want = dw.beta().eval(&p).unwrap();
            assert!(want.max_abs() > 1e-3);
            assert!(beta.max_abs_diff(&want) < 1e-6, "{p:?}: {:e}", beta.max_abs_diff(&want));
        }
    }
}
