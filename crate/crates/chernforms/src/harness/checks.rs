use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::sampling::{
    annulus_point, box_point, c2_point, complex, constant_form, degree_positive, hermitian, polynomial_cochain,
    polynomial_form, rng_for, uniform,
};
use super::{CheckId, Config, Part};
use crate::clifford_berezin::{clifford_exp_dim2, spinor_rep, AlgebraTag, Graded, SpinorRep2};
use crate::error::Result;
use crate::exterior::field::squared_norm;
use crate::exterior::{partition_pair, smooth_cutoff, smooth_cutoff_on, Coeff, FormField, FormValue, JetForm};
use crate::quadrature::gaussian_order;
use crate::quillen::models::{bott, bott_on, bott_perturbed_connection, c2_scenario, cotangent_circle, C2Scenario};
use crate::quillen::{b_forms, beta_form, ch_rel, ch_sup_rep, chern_form, SuperConnectionData};
use crate::relative::{
    d_rel, integrate_compact, integrate_fiber, p_chi, partition_change_witness, product_phi, FiberRule,
    IntegrationBox, RelativeCochain, SupportDescriptor,
};
use crate::superlinalg::{
    graded_exp, graded_norm, smallest_eigenvalue, truncated_exp_polynomial, volterra_exp, ParitySplit, SuperMatrix,
    DEFAULT_SIMPLEX_ORDER,
};
use crate::thom::{
    euler_form, rank2, riemann_roch_check, thom_c, thom_mq, thom_rel, EuclideanBundle, ThomPoint,
};

const COMPACT_PANEL_ORDER: usize = 24;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn rel(got: &FormValue, want: &FormValue) -> f64 {
    got.max_abs_diff(want) / want.max_abs().max(f64::MIN_POSITIVE)
}

fn rel_c(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

fn panel_order(cfg: &Config) -> usize {
    cfg.quad_order.unwrap_or(COMPACT_PANEL_ORDER)
}

pub(super) fn run(id: CheckId, cfg: &Config) -> Result<Vec<Part>> {
    let mut rng = rng_for(cfg.seed, id.criterion() as u64);
    match id {
        CheckId::BottBeta => bott_beta(&mut rng),
        CheckId::BottIntegrals => bott_integrals(cfg),
        CheckId::Tstar => tstar(&mut rng, cfg),
        CheckId::Multiplicativity => multiplicativity(&mut rng),
        CheckId::ThomNormalization => thom_normalization(&mut rng, cfg),
        CheckId::Rank2ClosedForms => rank2_closed_forms(&mut rng),
        CheckId::RiemannRoch => riemann_roch(&mut rng),
        CheckId::ExponentialEngines => exponential_engines(&mut rng, cfg),
        CheckId::AppendixBound => appendix_bound(&mut rng),
        CheckId::PropertySuites => property_suites(&mut rng),
        CheckId::S2Euler => s2_euler(cfg),
    }
}

// β = −i(x dy − y dx)/r²
fn bott_beta(rng: &mut impl Rng) -> Result<Vec<Part>> {
    let (b, a) = bott();
    let beta = beta_form(&b, &a, 0.0);
    let mut err = 0.0;
    for _ in 0..20 {
        let p = annulus_point(rng, 0.5, 3.0);
        let r2 = p[0] * p[0] + p[1] * p[1];
        let want = (FormValue::dx(2, 2).scale(c(p[0], 0.0)) - FormValue::dx(2, 1).scale(c(p[1], 0.0))).scale(c(0.0, -1.0 / r2));
        err = nan_max(err, rel(&beta.eval(&p)?, &want));
    }
    Ok(vec![Part::rel("beta_closed_form", err, 1e-8)])
}

fn bott_integrals(cfg: &Config) -> Result<Vec<Part>> {
    let (b, a0) = bott();
    let a1 = bott_perturbed_connection();
    let two_i_pi = c(0.0, 2.0 * PI);
    let chi = smooth_cutoff(2, 0.25, 4.0)?;
    let region = IntegrationBox::cube(2, 2.0).with_panels(4);
    let order = panel_order(cfg);
    let i0 = integrate_compact(&ch_sup_rep(&b, &a0, &chi)?, &region, order)?;
    let i1 = integrate_compact(&ch_sup_rep(&b, &a1, &chi)?, &region, order)?;
    let gauss = FiberRule::Gaussian { rate: 1.0, order: cfg.quad_order.unwrap_or_else(gaussian_order) };
    let g = integrate_fiber(&chern_form(&b, &a0, 1.0), &[0, 1], &gauss, &[])?.get(0);
    Ok(vec![
        Part::rel("compact_trivial_connection", rel_c(i0, two_i_pi), 1e-6),
        Part::rel("compact_perturbed_connection", rel_c(i1, two_i_pi), 1e-6),
        Part::rel("gaussian_chern_t1", rel_c(g, two_i_pi), 1e-6),
    ])
}

fn tstar(rng: &mut impl Rng, cfg: &Config) -> Result<Vec<Part>> {
    let (b, a) = cotangent_circle();
    let beta = beta_form(&b, &a, 0.0);
    let mut err = 0.0;
    for sign in [1.0, -1.0] {
        for _ in 0..10 {
            let p = [uniform(rng, -PI, PI), sign * uniform(rng, 0.8, 3.0)];
            let want = if sign > 0.0 { FormValue::dx(2, 1).scale(c(0.0, -1.0)) } else { FormValue::zero(2) };
            err = nan_max(err, beta.eval(&p)?.max_abs_diff(&want));
        }
    }
    let chi = smooth_cutoff_on(2, &[1], 0.5, 4.0)?;
    let region = IntegrationBox::new(vec![(-PI, PI), (-2.0, 2.0)]).with_panels(4);
    let v = integrate_compact(&ch_sup_rep(&b, &a, &chi)?, &region, panel_order(cfg))?;
    Ok(vec![
        Part::abs("beta_branches", err, 1e-8),
        Part::rel("compact_integral", rel_c(v, c(0.0, -2.0 * PI)), 1e-6),
    ])
}

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

fn multiplicativity(rng: &mut impl Rng) -> Result<Vec<Part>> {
    let C2Scenario { b1, a1, b2, a2, product, a12, phi } = c2_scenario();
    let beta12 = beta_form(&product, &a12, 0.0);
    let bf = b_forms(&b1, &a1, &b2, &a2, &phi)?;
    let diamond = product_phi(&ch_rel(&b1, &a1), &ch_rel(&b2, &a2), &phi);
    let prod = ch_rel(&product, &a12);
    let witness = d_rel(&bf.witness(prod.support().clone()));
    let (mut e_beta, mut e_b, mut e_w) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let p = c2_point(rng, 0.35, 1.5);
        let (n1, n2) = (zk(&p, 1).norm_sqr(), zk(&p, 2).norm_sqr());
        let r2 = n1 + n2;
        let dd = |k| dz(k, true).wedge(&dz(k, false));
        let want = (angular(&p, 1).wedge(&dd(2)) + angular(&p, 2).wedge(&dd(1))).scale(c(-0.5 / (r2 * r2), 0.0));
        e_beta = nan_max(e_beta, rel(&beta12.eval(&p)?, &want));

        let aa = angular(&p, 1).wedge(&angular(&p, 2));
        let phi1 = phi.0.eval(&p)?.get(0);
        let phi2 = phi.1.eval(&p)?.get(0);
        let scale = aa.max_abs() / (4.0 * n1.min(n2) * r2);
        let want1 = aa.scale(phi1 / (4.0 * n1 * r2));
        let want2 = aa.scale(phi2 / (4.0 * n2 * r2));
        let d1 = bf.b1.eval(&p)?.max_abs_diff(&want1);
        let d2 = bf.b2.eval(&p)?.max_abs_diff(&want2);
        e_b = nan_max(e_b, d1.max(d2) / scale);

        let lhs = diamond.beta().eval(&p)? - prod.beta().eval(&p)?;
        e_w = nan_max(e_w, lhs.max_abs_diff(&witness.beta().eval(&p)?));
    }
    Ok(vec![
        Part::rel("beta_product_closed_form", e_beta, 1e-7),
        Part::rel("b_forms_closed_form", e_b, 1e-6),
        Part::abs("witness_identity", e_w, 1e-6),
    ])
}

fn torus_total_point(rng: &mut impl Rng, r_lo: f64, r_hi: f64) -> Vec<f64> {
    let mut p = box_point(rng, 2, -PI, PI);
    p.extend(annulus_point(rng, r_lo, r_hi));
    p
}

fn thom_normalization(rng: &mut impl Rng, cfg: &Config) -> Result<Vec<Part>> {
    let b = EuclideanBundle::torus(0.3);
    let fiber = b.fiber_coords();
    let order = panel_order(cfg);
    let rule = FiberRule::Compact { region: IntegrationBox::cube(2, 2.0).with_panels(4), order };
    let gauss = FiberRule::Gaussian { rate: 1.0, order: cfg.quad_order.unwrap_or(32) };
    let thc = thom_c(&b, &smooth_cutoff_on(4, &fiber, 0.25, 4.0)?)?;
    let pushed = p_chi(&thom_rel(&b), &smooth_cutoff_on(4, &fiber, 0.1, 4.0)?)?;
    let mq = thom_mq(&b);
    let one = c(1.0, 0.0);
    let (mut e_c, mut e_mq, mut e_rel) = (0.0, 0.0, 0.0);
    for k in 0..10 {
        let base = box_point(rng, 2, -PI, PI);
        e_c = nan_max(e_c, (integrate_fiber(&thc, &fiber, &rule, &base)?.get(0) - one).norm());
        e_mq = nan_max(e_mq, (integrate_fiber(&mq, &fiber, &gauss, &base)?.get(0) - one).norm());
        if k < 3 {
            e_rel = nan_max(e_rel, (integrate_fiber(&pushed, &fiber, &rule, &base)?.get(0) - one).norm());
        }
    }
    Ok(vec![
        Part::abs("fiber_integral_thom_c", e_c, 1e-6),
        Part::abs("fiber_integral_thom_mq", e_mq, 1e-6),
        Part::abs("fiber_integral_p_chi_thom_rel", e_rel, 1e-6),
    ])
}

fn block4() -> Result<EuclideanBundle> {
    let second = EuclideanBundle::rank2(2, |x| {
        JetForm::term(2, &[1], x[1].sin().scale(c(0.5, 0.0))) + JetForm::term(2, &[2], (x[0] * x[1]).scale(c(0.2, 0.0)))
    })?;
    EuclideanBundle::direct_sum(&EuclideanBundle::torus(0.3), &second)
}

fn rank2_closed_forms(rng: &mut impl Rng) -> Result<Vec<Part>> {
    let b = EuclideanBundle::torus(0.3);
    let (mut e_c, mut e_eta, mut e_beta, mut e_gamma) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..20 {
        let p = torus_total_point(rng, 0.45, 2.5);
        let q = ThomPoint::new(&b, &p, 0)?;
        for t in [0.0, 0.5, 1.0, 2.0] {
            e_c = nan_max(e_c, rel(&q.c_wedge(t)?.values(), &rank2::c_wedge(&b, &p, t)?));
            e_eta = nan_max(e_eta, rel(&q.eta_wedge(t)?.values(), &rank2::eta_wedge(&b, &p, t)?));
        }
        let closed = q.beta_closed()?.values();
        e_beta = nan_max(e_beta, rel(&closed, &rank2::beta_wedge(&b, &p)?));
        e_gamma = nan_max(e_gamma, rel(&closed, &q.beta_quadrature()?.values()));
    }
    let b4 = block4()?;
    for _ in 0..3 {
        let mut p = box_point(rng, 2, -PI, PI);
        let fiber = loop {
            let x = box_point(rng, 4, -1.2, 1.2);
            if x.iter().map(|v| v * v).sum::<f64>() >= 0.2 {
                break x;
            }
        };
        p.extend(fiber);
        let q = ThomPoint::new(&b4, &p, 0)?;
        e_gamma = nan_max(e_gamma, rel(&q.beta_closed()?.values(), &q.beta_quadrature()?.values()));
    }
    Ok(vec![
        Part::rel("c_wedge_display", e_c, 1e-9),
        Part::rel("eta_wedge_display", e_eta, 1e-9),
        Part::rel("beta_wedge_display", e_beta, 1e-9),
        Part::rel("gamma_formula_vs_quadrature", e_gamma, 1e-8),
    ])
}

fn riemann_roch(rng: &mut impl Rng) -> Result<Vec<Part>> {
    let b = EuclideanBundle::torus(0.3);
    let rep = SpinorRep2::standard();
    let points: Vec<Vec<f64>> = (0..20).map(|_| torus_total_point(rng, 0.45, 2.0)).collect();
    let (mut e_ch, mut e_eta, mut e_rel) = (0.0, 0.0, 0.0);
    for t in [0.0, 1.0, 2.0] {
        let r = riemann_roch_check(&b, &rep, t, &points)?;
        e_ch = nan_max(e_ch, r.chern.abs);
        e_eta = nan_max(e_eta, r.eta.abs);
        if t == 0.0 {
            e_rel = nan_max(r.rel_alpha.rel, r.rel_beta.rel);
        }
    }
    let b4 = EuclideanBundle::rank2(4, |x| {
        JetForm::term(4, &[2], x[0].cos().scale(c(0.3, 0.0))) + JetForm::term(4, &[4], x[2].sin().scale(c(0.2, 0.0)))
    })?;
    let mut e_base4 = 0.0;
    for t in [0.0, 1.0, 2.0] {
        let points: Vec<Vec<f64>> = (0..5)
            .map(|_| {
                let mut p = box_point(rng, 4, -PI, PI);
                p.extend(annulus_point(rng, 0.45, 2.0));
                p
            })
            .collect();
        let r = riemann_roch_check(&b4, &rep, t, &points)?;
        e_base4 = nan_max(e_base4, r.chern.abs.max(r.eta.abs));
    }
    let mut e_exp = 0.0;
    let tag = AlgebraTag::Clifford;
    for _ in 0..20 {
        let a1 = constant_form(rng, 2, 1, 1.0);
        let a2 = constant_form(rng, 2, 1, 1.0);
        let b0 = FormValue::scalar(2, complex(rng, 2.0)) + constant_form(rng, 2, 2, 1.0);
        let closed = clifford_exp_dim2(&a1, &a2, &b0)?;
        let x = Graded::basis(tag, 2, 0b01, a1)
            .add(&Graded::basis(tag, 2, 0b10, a2))?
            .add(&Graded::basis(tag, 2, 0b11, b0))?;
        let want = graded_exp(&spinor_rep(&x, &rep)?)?;
        e_exp = nan_max(e_exp, spinor_rep(&closed, &rep)?.max_abs_diff(&want));
    }
    Ok(vec![
        Part::abs("chern_identity", e_ch, 1e-9),
        Part::abs("eta_identity", e_eta, 1e-9),
        Part::abs("identities_on_4d_base", e_base4, 1e-9),
        Part::abs("clifford_exp_closed_form", e_exp, 1e-9),
        Part::rel("relative_class_identity", e_rel, 1e-8),
    ])
}

fn random_split(rng: &mut impl Rng) -> ParitySplit {
    loop {
        let (p, m) = (rng.random_range(0..=4usize), rng.random_range(0..=4usize));
        if (1..=4).contains(&(p + m)) {
            return ParitySplit::new(p, m).expect("nonempty");
        }
    }
}

fn exponential_engines(rng: &mut impl Rng, cfg: &Config) -> Result<Vec<Part>> {
    let order = cfg.quad_order.unwrap_or(DEFAULT_SIMPLEX_ORDER);
    let mut err = 0.0;
    for _ in 0..200 {
        let split = random_split(rng);
        let m = rng.random_range(1..=3usize);
        let h = hermitian(rng, split.n(), 1.0);
        let r = degree_positive(rng, split, m, 0.5);
        let v = volterra_exp(&h, &r, order)?;
        let g = graded_exp(&SuperMatrix::from_numeric(split, m, h.matrix()).add(&r))?;
        err = nan_max(err, graded_norm(&v.sub(&g)));
    }
    Ok(vec![Part::abs("volterra_vs_regular_representation", err, 1e-8)])
}

fn appendix_bound(rng: &mut impl Rng) -> Result<Vec<Part>> {
    let mut worst = 0.0;
    for _ in 0..1000 {
        let split = random_split(rng);
        let m = rng.random_range(1..=3usize);
        let h = hermitian(rng, split.n(), 1.5);
        let scale = uniform(rng, 0.05, 1.0);
        let r = degree_positive(rng, split, m, scale);
        let full = SuperMatrix::from_numeric(split, m, h.matrix()).add(&r).neg();
        let lhs = graded_norm(&graded_exp(&full)?);
        let rhs = (-smallest_eigenvalue(&h)).exp() * truncated_exp_polynomial(graded_norm(&r), m);
        worst = nan_max(worst, lhs / rhs - 1.0);
    }
    Ok(vec![Part::abs("bound_excess_ratio", worst.max(0.0), 1e-9)])
}

fn selector_pair(c1: [usize; 2], c2: [usize; 2], shift: f64) -> (FormField, FormField) {
    let selector = FormField::scalar(4, move |x| {
        let n1 = squared_norm(x, &c1);
        let n2 = squared_norm(x, &c2);
        let tot = n1 + n2;
        (n1 + tot.scale(c(shift, 0.0))) * tot.scale(c(1.0 + 2.0 * shift, 0.0)).recip()
    });
    partition_pair(&selector)
}

fn max_diff(a: &FormField, b: &FormField, p: &[f64]) -> Result<f64> {
    Ok(a.eval(p)?.max_abs_diff(&b.eval(p)?))
}

fn cochain_diff(a: &RelativeCochain, b: &RelativeCochain, p: &[f64]) -> Result<f64> {
    Ok(max_diff(a.alpha(), b.alpha(), p)?.max(max_diff(a.beta(), b.beta(), p)?))
}

fn property_suites(rng: &mut impl Rng) -> Result<Vec<Part>> {
    const N: usize = 50;
    let (mut leibniz, mut dd, mut drel2) = (0.0, 0.0, 0.0);
    for _ in 0..N {
        let (k, l) = (rng.random_range(0..=2usize), rng.random_range(0..=2usize));
        let u = polynomial_form(rng, 3, k);
        let v = polynomial_form(rng, 3, l);
        let p = box_point(rng, 3, -1.0, 1.0);
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = u.d().wedge(&v).add(&u.wedge(&v.d()).scale(c(s, 0.0)));
        leibniz = nan_max(leibniz, max_diff(&u.wedge(&v).d(), &rhs, &p)?);
        dd = nan_max(dd, u.d().d().eval(&p)?.max_abs());
        let ch = polynomial_cochain(rng, 3, k + 1, SupportDescriptor::ball(&[0, 1, 2], 0.3));
        let q = box_point(rng, 3, 0.5, 1.5);
        let twice = d_rel(&d_rel(&ch));
        drel2 = nan_max(drel2, twice.alpha().eval(&q)?.max_abs().max(twice.beta().eval(&q)?.max_abs()));
    }

    let phi = selector_pair([0, 1], [2, 3], 0.0);
    let phi_prime = selector_pair([0, 1], [2, 3], 0.1);
    let support1 = SupportDescriptor::ball(&[0, 1], 0.3);
    let support2 = SupportDescriptor::ball(&[2, 3], 0.3);
    let (mut diamond, mut witness) = (0.0, 0.0);
    for _ in 0..N {
        let (k1, k2) = (rng.random_range(1..=2usize), rng.random_range(1..=2usize));
        let a1 = polynomial_cochain(rng, 4, k1, support1.clone());
        let a2 = polynomial_cochain(rng, 4, k2, support2.clone());
        let p = c2_point(rng, 0.5, 1.2);
        let lhs = d_rel(&product_phi(&a1, &a2, &phi));
        let s = if k1 % 2 == 0 { 1.0 } else { -1.0 };
        let r1 = product_phi(&d_rel(&a1), &a2, &phi);
        let r2 = product_phi(&a1, &d_rel(&a2), &phi);
        let rhs = RelativeCochain::new(
            r1.alpha().add(&r2.alpha().scale(c(s, 0.0))),
            r1.beta().add(&r2.beta().scale(c(s, 0.0))),
            lhs.support().clone(),
            lhs.degree(),
        );
        diamond = nan_max(diamond, cochain_diff(&lhs, &rhs, &p)?);
    }
    let b1 = bott_cocycle(4, 0, 1);
    let b2 = bott_cocycle(4, 2, 3);
    let w = d_rel(&partition_change_witness(&b1, &b2, &phi, &phi_prime));
    let change = product_phi(&b1, &b2, &phi).sub(&product_phi(&b1, &b2, &phi_prime));
    for _ in 0..N {
        let p = c2_point(rng, 0.5, 1.5);
        witness = nan_max(witness, cochain_diff(&w, &change, &p)?);
    }

    let chi = smooth_cutoff(3, 0.25, 2.0)?;
    let mut commute = 0.0;
    for _ in 0..N {
        let k = rng.random_range(1..=2usize);
        let ch = polynomial_cochain(rng, 3, k, SupportDescriptor::ball(&[0, 1, 2], 0.3));
        let lhs = p_chi(&d_rel(&ch), &chi)?;
        let rhs = p_chi(&ch, &chi)?.d();
        let mut q = box_point(rng, 3, -1.0, 1.0);
        let r = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let target = uniform(rng, 0.5, 1.6);
        q.iter_mut().for_each(|v| *v *= target / r);
        commute = nan_max(commute, max_diff(&lhs, &rhs, &q)?);
    }
    Ok(vec![
        Part::abs("wedge_leibniz", leibniz, 1e-10),
        Part::abs("d_squared", dd, 1e-9),
        Part::abs("d_rel_squared", drel2, 1e-9),
        Part::abs("diamond_leibniz", diamond, 1e-8),
        Part::abs("partition_change_witness", witness, 1e-8),
        Part::abs("p_chi_commutes_with_d", commute, 1e-8),
    ])
}

// The Bott cocycle on the coordinates `(re, im)` of a `dim`-chart.
fn bott_cocycle(dim: usize, re: usize, im: usize) -> RelativeCochain {
    let b = bott_on(dim, re, im);
    let a = SuperConnectionData::trivial(b.split(), dim);
    ch_rel(&b, &a)
}

fn s2_euler(cfg: &Config) -> Result<Vec<Part>> {
    let e = euler_form(&EuclideanBundle::sphere_tangent());
    let region = IntegrationBox::new(vec![(0.0, PI), (-PI, PI)]).with_panels(2);
    let v = integrate_compact(&e, &region, panel_order(cfg))?;
    Ok(vec![Part::rel("euler_number", rel_c(v, c(2.0, 0.0)), 1e-4)])
}
