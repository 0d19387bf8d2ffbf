//! Property tests for the algebraic and analytic invariants of every module.

use chernforms::clifford_berezin::{
    berezin_t, clifford_exp_dim2, contraction, half_sinh_ratio_det, spinor_rep, symbol_inverse, symbol_map,
    tau_numeric, wedge_exp, AlgebraTag, Graded, SpinorRep2,
};
use chernforms::exterior::{partition_pair, smooth_cutoff, Coeff, Form, FormField, FormValue};
use chernforms::harness::sampling::{
    complex, constant_form, degree_positive, hermitian, polynomial_cochain, polynomial_form, rng_for,
};
use chernforms::quillen::models::{bott, bott_perturbed_connection};
use chernforms::quillen::{ch_rel, chern_form, eta_form};
use chernforms::relative::{d_rel, integrate_fiber, p_chi, product_phi, FiberRule, IntegrationBox, SupportDescriptor};
use chernforms::superlinalg::{
    graded_exp, graded_norm, smallest_eigenvalue, truncated_exp_polynomial, volterra_exp, ParitySplit, SuperMatrix,
    SuperMatrixForm,
};
use chernforms::thom::{c_wedge, thom_mq, EuclideanBundle, ThomPoint};
use chernforms::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sign(k: usize) -> Complex64 {
    c(if k % 2 == 0 { 1.0 } else { -1.0 })
}

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, dim)
}

fn split() -> impl Strategy<Value = ParitySplit> {
    (0usize..=2, 0usize..=2).prop_filter("nonempty", |(p, m)| p + m > 0).prop_map(|(p, m)| ParitySplit::new(p, m).unwrap())
}

/// A super matrix whose entries all have total parity `parity`.
fn homogeneous(seed: u64, split: ParitySplit, dim: usize, parity: usize) -> SuperMatrixForm {
    let mut rng = rng_for(seed, 1);
    SuperMatrix::from_fn(split, dim, |i, j| {
        let want = (parity + split.parity(i) + split.parity(j)) % 2;
        let coeffs = (0..1usize << dim)
            .map(|m| if m.count_ones() as usize % 2 == want { complex(&mut rng, 1.0) } else { c(0.0) })
            .collect();
        Form::from_coeffs(dim, coeffs)
    })
}

fn graded(seed: u64, tag: AlgebraTag, d: usize, dim: usize) -> Graded<Complex64> {
    let mut rng = rng_for(seed, 2);
    let mut g = Graded::zero(tag, d, dim);
    for mask in 0..1usize << d {
        let coeffs = (0..1usize << dim).map(|_| complex(&mut rng, 1.0)).collect();
        g.set(mask, Form::from_coeffs(dim, coeffs));
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wedge_associative_and_graded_commutative(seed: u64, k in 0usize..=2, l in 0usize..=2) {
        let mut rng = rng_for(seed, 0);
        let a = constant_form(&mut rng, 4, k, 1.0);
        let b = constant_form(&mut rng, 4, l, 1.0);
        let e = constant_form(&mut rng, 4, 1, 1.0);
        prop_assert!(a.wedge(&b).wedge(&e).max_abs_diff(&a.wedge(&b.wedge(&e))) < 1e-14);
        prop_assert!(a.wedge(&b).max_abs_diff(&b.wedge(&a).scale(sign(k * l))) < 1e-14);
    }

    #[test]
    fn leibniz_and_d_squared(seed: u64, k in 0usize..=2, l in 0usize..=1, p in point(3)) {
        let mut rng = rng_for(seed, 0);
        let u = polynomial_form(&mut rng, 3, k);
        let v = polynomial_form(&mut rng, 3, l);
        let rhs = u.d().wedge(&v).add(&u.wedge(&v.d()).scale(sign(k)));
        prop_assert!(u.wedge(&v).d().eval(&p).unwrap().max_abs_diff(&rhs.eval(&p).unwrap()) < 1e-10);
        prop_assert!(u.d().d().eval(&p).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn cutoff_jets_match_finite_differences(r2 in 0.7f64..1.8, th in -3.0f64..3.0) {
        let chi = smooth_cutoff(2, 0.5, 2.0).unwrap();
        let p = [r2.sqrt() * th.cos(), r2.sqrt() * th.sin()];
        let d = chi.d().eval(&p).unwrap();
        let h = 1e-5;
        for k in 0..2 {
            let (mut lo, mut hi) = (p, p);
            lo[k] -= h;
            hi[k] += h;
            let fd = (chi.eval(&hi).unwrap().get(0) - chi.eval(&lo).unwrap().get(0)) / (2.0 * h);
            let jet = d.get(1 << k);
            prop_assert!((jet - fd).norm() <= 1e-6 * jet.norm().max(1e-3), "{jet} vs {fd}");
        }
    }

    #[test]
    fn supertrace_kills_supercommutators(seed: u64, s in split(), pa in 0usize..2, pb in 0usize..2) {
        let a = homogeneous(seed, s, 2, pa);
        let b = homogeneous(seed.wrapping_add(1), s, 2, pb);
        prop_assert!(a.supercommutator(&b).supertrace().max_abs() < 1e-10);
    }

    #[test]
    fn exp_inverse_and_norm_submultiplicative(seed: u64, s in split(), m in 1usize..=3) {
        let mut rng = rng_for(seed, 0);
        let h = hermitian(&mut rng, s.n(), 1.0);
        let r = degree_positive(&mut rng, s, m, 0.7);
        let full = SuperMatrix::from_numeric(s, m, h.matrix()).add(&r);
        let prod = graded_exp(&full).unwrap().mul(&graded_exp(&full.neg()).unwrap());
        prop_assert!(prod.max_abs_diff(&SuperMatrix::identity(s, m)) < 1e-9);
        let other = degree_positive(&mut rng, s, m, 1.0).add(&full);
        prop_assert!(graded_norm(&full.mul(&other)) <= graded_norm(&full) * graded_norm(&other) * (1.0 + 1e-12));
    }

    #[test]
    fn volterra_agrees_and_bound_holds(seed: u64, s in split(), m in 1usize..=3) {
        let mut rng = rng_for(seed, 0);
        let h = hermitian(&mut rng, s.n(), 1.0);
        let scale = rng.random_range(0.05..1.0);
        let r = degree_positive(&mut rng, s, m, scale);
        let full = SuperMatrix::from_numeric(s, m, h.matrix()).add(&r);
        let v = volterra_exp(&h, &r, 12).unwrap();
        prop_assert!(graded_norm(&v.sub(&graded_exp(&full).unwrap())) < 1e-8);
        let lhs = graded_norm(&graded_exp(&full.neg()).unwrap());
        let rhs = (-smallest_eigenvalue(&h)).exp() * truncated_exp_polynomial(graded_norm(&r), m);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn supertrace_berezin_relation(re in -3.0f64..3.0, im in -0.5f64..0.5) {
        let rep = SpinorRep2::standard();
        let b = Complex64::new(re, im);
        let a = Graded::basis(AlgebraTag::Clifford, 2, 0b11, FormValue::scalar(0, b));
        let zero = FormValue::zero(0);
        let lhs = spinor_rep(&clifford_exp_dim2(&zero, &zero, &FormValue::scalar(0, b)).unwrap(), &rep)
            .unwrap()
            .supertrace()
            .get(0);
        let direct = graded_exp(&spinor_rep(&a, &rep).unwrap()).unwrap().supertrace().get(0);
        let t = berezin_t(&wedge_exp(&symbol_map(&a), &zero).unwrap()).get(0);
        let rhs = Complex64::new(0.0, -2.0) * half_sinh_ratio_det(&tau_numeric(&a).unwrap()) * t;
        prop_assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0));
        prop_assert!((direct - rhs).norm() < 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn clifford_associative_symbol_roundtrip_contraction(seed: u64, d in 2usize..=3) {
        let tag = AlgebraTag::Clifford;
        let (a, b, e) = (graded(seed, tag, d, 2), graded(seed ^ 1, tag, d, 2), graded(seed ^ 2, tag, d, 2));
        let left = a.mul(&b).unwrap().mul(&e).unwrap();
        let right = a.mul(&b.mul(&e).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-10);
        prop_assert_eq!(symbol_inverse(&symbol_map(&a)), a.clone());
        let mut rng = rng_for(seed, 3);
        let x: Vec<Complex64> = (0..d).map(|_| complex(&mut rng, 1.0)).collect();
        let w = graded(seed, AlgebraTag::Wedge, d, 2);
        prop_assert!(berezin_t(&contraction(&x, &w)).is_zero());
    }

    #[test]
    fn relative_complex_identities(seed: u64, k1 in 1usize..=2, k2 in 1usize..=2, r1 in 0.5f64..1.2, r2 in 0.5f64..1.2, th in -3.0f64..3.0) {
        let mut rng = rng_for(seed, 0);
        let a1 = polynomial_cochain(&mut rng, 4, k1, SupportDescriptor::ball(&[0, 1], 0.3));
        let a2 = polynomial_cochain(&mut rng, 4, k2, SupportDescriptor::ball(&[2, 3], 0.3));
        let p = [r1 * th.cos(), r1 * th.sin(), r2 * (2.0 * th).sin(), r2 * (2.0 * th).cos()];
        let twice = d_rel(&d_rel(&a1));
        prop_assert!(twice.alpha().eval(&p).unwrap().max_abs() < 1e-9);
        prop_assert!(twice.beta().eval(&p).unwrap().max_abs() < 1e-9);

        let sel = FormField::scalar(4, |x| {
            let n1 = x[0] * x[0] + x[1] * x[1];
            n1 * (n1 + x[2] * x[2] + x[3] * x[3]).recip()
        });
        let phi = partition_pair(&sel);
        let lhs = d_rel(&product_phi(&a1, &a2, &phi));
        let t1 = product_phi(&d_rel(&a1), &a2, &phi);
        let t2 = product_phi(&a1, &d_rel(&a2), &phi);
        let s = sign(k1);
        let alpha = t1.alpha().add(&t2.alpha().scale(s)).eval(&p).unwrap();
        let beta = t1.beta().add(&t2.beta().scale(s)).eval(&p).unwrap();
        prop_assert!(lhs.alpha().eval(&p).unwrap().max_abs_diff(&alpha) < 1e-8);
        prop_assert!(lhs.beta().eval(&p).unwrap().max_abs_diff(&beta) < 1e-8);

        let chi = smooth_cutoff(4, 0.2, 3.0).unwrap();
        let b = polynomial_cochain(&mut rng, 4, k1, SupportDescriptor::ball(&[0, 1, 2, 3], 0.3));
        let q = [0.5 * r1, 0.4, -0.3 * r2, 0.2];
        let diff = p_chi(&d_rel(&b), &chi).unwrap().eval(&q).unwrap().max_abs_diff(&p_chi(&b, &chi).unwrap().d().eval(&q).unwrap());
        prop_assert!(diff < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn exact_compact_forms_integrate_to_zero(seed: u64) {
        let mut rng = rng_for(seed, 0);
        let u = polynomial_form(&mut rng, 2, 1);
        let w = smooth_cutoff(2, 0.1, 2.0).unwrap().wedge(&u).d();
        let rule = FiberRule::Compact { region: IntegrationBox::cube(2, 1.5).with_panels(6), order: 48 };
        let v = integrate_fiber(&w, &[0, 1], &rule, &[]).unwrap();
        prop_assert!(v.max_abs() < 1e-7, "{}", v.max_abs());
    }

    #[test]
    fn bott_transgression_and_cocycle(r in 0.4f64..2.5, th in -3.0f64..3.0, t in 0.2f64..1.5) {
        let (b, _) = bott();
        let a = bott_perturbed_connection();
        let p = [r * th.cos(), r * th.sin()];
        let h = 1e-4;
        let dch = chern_form(&b, &a, t + h).eval(&p).unwrap() - chern_form(&b, &a, t - h).eval(&p).unwrap();
        let deta = eta_form(&b, &a, t).d().eval(&p).unwrap();
        prop_assert!((dch.scale(c(0.5 / h)) + deta).max_abs() < 1e-6);
        let rel = ch_rel(&b, &a);
        prop_assert!(rel.alpha().d().eval(&p).unwrap().max_abs() < 1e-7);
        let gap = rel.alpha().eval(&p).unwrap() - rel.beta().d().eval(&p).unwrap();
        prop_assert!(gap.max_abs() < 1e-7);
    }

    #[test]
    fn thom_forms_on_random_points(th1 in -3.0f64..3.0, th2 in -3.0f64..3.0, x1 in 0.2f64..1.5, x2 in -1.5f64..1.5, t in 0.0f64..2.0) {
        let b = EuclideanBundle::torus(0.3);
        let p = [th1, th2, x1, x2];
        prop_assert!(c_wedge(&b, t).d().eval(&p).unwrap().max_abs() < 1e-8);
        let q = ThomPoint::new(&b, &p, 0).unwrap();
        let closed = q.beta_closed().unwrap().values();
        let quad = q.beta_quadrature().unwrap().values();
        prop_assert!(closed.max_abs_diff(&quad) < 1e-7 * closed.max_abs());
        prop_assert!(closed.max_imag() < 1e-10 && q.c_wedge(t).unwrap().values().max_imag() < 1e-10);
        let gauss = FiberRule::Gaussian { rate: 1.0, order: 32 };
        let v = integrate_fiber(&thom_mq(&b), &b.fiber_coords(), &gauss, &[th1, th2]).unwrap();
        prop_assert!((v.get(0) - c(1.0)).norm() < 1e-10);
    }
}
