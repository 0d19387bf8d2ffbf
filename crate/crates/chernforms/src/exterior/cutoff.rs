//! Smooth cutoffs and two-element partitions of unity built from `exp(−1/u)`.

use num_complex::Complex64;

use super::field::{squared_norm, FormField};
use super::form::JetForm;
use super::jet::{Coeff, Jet};
use crate::error::{Error, Result};

/// `B(u) = exp(−1/u)` for `u > 0`, else 0.
pub fn bump(u: Jet) -> Jet {
    if u.val().re <= 0.0 {
        Jet::zero()
    } else {
        (-u.recip()).exp()
    }
}

/// The smooth transition `h(u) = B(u)/(B(u)+B(1−u))`: 0 for `u ≤ 0`, 1 for `u ≥ 1`.
pub fn smooth_step(u: Jet) -> Jet {
    let x = u.val().re;
    if x <= 0.0 {
        Jet::zero()
    } else if x >= 1.0 {
        Jet::one()
    } else {
        let a = bump(u);
        let b = bump(Jet::one() - u);
        a * (a + b).recip()
    }
}

/// `f(r)` equal to 1 on `[0, r_inner]` and 0 on `[r_outer, ∞)`.
pub fn radial_profile(r: Jet, r_inner: f64, r_outer: f64) -> Jet {
    let u = (r - Jet::from_f64(r_inner)).scale(Complex64::new(1.0 / (r_outer - r_inner), 0.0));
    Jet::one() - smooth_step(u)
}

fn check_radii(r_inner: f64, r_outer: f64) -> Result<()> {
    if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
        return Err(Error::InvalidRadii { inner: r_inner, outer: r_outer });
    }
    Ok(())
}

/// `χ(p) = f(‖p‖²)` with `f = 1` on `[0, r_inner]`, `f = 0` on `[r_outer, ∞)`.
pub fn smooth_cutoff(dim: usize, r_inner: f64, r_outer: f64) -> Result<FormField> {
    let coords: Vec<usize> = (0..dim).collect();
    smooth_cutoff_on(dim, &coords, r_inner, r_outer)
}

/// Like [`smooth_cutoff`] but `‖p‖²` only sums the listed (0-based) coordinates.
pub fn smooth_cutoff_on(dim: usize, coords: &[usize], r_inner: f64, r_outer: f64) -> Result<FormField> {
    check_radii(r_inner, r_outer)?;
    let coords = coords.to_vec();
    Ok(FormField::scalar(dim, move |x| radial_profile(squared_norm(x, &coords), r_inner, r_outer)))
}

/// `(Φ₁, Φ₂) = (g(s), 1 − g(s))` with `g(s) = h((s − 1/4)/(1/2))`.
pub fn partition_pair(selector: &FormField) -> (FormField, FormField) {
    let dim = selector.dim();
    let sel = selector.clone();
    let phi1 = FormField::new(dim, move |p, k| {
        let s = sel.eval_jet(p, k)?.get(0);
        let v = s.val().re;
        if !(-1e-12..=1.0 + 1e-12).contains(&v) {
            return Err(Error::SelectorRange(v));
        }
        let g = smooth_step((s - Jet::from_f64(0.25)).scale(Complex64::new(2.0, 0.0)));
        Ok(JetForm::scalar(dim, g))
    });
    let p1 = phi1.clone();
    let phi2 = FormField::new(dim, move |p, k| {
        let g = p1.eval_jet(p, k)?.get(0);
        Ok(JetForm::scalar(dim, Jet::one() - g))
    });
    (phi1, phi2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_plateaus() {
        let chi = smooth_cutoff(2, 1.0, 4.0).unwrap();
        let inner = [0.5f64.sqrt(), 0.0];
        assert_eq!(chi.eval(&inner).unwrap().get(0).re, 1.0);
        assert!(chi.d().eval(&inner).unwrap().is_zero());
        let outer = [8.0f64.sqrt(), 0.0];
        assert_eq!(chi.eval(&outer).unwrap().get(0).re, 0.0);
    }

    #[test]
    fn invalid_radii() {
        assert!(smooth_cutoff(2, 2.0, 1.0).is_err());
        assert!(smooth_cutoff(2, 0.0, 1.0).is_err());
    }

    #[test]
    fn cutoff_jets_match_finite_differences() {
        let chi = smooth_cutoff(2, 1.0, 4.0).unwrap();
        let h = 1e-5;
        for p in [[1.1, 0.3], [0.9, 1.1], [1.5, -0.4]] {
            let j = chi.eval_jet(&p, 2).unwrap().get(0);
            for k in 0..2 {
                let mut a = p;
                let mut b = p;
                a[k] += h;
                b[k] -= h;
                let fd = (chi.eval(&a).unwrap().get(0).re - chi.eval(&b).unwrap().get(0).re) / (2.0 * h);
                assert!((j.grad(k).re - fd).abs() <= 1e-6 * fd.abs().max(1e-3), "{} vs {}", j.grad(k).re, fd);
            }
        }
    }

    #[test]
    fn partition_endpoints_and_sum() {
        let s0 = FormField::scalar(1, |_| Jet::zero());
        let (a, b) = partition_pair(&s0);
        assert_eq!((a.eval(&[0.0]).unwrap().get(0).re, b.eval(&[0.0]).unwrap().get(0).re), (0.0, 1.0));
        let s1 = FormField::scalar(1, |_| Jet::one());
        let (a, b) = partition_pair(&s1);
        assert_eq!((a.eval(&[0.0]).unwrap().get(0).re, b.eval(&[0.0]).unwrap().get(0).re), (1.0, 0.0));
        let s = FormField::scalar(1, |x| (x[0] * x[0]) * (Jet::one() + x[0] * x[0]).recip());
        let (a, b) = partition_pair(&s);
        for x in [0.3, 0.7, 1.0, 2.0] {
            let sum = a.eval(&[x]).unwrap().get(0) + b.eval(&[x]).unwrap().get(0);
            assert_eq!(sum.re, 1.0);
        }
    }
}
