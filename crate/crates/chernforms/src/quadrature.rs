//! Gauss–Legendre and Gauss–Hermite rules, cached, plus the half-line scheme used for
//! transgression integrals `∫_{t₀}^∞ η(t) dt`.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::{GaussHermite, GaussLegendre};
use num_complex::Complex64;

use crate::error::Result;
use crate::exterior::JetForm;

pub const DEFAULT_COMPACT_ORDER: usize = 64;
pub const DEFAULT_GAUSSIAN_ORDER: usize = 48;
/// Environment variable overriding both default orders.
pub const QUAD_ORDER_ENV: &str = "CHERNFORMS_QUAD_ORDER";

type Rule = Arc<[(f64, f64)]>;

fn env_order() -> Option<usize> {
    std::env::var(QUAD_ORDER_ENV).ok().and_then(|s| s.trim().parse().ok()).filter(|&n| n > 0)
}

/// Default Gauss–Legendre order per axis for compactly supported integrands.
pub fn compact_order() -> usize {
    env_order().unwrap_or(DEFAULT_COMPACT_ORDER)
}

/// Default Gauss–Hermite order per axis for Gaussian integrands.
pub fn gaussian_order() -> usize {
    env_order().unwrap_or(DEFAULT_GAUSSIAN_ORDER)
}

fn cached(cache: &'static OnceLock<Mutex<HashMap<usize, Rule>>>, n: usize, build: fn(usize) -> Rule) -> Rule {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = map.lock().expect("rule cache").get(&n) {
        return r.clone();
    }
    let r = build(n);
    map.lock().expect("rule cache").insert(n, r.clone());
    r
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn legendre(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    cached(&CACHE, n, |n| {
        let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("positive order"));
        let mut v: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.into()
    })
}

/// Gauss–Hermite nodes and weights for the weight `e^{−x²}` on ℝ.
pub fn hermite(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    cached(&CACHE, n, |n| {
        let rule = GaussHermite::new(NonZeroUsize::new(n).expect("positive order"));
        let mut v: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.into()
    })
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn legendre_on(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    legendre(n).iter().map(|&(x, w)| (c + h * x, h * w)).collect()
}

/// Sums in a balanced binary tree; the order of additions depends only on the length.
pub fn pairwise_sum<T>(mut items: Vec<T>, add: impl Fn(T, T) -> T + Copy) -> Option<T> {
    if items.is_empty() {
        return None;
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(add(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}

fn weighted_sum(f: &impl Fn(f64) -> Result<JetForm>, nodes: &[(f64, f64)]) -> Result<JetForm> {
    let mut terms = Vec::with_capacity(nodes.len());
    for &(t, w) in nodes {
        terms.push(f(t)?.scale(Complex64::new(w, 0.0)));
    }
    Ok(pairwise_sum(terms, |a, b| a + b).expect("nonempty rule"))
}

/// `∫_a^b f` with an `n`-point Gauss–Legendre rule.
pub fn finite_integral(f: impl Fn(f64) -> Result<JetForm>, a: f64, b: f64, n: usize) -> Result<JetForm> {
    weighted_sum(&f, &legendre_on(a, b, n))
}

/// Relative change threshold for the order-doubling loop.
pub const DOUBLING_TOL: f64 = 1e-10;
const MAX_ORDER_DOUBLINGS: usize = 4;

/// Truncation point `T₀ = max(4, 8/√h)` for integrands decaying like `e^{−h t²}`.
pub fn truncation_point(t_lo: f64, h: f64) -> f64 {
    (8.0 / h.sqrt()).max(4.0).max(t_lo + 1.0)
}

/// `∫_{t_lo}^∞ f(t) dt` for an integrand with Gaussian decay rate `h > 0`.
///
/// Gauss–Legendre on `[t_lo, T₀]` with order doubling until successive values
/// agree to [`DOUBLING_TOL`], plus the tail on `[T₀, ∞)` through `t = T₀ + u/(1−u)`.
pub fn half_line_integral(f: impl Fn(f64) -> Result<JetForm>, t_lo: f64, h: f64) -> Result<JetForm> {
    let t0 = truncation_point(t_lo, h);
    let mut n = 32;
    let mut prev = weighted_sum(&f, &legendre_on(t_lo, t0, n))?;
    for _ in 0..MAX_ORDER_DOUBLINGS {
        n *= 2;
        let next = weighted_sum(&f, &legendre_on(t_lo, t0, n))?;
        let change = next.max_abs_diff(&prev);
        prev = next;
        if change <= DOUBLING_TOL * prev.max_abs().max(1.0) {
            break;
        }
    }
    let tail_nodes: Vec<(f64, f64)> = legendre_on(0.0, 1.0, 24)
        .into_iter()
        .map(|(u, w)| (t0 + u / (1.0 - u), w / ((1.0 - u) * (1.0 - u))))
        .collect();
    let tail = weighted_sum(&f, &tail_nodes)?;
    Ok(prev + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{Coeff, Jet};

    #[test]
    fn legendre_integrates_polynomials() {
        let s: f64 = legendre_on(0.0, 2.0, 5).iter().map(|&(x, w)| w * x.powi(9)).sum();
        assert!((s - 2f64.powi(10) / 10.0).abs() < 1e-10);
    }

    #[test]
    fn hermite_integrates_gaussian_moments() {
        let r = hermite(48);
        let m0: f64 = r.iter().map(|&(_, w)| w).sum();
        let m2: f64 = r.iter().map(|&(x, w)| w * x * x).sum();
        assert!((m0 - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!((m2 - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn pairwise_sum_shape() {
        assert_eq!(pairwise_sum(vec![1, 2, 3, 4, 5], |a, b| a + b), Some(15));
        assert_eq!(pairwise_sum(Vec::<i32>::new(), |a, b| a + b), None);
    }

    #[test]
    fn half_line_gaussian_moment() {
        for h in [0.25, 1.0, 9.0] {
            let f = |t: f64| Ok(JetForm::scalar(1, Jet::from_f64(t * (-h * t * t).exp())));
            let v = half_line_integral(f, 0.0, h).unwrap().get(0).val().re;
            assert!((v - 0.5 / h).abs() < 1e-13 * (0.5 / h), "h={h}: {v}");
        }
    }
}
