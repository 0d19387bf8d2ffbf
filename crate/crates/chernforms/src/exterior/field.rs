//! Form fields: pure evaluators from chart points to jet-valued forms.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::form::{FormValue, JetForm};
use super::jet::{coordinate_jets, Coeff, Jet, MAX_ORDER};
use crate::error::{Error, Result};

type Evaluator = dyn Fn(&[f64], usize) -> Result<JetForm> + Send + Sync;
type Domain = dyn Fn(&[f64]) -> bool + Send + Sync;

/// A differential form defined on (part of) a chart.
///
/// The evaluator receives the point and the requested jet order and must
/// return coefficients carrying at least that many derivative orders.
#[derive(Clone)]
pub struct FormField {
    dim: usize,
    eval: Arc<Evaluator>,
    domain: Option<Arc<Domain>>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormField").field("dim", &self.dim).field("restricted", &self.domain.is_some()).finish()
    }
}

impl FormField {
    pub fn new(dim: usize, eval: impl Fn(&[f64], usize) -> Result<JetForm> + Send + Sync + 'static) -> Self {
        FormField { dim, eval: Arc::new(eval), domain: None }
    }

    /// A field given as a function of the coordinate jets.
    pub fn from_jets(dim: usize, f: impl Fn(&[Jet]) -> Result<JetForm> + Send + Sync + 'static) -> Self {
        Self::new(dim, move |p, order| f(&coordinate_jets(p, order)))
    }

    /// A degree-0 field given as a function of the coordinate jets.
    pub fn scalar(dim: usize, f: impl Fn(&[Jet]) -> Jet + Send + Sync + 'static) -> Self {
        Self::from_jets(dim, move |x| Ok(JetForm::scalar(dim, f(x))))
    }

    pub fn constant(form: FormValue) -> Self {
        let dim = form.dim();
        let jets = form.to_jets();
        Self::new(dim, move |_, _| Ok(jets.clone()))
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(FormValue::zero(dim))
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(FormValue::one(dim))
    }

    pub fn with_domain(mut self, pred: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        let pred: Arc<Domain> = match self.domain.take() {
            Some(old) => Arc::new(move |p: &[f64]| old(p) && pred(p)),
            None => Arc::new(pred),
        };
        self.domain = Some(pred);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn in_domain(&self, p: &[f64]) -> bool {
        self.domain.as_ref().map_or(true, |d| d(p))
    }

    /// Evaluates with `order` jet orders on every coefficient.
    pub fn eval_jet(&self, p: &[f64], order: usize) -> Result<JetForm> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        if order > MAX_ORDER {
            return Err(Error::JetsUnavailable { needed: order, available: MAX_ORDER });
        }
        if !self.in_domain(p) {
            return Err(Error::OutsideDomain(p.to_vec()));
        }
        let f = (self.eval)(p, order)?;
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: f.dim() });
        }
        Ok(f)
    }

    /// Pointwise value.
    pub fn eval(&self, p: &[f64]) -> Result<FormValue> {
        Ok(self.eval_jet(p, 0)?.values())
    }

    fn combine(&self, o: &FormField, op: impl Fn(JetForm, JetForm) -> JetForm + Send + Sync + 'static) -> FormField {
        assert_eq!(self.dim, o.dim, "fields on different charts");
        let (a, b) = (self.clone(), o.clone());
        FormField::new(self.dim, move |p, k| Ok(op(a.eval_jet(p, k)?, b.eval_jet(p, k)?)))
    }

    pub fn wedge(&self, o: &FormField) -> FormField {
        self.combine(o, |a, b| a.wedge(&b))
    }

    pub fn add(&self, o: &FormField) -> FormField {
        self.combine(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &FormField) -> FormField {
        self.combine(o, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> FormField {
        let a = self.clone();
        FormField::new(self.dim, move |p, k| Ok(a.eval_jet(p, k)?.scale(c)))
    }

    pub fn neg(&self) -> FormField {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// `self ∧ o`, skipping the evaluation of `o` where `self` vanishes identically
    /// (as a jet). Used when `o` is only defined where `self` is nonzero.
    pub fn guarded_wedge(&self, o: &FormField) -> FormField {
        assert_eq!(self.dim, o.dim, "fields on different charts");
        let (a, b) = (self.clone(), o.clone());
        FormField::new(self.dim, move |p, k| {
            let fa = a.eval_jet(p, k)?;
            if fa.is_zero() {
                return Ok(JetForm::zero(fa.dim()));
            }
            Ok(fa.wedge(&b.eval_jet(p, k)?))
        })
    }

    /// Exterior derivative.
    pub fn d(&self) -> FormField {
        exterior_derivative(self)
    }

    /// Applies a pointwise transformation to the jet form.
    pub fn map(&self, f: impl Fn(JetForm) -> JetForm + Send + Sync + 'static) -> FormField {
        let a = self.clone();
        FormField::new(self.dim, move |p, k| Ok(f(a.eval_jet(p, k)?)))
    }
}

/// `dω`; evaluating the result at jet order `k` evaluates `ω` at order `k+1`.
pub fn exterior_derivative(w: &FormField) -> FormField {
    let inner = w.clone();
    let mut out = FormField::new(w.dim, move |p, order| {
        if order + 1 > MAX_ORDER {
            return Err(Error::JetsUnavailable { needed: order + 1, available: MAX_ORDER });
        }
        let f = inner.eval_jet(p, order + 1)?;
        Ok(f.d()?.truncate(order))
    });
    out.domain = w.domain.clone();
    out
}

/// Helper producing the scalar jet `Σ x_i²` over the coordinates listed in `coords` (0-based).
pub fn squared_norm(x: &[Jet], coords: &[usize]) -> Jet {
    coords.iter().fold(Jet::zero(), |acc, &i| acc + x[i] * x[i])
}
