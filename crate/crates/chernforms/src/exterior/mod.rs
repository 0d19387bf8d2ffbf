//! Exterior algebra on an `m`-dimensional chart with complex coefficients.
//!
//! Forms are stored densely by subset bitmask; the coefficient of
//! `dx_{i₁}∧…∧dx_{i_k}` lives at `Σ 2^{i_j − 1}`. Fields evaluate to forms whose
//! coefficients are [`Jet`]s, which gives exact exterior derivatives.

pub mod cutoff;
pub mod field;
pub mod form;
pub mod jet;

pub use cutoff::{partition_pair, smooth_cutoff, smooth_cutoff_on, smooth_step};
pub use field::{exterior_derivative, FormField};
pub use form::{epsilon_sign, wedge, Form, FormValue, JetForm, MultiIndex};
pub use jet::{coordinate_jets, Coeff, Jet, MAX_DIM, MAX_ORDER};
