//! Relative Chern characters of super-connections, Mathai–Quillen Thom forms
//! and the relative de Rham operations behind them, evaluated numerically on
//! coordinate charts.
//!
//! The crate is organised bottom-up:
//!
//! * [`exterior`]: forms, jets, exterior derivative, cutoffs.
//! * [`superlinalg`]: super matrices of forms, supertrace, two exponentials, graded norm.
//! * [`clifford_berezin`]: exterior and Clifford algebras over a fiber, Berezin integral, spinors.
//! * [`relative`]: relative cochains, `d_rel`, the `◇_Φ` product, `p_χ`, integration.
//! * [`quillen`]: Quillen super-connections, Chern and transgression forms, products.
//! * [`thom`]: Euclidean bundles, Euler and Thom forms, Â-genus, the Riemann–Roch identities.
//! * [`harness`]: the verification scenarios and their reports.

pub mod clifford_berezin;
pub mod error;
pub mod exterior;
pub mod harness;
pub mod quadrature;
pub mod quillen;
pub mod relative;
pub mod superlinalg;
pub mod thom;

pub use error::{Error, Result};
pub use num_complex::Complex64;
