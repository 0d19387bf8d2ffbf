//! Super matrices of differential forms.
//!
//! Entries live in `End(E) ⊗ Λℂ^m` for a graded space `E = E⁺ ⊕ E⁻`. Two
//! exponentials are provided: [`graded_exp`] through the regular representation
//! and [`series_exp`] directly in the algebra (also over jets), plus the Volterra
//! series [`volterra_exp`] for `e^{H+R}` with Hermitian `H`.

pub mod exp;
mod flat;
pub mod matrix;
pub mod norm;
pub mod tensor;
pub mod volterra;

pub use exp::{graded_exp, nilpotent_exp, regular_representation, series_exp, REGULAR_REP_CAP};
pub use matrix::{JetSuperMatrix, ParitySplit, SuperMatrix, SuperMatrixForm};
pub use norm::{graded_norm, operator_norm, smallest_eigenvalue, truncated_exp_polynomial, HermitianEndo};
pub use tensor::{kron_left, kron_right, tensor_split};
pub use volterra::{hermitian_from_rows, volterra_exp, DEFAULT_SIMPLEX_ORDER};
