//! The two exponentials of a super matrix of forms, and the bound on `e^{-(H+R)}`.

use chernforms::exterior::Form;
use chernforms::superlinalg::{
    graded_exp, graded_norm, hermitian_from_rows, smallest_eigenvalue, truncated_exp_polynomial, volterra_exp,
    ParitySplit, SuperMatrix,
};
use chernforms::Complex64;

fn main() -> chernforms::Result<()> {
    let z = Complex64::new;
    let split = ParitySplit::new(1, 1)?;
    let h = hermitian_from_rows(2, &[z(0.4, 0.0), z(0.2, -0.5), z(0.2, 0.5), z(1.1, 0.0)])?;
    let r = SuperMatrix::from_fn(split, 2, |i, j| {
        let a = 0.2 * (i + 2 * j + 1) as f64;
        Form::from_coeffs(2, vec![z(0.0, 0.0), z(a, -0.2), z(0.3, a), z(-a, 0.1)])
    });
    let full = SuperMatrix::from_numeric(split, 2, h.matrix()).add(&r);
    let v = volterra_exp(&h, &r, 12)?;
    let g = graded_exp(&full)?;
    println!("volterra vs regular representation: {:.2e}", graded_norm(&v.sub(&g)));
    let lhs = graded_norm(&graded_exp(&full.neg())?);
    let rhs = (-smallest_eigenvalue(&h)).exp() * truncated_exp_polynomial(graded_norm(&r), 2);
    println!("||exp(-(H+R))|| = {lhs:.6} <= {rhs:.6}");
    Ok(())
}
