//! The pointwise Riemann–Roch identities relating the spinor Chern forms to the
//! Thom forms. Over a 4-dimensional base the Â-genus has a nonzero degree-4 part.

use chernforms::clifford_berezin::SpinorRep2;
use chernforms::exterior::{Coeff, JetForm};
use chernforms::thom::{a_hat_genus, riemann_roch_check, EuclideanBundle};
use chernforms::Complex64;

fn main() -> chernforms::Result<()> {
    let s = |v| Complex64::new(v, 0.0);
    let b = EuclideanBundle::rank2(4, move |x| {
        JetForm::term(4, &[2], x[0].cos().scale(s(0.3))) + JetForm::term(4, &[4], x[2].sin().scale(s(0.2)))
    })?;
    let a = a_hat_genus(&b).eval(&[0.4, -1.1, 0.2, 0.9])?;
    println!("A-hat at (0.4, -1.1, 0.2, 0.9): 1 + ({:.6}) dx₁∧dx₂∧dx₃∧dx₄", a.get(0b1111));
    let points = vec![vec![0.4, -1.1, 0.2, 0.9, 0.7, -0.3], vec![1.3, 2.4, -0.5, 0.1, 1.1, 0.6]];
    for t in [0.0, 1.0, 2.0] {
        let r = riemann_roch_check(&b, &SpinorRep2::standard(), t, &points)?;
        println!("t = {t}: chern {:.2e}, eta {:.2e}, relative {:.2e}", r.chern.abs, r.eta.abs, r.rel_beta.abs);
    }
    Ok(())
}
