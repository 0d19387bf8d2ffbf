//! The Bott symbol on the plane: its transgression form and the integral of
//! its compactly supported Chern representative.

use chernforms::exterior::smooth_cutoff;
use chernforms::quillen::models::bott;
use chernforms::quillen::{beta_form, ch_sup_rep};
use chernforms::relative::{integrate_compact, IntegrationBox};

fn main() -> chernforms::Result<()> {
    let (b, a) = bott();
    let beta = beta_form(&b, &a, 0.0);
    for p in [[1.0, 0.0], [0.0, 2.0], [0.6, -0.8]] {
        let v = beta.eval(&p)?;
        println!("beta{:?} = {:.6} dx + {:.6} dy", p, v.get(0b01), v.get(0b10));
    }
    let chi = smooth_cutoff(2, 0.25, 4.0)?;
    let region = IntegrationBox::cube(2, 2.0).with_panels(4);
    let total = integrate_compact(&ch_sup_rep(&b, &a, &chi)?, &region, 24)?;
    println!("integral of c(sigma, A, chi) = {total:.8}  (2 pi i = {:.8})", 2.0 * std::f64::consts::PI);
    Ok(())
}
