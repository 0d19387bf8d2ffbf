//! The symbol on the cotangent bundle of the circle. The transgression form is
//! `-i dθ` on one side of the zero section and vanishes on the other.

use std::f64::consts::PI;

use chernforms::exterior::smooth_cutoff_on;
use chernforms::quillen::models::cotangent_circle;
use chernforms::quillen::{beta_form, ch_sup_rep};
use chernforms::relative::{integrate_compact, IntegrationBox};

fn main() -> chernforms::Result<()> {
    let (b, a) = cotangent_circle();
    let beta = beta_form(&b, &a, 0.0);
    for xi in [1.5, -1.5] {
        let v = beta.eval(&[0.3, xi])?;
        println!("xi = {xi:+}: beta = {:.6} dθ + {:.6} dξ", v.get(0b01), v.get(0b10));
    }
    let chi = smooth_cutoff_on(2, &[1], 0.5, 4.0)?;
    let region = IntegrationBox::new(vec![(-PI, PI), (-2.0, 2.0)]).with_panels(4);
    let total = integrate_compact(&ch_sup_rep(&b, &a, &chi)?, &region, 24)?;
    println!("integral over (θ, ξ) = {total:.8}  (-2 pi i)");
    Ok(())
}
