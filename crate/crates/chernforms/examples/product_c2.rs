//! Multiplicativity on ℂ²: the relative Chern character of the product symbol
//! differs from the `◇_Φ` product of the factors by `d_rel` of an explicit cochain.

use chernforms::quillen::models::{c2_scenario, C2Scenario};
use chernforms::quillen::{b_forms, ch_rel};
use chernforms::relative::{d_rel, product_phi};

fn main() -> chernforms::Result<()> {
    let C2Scenario { b1, a1, b2, a2, product, a12, phi } = c2_scenario();
    let diamond = product_phi(&ch_rel(&b1, &a1), &ch_rel(&b2, &a2), &phi);
    let prod = ch_rel(&product, &a12);
    let witness = d_rel(&b_forms(&b1, &a1, &b2, &a2, &phi)?.witness(prod.support().clone()));
    for p in [[0.7, -0.3, 0.4, 0.5], [0.2, 0.5, -0.6, 0.1]] {
        let gap = diamond.beta().eval(&p)? - prod.beta().eval(&p)?;
        let w = witness.beta().eval(&p)?;
        println!("{p:?}: |gap| = {:.3e}, |gap - witness| = {:.3e}", gap.max_abs(), gap.max_abs_diff(&w));
    }
    Ok(())
}
