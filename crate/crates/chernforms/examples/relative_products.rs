//! Relative cochains: `d_rel`, the `◇_Φ` product and `p_χ` on random polynomial data.

use chernforms::exterior::{partition_pair, smooth_cutoff, Coeff, FormField};
use chernforms::harness::sampling::{polynomial_cochain, rng_for};
use chernforms::relative::{d_rel, p_chi, product_phi, SupportDescriptor};

fn main() -> chernforms::Result<()> {
    let mut rng = rng_for(5, 0);
    let a1 = polynomial_cochain(&mut rng, 4, 1, SupportDescriptor::ball(&[0, 1], 0.3));
    let a2 = polynomial_cochain(&mut rng, 4, 2, SupportDescriptor::ball(&[2, 3], 0.3));
    let selector = FormField::scalar(4, |x| {
        let n1 = x[0] * x[0] + x[1] * x[1];
        n1 * (n1 + x[2] * x[2] + x[3] * x[3]).recip()
    });
    let phi = partition_pair(&selector);
    let p = [0.8, -0.4, 0.6, 0.7];

    let twice = d_rel(&d_rel(&a1));
    println!("d_rel d_rel: {:.2e}", twice.beta().eval(&p)?.max_abs());

    let lhs = d_rel(&product_phi(&a1, &a2, &phi));
    let r1 = product_phi(&d_rel(&a1), &a2, &phi);
    let r2 = product_phi(&a1, &d_rel(&a2), &phi);
    let rhs = r1.beta().eval(&p)? - r2.beta().eval(&p)?;
    println!("Leibniz for the product: {:.2e}", lhs.beta().eval(&p)?.max_abs_diff(&rhs));

    let chi = smooth_cutoff(4, 0.2, 3.0)?;
    let q = [0.5, 0.4, -0.3, 0.2];
    let a = p_chi(&d_rel(&a2), &chi)?.eval(&q)?;
    let b = p_chi(&a2, &chi)?.d().eval(&q)?;
    println!("p_chi commutes with d: {:.2e}", a.max_abs_diff(&b));
    Ok(())
}
