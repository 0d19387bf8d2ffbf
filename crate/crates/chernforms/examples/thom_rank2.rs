//! Mathai–Quillen forms of a rank-2 bundle over the torus chart, and their
//! fiber integrals.

use chernforms::exterior::smooth_cutoff_on;
use chernforms::relative::{integrate_fiber, FiberRule, IntegrationBox};
use chernforms::thom::{rank2, thom_c, thom_mq, EuclideanBundle, ThomPoint};

fn main() -> chernforms::Result<()> {
    let b = EuclideanBundle::torus(0.3);
    let p = [0.4, -1.1, 0.7, -0.3];
    let q = ThomPoint::new(&b, &p, 0)?;
    let closed = q.beta_closed()?.values();
    let quad = q.beta_quadrature()?.values();
    println!("beta: closed vs quadrature {:.2e}", closed.max_abs_diff(&quad));
    println!("beta: closed vs rank-2 display {:.2e}", closed.max_abs_diff(&rank2::beta_wedge(&b, &p)?));

    let fiber = b.fiber_coords();
    let gauss = FiberRule::Gaussian { rate: 1.0, order: 32 };
    let mq = integrate_fiber(&thom_mq(&b), &fiber, &gauss, &[0.4, -1.1])?;
    let chi = smooth_cutoff_on(4, &fiber, 0.25, 4.0)?;
    let rule = FiberRule::Compact { region: IntegrationBox::cube(2, 2.0).with_panels(4), order: 24 };
    let c = integrate_fiber(&thom_c(&b, &chi)?, &fiber, &rule, &[0.4, -1.1])?;
    println!("fiber integrals: Th_MQ {:.10}, Th_c {:.10}", mq.get(0), c.get(0));
    Ok(())
}
