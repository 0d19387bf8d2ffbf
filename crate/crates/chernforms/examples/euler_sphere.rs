//! Gauss–Bonnet on the spherical chart: the Euler form of `TS²` integrates to 2.

use std::f64::consts::PI;

use chernforms::relative::{integrate_compact, IntegrationBox};
use chernforms::thom::{euler_form, EuclideanBundle};

fn main() -> chernforms::Result<()> {
    let e = euler_form(&EuclideanBundle::sphere_tangent());
    let region = IntegrationBox::new(vec![(0.0, PI), (-PI, PI)]).with_panels(2);
    println!("Euler number of S²: {:.10}", integrate_compact(&e, &region, 24)?.re);
    Ok(())
}
