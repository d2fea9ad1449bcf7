//! Radii-polynomial certification from given bounds.

use mep_prove::contraction::{certify, radii_polynomials, RadiiBounds};

fn main() {
    let b = RadiiBounds::new(1e-10, 0.3, 5.0, 10.0, 20.0);
    let cert = certify(&b);
    println!("success {}  r ∈ [{:e}, {:e}]  chosen r = {:e}", cert.success, cert.r_min.hi(), cert.r_max.lo(), cert.radius);
    let pq = radii_polynomials(&b);
    println!("P(r) ≤ {:e}, Q(r) ≤ {:e}", pq.eval_p(cert.radius).hi(), pq.eval_q(cert.radius).hi());
    assert!(cert.reverify());

    // Contraction fails once Z1 reaches 1.
    let bad = certify(&RadiiBounds::new(1e-10, 1.0, 5.0, 10.0, 20.0));
    println!("Z1 = 1: success {}  ({})", bad.success, bad.diagnostic.unwrap_or_default());
}
