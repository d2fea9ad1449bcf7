//! Taylor and Chebyshev products, weighted norms and Perron weights.

use mep_prove::series::{
    cauchy_product, cheb_convolution, norm_cheb, norm_taylor, perron_weights, Cheb, Taylor,
};
use mep_prove::Interval;
use nalgebra::DMatrix;

fn main() -> mep_prove::Result<()> {
    // (1 + θ)² as a Cauchy product.
    let u = [1.0, 1.0];
    println!("(1 + θ)²        = {:?}", cauchy_product(&u, &u, 3));
    let t = Taylor::new(vec![1.0, 2.0, 1.0]);
    println!("(1 + θ)² at 0.5 = {}", t.eval(0.5));

    // T1 · T1 = (T0 + T2) / 2 in the symmetric coefficient convention.
    let c = cheb_convolution(&[0.0, 0.5], &[0.0, 0.5], 3);
    println!("T1²             = {c:?}");
    let f = Cheb::new(vec![1.0, 0.5, 0.25]);
    println!("f(0.3)          = {}", f.eval(0.3));
    println!("‖f‖_ν, ν = 1.5  ≤ {}", norm_cheb(&f.c, 1.5).hi());

    // Taylor norm of a vector-valued series with per-component weights.
    let p: [Taylor<Interval>; 6] = std::array::from_fn(|i| Taylor::new(vec![Interval::ONE, Interval::point(0.5 * i as f64)]));
    println!("‖p‖_η           ≤ {}", norm_taylor(&p, &[1.0; 6])?.hi());

    let b = DMatrix::from_row_slice(2, 2, &[0.5, 0.2, 0.1, 0.3]);
    let (w, r) = perron_weights(&b)?;
    println!("Perron vector {w:?}, spectral radius ≈ {r}");
    Ok(())
}
