//! One connecting orbit, from the unstable manifold of Sad1 into the
//! trapping square of Min2, validated as a piecewise Chebyshev series.

use mep_prove::equilibria::{find_zero, saddle_eigen, validate_trapping_square, validate_zero, DEFAULT_R_STAR};
use mep_prove::manifold::{compute_parameterization, validate_manifold};
use mep_prove::orbit::{validate_orbit, OrbitOptions, OrbitProblem};
use mep_prove::pipeline::RunConfig;
use mep_prove::Interval;

fn main() -> mep_prove::Result<()> {
    let cfg = RunConfig::default();
    let p = cfg.potential()?;
    let leg = cfg.orbits.iter().find(|o| o.saddle == "Sad1" && o.target == "Min2").unwrap();
    let s = cfg.saddles.iter().find(|s| s.name == leg.saddle).unwrap();
    let m = cfg.minima.iter().find(|m| m.name == leg.target).unwrap();

    let mut saddle = validate_zero(&p, find_zero(&p, s.guess)?, DEFAULT_R_STAR)?;
    saddle.eigen = Some(saddle_eigen(&p, &saddle)?);
    let param = validate_manifold(&p, &saddle, &compute_parameterization(&p, &saddle, s.gamma, s.order)?)?;
    let minimum = validate_zero(&p, find_zero(&p, m.guess)?, DEFAULT_R_STAR)?;
    let square = validate_trapping_square(&p, &minimum, cfg.trapping.half_side, cfg.trapping.subdivisions)?;

    let start = param.eval_with_tail(Interval::point(leg.branch as f64))?;
    let tau = leg.tau.unwrap();
    let prob = OrbitProblem::new(&p, start, tau, leg.pieces, leg.order, leg.nu)?;
    let x = prob.solve_truncated(&prob.initial_guess()?)?;
    let sol = validate_orbit(&prob, &x, &square, &OrbitOptions::default())?;

    println!("Sad1 -> Min2  τ = {tau}  M = {}  K = {}  ν = {}", leg.pieces, leg.order, leg.nu);
    println!("ρ = {:.3e}", sol.rho);
    for k in 0..=4 {
        let t = tau * k as f64 / 4.0;
        let u = sol.eval(t);
        println!("  x({t:.5}) ≈ ({:.9}, {:.9})", u[0], u[1]);
    }
    let e = &sol.endpoint;
    println!("x(τ) ∈ [{:.9}, {:.9}] × [{:.9}, {:.9}]", e[0].lo(), e[0].hi(), e[1].lo(), e[1].hi());
    Ok(())
}
