//! Validated parameterization of the unstable manifold of a saddle.

use mep_prove::equilibria::{find_zero, saddle_eigen, validate_zero, DEFAULT_R_STAR};
use mep_prove::manifold::{compute_parameterization, conjugacy_check, validate_manifold};
use mep_prove::pipeline::RunConfig;

fn main() -> mep_prove::Result<()> {
    let cfg = RunConfig::default();
    let p = cfg.potential()?;
    for s in &cfg.saddles {
        let mut cp = validate_zero(&p, find_zero(&p, s.guess)?, DEFAULT_R_STAR)?;
        cp.eigen = Some(saddle_eigen(&p, &cp)?);
        let param = validate_manifold(&p, &cp, &compute_parameterization(&p, &cp, s.gamma, s.order)?)?;
        println!(
            "W^u({})  λ ∈ [{:.12}, {:.12}]  γ = {}  N = {}  r = {:.3e}",
            s.name, param.lambda.lo(), param.lambda.hi(), param.gamma, param.order, param.radius().unwrap()
        );
        for theta in [-1.0, 1.0] {
            let x = param.eval_point(theta);
            println!("  P({theta:+}) ≈ ({:.9}, {:.9})", x[0], x[1]);
        }
        println!("  conjugacy defect at t = 1e-3, θ = 0.3: {:.2e}", conjugacy_check(&p, &param, 1e-3, 0.3)?);
    }
    Ok(())
}
