//! Validated minima and saddles of the Müller-Brown potential.

use mep_prove::equilibria::{find_zero, validate_zero, DEFAULT_R_STAR};
use mep_prove::pipeline::RunConfig;
use mep_prove::potential::v;

fn main() -> mep_prove::Result<()> {
    let cfg = RunConfig::default();
    let p = cfg.potential()?;
    let guesses = cfg.minima.iter().map(|m| (&m.name, m.guess)).chain(cfg.saddles.iter().map(|s| (&s.name, s.guess)));
    for (name, guess) in guesses {
        let cp = validate_zero(&p, find_zero(&p, guess)?, DEFAULT_R_STAR)?;
        let energy = v(&p, cp.x(), cp.y())?;
        println!(
            "{name}  {:?}  ({:.15}, {:.15}) ± {:.1e}  V ∈ [{:.10}, {:.10}]",
            cp.kind, cp.center[0], cp.center[1], cp.radius, energy.lo(), energy.hi()
        );
    }
    Ok(())
}
