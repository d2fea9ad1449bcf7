//! Trapping squares around the minima.

use mep_prove::equilibria::{find_zero, validate_trapping_square, validate_zero, DEFAULT_R_STAR, TRAPPING_SUBDIVISIONS};
use mep_prove::pipeline::RunConfig;

fn main() -> mep_prove::Result<()> {
    let cfg = RunConfig::default();
    let p = cfg.potential()?;
    for m in &cfg.minima {
        let cp = validate_zero(&p, find_zero(&p, m.guess)?, DEFAULT_R_STAR)?;
        for h in [0.01, 0.05, 0.2] {
            match validate_trapping_square(&p, &cp, h, TRAPPING_SUBDIVISIONS) {
                Ok(sq) => println!("U({})  half side {h}: proven ({} convexity cells)", m.name, sq.convexity_cells),
                Err(e) => println!("U({})  half side {h}: not proven ({e})", m.name),
            }
        }
    }
    Ok(())
}
