//! The full chain Min1 <- Sad1 -> Min2 <- Sad2 -> Min3, with output files.

use mep_prove::pipeline::{prove_mep, write_outputs, RunConfig};

fn main() -> mep_prove::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "mep-out".into());
    let report = prove_mep(&RunConfig::default())?;
    print!("{}", report.summary());
    for f in write_outputs(&report, out.as_ref())? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
