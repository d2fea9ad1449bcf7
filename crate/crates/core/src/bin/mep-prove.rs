use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mep_prove::pipeline::{self, MEPReport, OrbitConfig, RunConfig, Scope, StageCache, Verdict};
use mep_prove::{Error, Result};

/// Computer-assisted proofs of minimum-energy paths of the Müller-Brown potential.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// JSON run configuration; defaults reproduce the standard chain.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for the report, coefficient files and plot data.
    #[arg(long, global = true, default_value = "mep-out")]
    out: PathBuf,
    /// Widen the error budget of exp to 4 ulps.
    #[arg(long, global = true)]
    paranoid: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate all minima and saddles.
    CriticalPoints,
    /// Validate the unstable manifolds of the saddles.
    Manifold,
    /// Validate trapping squares around the minima.
    Trapping,
    /// Validate connecting orbits (all configured legs, or a selection).
    Orbit(OrbitArgs),
    /// Run the full proof.
    Mep,
    /// Re-verify a stored report and regenerate its derived files.
    Report,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    /// Saddle the orbit leaves.
    #[arg(long)]
    from: Option<String>,
    /// Minimum the orbit reaches.
    #[arg(long)]
    to: Option<String>,
    /// End of the manifold the orbit starts from (1 or -1), for a new leg.
    #[arg(long, allow_hyphen_values = true)]
    branch: Option<i8>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    pieces: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    nu: Option<f64>,
}

fn select_legs(config: &mut RunConfig, a: &OrbitArgs) -> Result<()> {
    let keep = |o: &OrbitConfig| {
        a.from.as_ref().is_none_or(|s| &o.saddle == s) && a.to.as_ref().is_none_or(|m| &o.target == m)
    };
    let mut legs: Vec<OrbitConfig> = config.orbits.iter().filter(|o| keep(o)).cloned().collect();
    if legs.is_empty() {
        let (Some(from), Some(to), Some(branch)) = (&a.from, &a.to, a.branch) else {
            return Err(Error::Config("no configured leg matches; give --from, --to and --branch".into()));
        };
        legs.push(OrbitConfig {
            saddle: from.clone(),
            target: to.clone(),
            branch,
            tau: None,
            pieces: 10,
            order: 20,
            nu: 1.5,
            zk: Default::default(),
        });
    }
    for o in &mut legs {
        if let Some(b) = a.branch {
            o.branch = b;
        }
        if a.tau.is_some() {
            o.tau = a.tau;
        }
        o.pieces = a.pieces.unwrap_or(o.pieces);
        o.order = a.order.unwrap_or(o.order);
        o.nu = a.nu.unwrap_or(o.nu);
    }
    config.orbits = legs;
    config.validate()
}

fn finish(report: &MEPReport, out: &std::path::Path) -> Result<bool> {
    pipeline::write_outputs(report, out)?;
    print!("{}", report.summary());
    Ok(report.is_proven())
}

fn main_inner(cli: Cli) -> Result<bool> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cli.paranoid {
        config = config.paranoid();
    }
    let cache = StageCache::new(cli.out.join("cache"));
    let scope = match &cli.command {
        Command::CriticalPoints => Scope::CriticalPoints,
        Command::Manifold => Scope::Manifolds,
        Command::Trapping => Scope::Trapping,
        Command::Orbit(a) => {
            select_legs(&mut config, a)?;
            Scope::Mep
        }
        Command::Mep => Scope::Mep,
        Command::Report => {
            let path = cli.out.join("report.json");
            let mut report: MEPReport = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
            let stored = report.verdict;
            report.verdict = report.reverify();
            if stored == Verdict::Proven && report.verdict != Verdict::Proven {
                eprintln!("stored verdict does not re-verify");
            }
            return finish(&report, &cli.out);
        }
    };
    let report = pipeline::run(&config, scope, Some(&cache))?;
    finish(&report, &cli.out)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
