//! End-to-end proof of a minimum-energy path.
//!
//! Stages run in dependency order: critical points, then unstable manifolds
//! of the saddles and trapping squares of the minima, then the connecting
//! orbits. Independent items of a stage run in parallel. A failure is
//! recorded in the report and only skips the items that depend on it.

mod cache;
mod config;
mod front;
mod output;

pub use cache::StageCache;
pub use config::{MinimumConfig, OrbitConfig, RunConfig, SaddleConfig, TrappingConfig};
pub use front::{find_tau, integrate_ivp, TAU_MARGIN, TAU_SEARCH_MAX, TAU_SQUARE_SHRINK};
pub use output::{emit_plot_data, write_outputs, PLOT_FILES};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::{
    find_zero, saddle_eigen, validate_trapping_square, validate_zero, CriticalKind, CriticalPoint, TrappingSquare,
};
use crate::error::{Error, Result};
use crate::interval::{set_exp_ulp_budget, Interval};
use crate::manifold::{compute_parameterization, tune_gamma, validate_manifold, ManifoldParam};
use crate::orbit::{validate_orbit, OrbitOptions, OrbitProblem, OrbitSolution};
use crate::potential::MBParams;

/// Result of one stage item.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum Outcome<T> {
    Proven(T),
    Failed(String),
    /// Not attempted because an input stage failed.
    Skipped(String),
}

impl<T> Outcome<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Proven(v),
            Err(e) => Outcome::Failed(e.to_string()),
        }
    }

    pub fn proven(&self) -> Option<&T> {
        match self {
            Outcome::Proven(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_proven(&self) -> bool {
        self.proven().is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    CriticalPoints,
    Manifolds,
    Trapping,
    /// Everything, including the orbits of the configured legs.
    Mep,
}

impl Scope {
    fn minima(self) -> bool {
        matches!(self, Scope::CriticalPoints | Scope::Trapping | Scope::Mep)
    }

    fn saddles(self) -> bool {
        matches!(self, Scope::CriticalPoints | Scope::Manifolds | Scope::Mep)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Proven,
    NotProven,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalEntry {
    pub name: String,
    pub kind: CriticalKind,
    pub outcome: Outcome<CriticalPoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifoldEntry {
    pub saddle: String,
    pub outcome: Outcome<ManifoldParam>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrappingEntry {
    pub minimum: String,
    pub outcome: Outcome<TrappingSquare>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub saddle: String,
    pub target: String,
    pub branch: i8,
    /// Integration time used (configured or searched).
    pub tau: Option<f64>,
    pub outcome: Outcome<OrbitSolution>,
}

impl OrbitEntry {
    pub fn label(&self) -> String {
        format!("{}->{}", self.saddle, self.target)
    }
}

/// Everything a run established, plus the verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MEPReport {
    pub scope: Scope,
    pub config: RunConfig,
    pub critical_points: Vec<CriticalEntry>,
    pub manifolds: Vec<ManifoldEntry>,
    pub trapping: Vec<TrappingEntry>,
    pub orbits: Vec<OrbitEntry>,
    /// The chain as `Min1 <- Sad1 -> Min2 <- Sad2 -> Min3`.
    pub chain: String,
    pub verdict: Verdict,
}

impl MEPReport {
    pub fn is_proven(&self) -> bool {
        self.verdict == Verdict::Proven
    }

    /// Recompute the verdict from the stored outcomes, re-evaluating the
    /// radii polynomials of every stored certificate.
    pub fn reverify(&self) -> Verdict {
        let cps = self.critical_points.iter().all(|e| {
            e.outcome.proven().is_some_and(|c| {
                c.certificate.reverify()
                    && c.kind == e.kind
                    && c.eigen.as_ref().map_or(e.kind == CriticalKind::Minimum, |g| {
                        g.unstable.certificate.reverify() && g.stable.certificate.reverify()
                    })
            })
        });
        let mans = self.manifolds.iter().all(|e| {
            e.outcome
                .proven()
                .and_then(|m| m.validation.as_ref())
                .is_some_and(|v| v.certificate.reverify())
        });
        let traps = self.trapping.iter().all(|e| e.outcome.is_proven());
        let orbits = self.orbits.iter().all(|e| {
            e.outcome.proven().is_some_and(|o| {
                let sq = self
                    .trapping
                    .iter()
                    .find(|t| t.minimum == e.target)
                    .and_then(|t| t.outcome.proven());
                o.certificate.reverify() && sq.is_some_and(|s| s.contains_box(o.endpoint[0], o.endpoint[1]))
            })
        });
        let nonempty = !self.critical_points.is_empty() && (self.scope != Scope::Mep || !self.orbits.is_empty());
        if nonempty && cps && mans && traps && orbits {
            Verdict::Proven
        } else {
            Verdict::NotProven
        }
    }

    /// One line per stage item.
    pub fn summary(&self) -> String {
        fn line<T>(out: &mut String, label: &str, o: &Outcome<T>, detail: impl FnOnce(&T) -> String) {
            let s = match o {
                Outcome::Proven(v) => format!("proven   {label:<16} {}", detail(v)),
                Outcome::Failed(e) => format!("FAILED   {label:<16} {e}"),
                Outcome::Skipped(e) => format!("skipped  {label:<16} {e}"),
            };
            out.push_str(&s);
            out.push('\n');
        }
        let mut out = String::new();
        for e in &self.critical_points {
            line(&mut out, &e.name, &e.outcome, |c| {
                format!("({:.15}, {:.15}) ± {:.1e}", c.center[0], c.center[1], c.radius)
            });
        }
        for e in &self.manifolds {
            line(&mut out, &format!("W^u({})", e.saddle), &e.outcome, |m| {
                format!("γ = {}, N = {}, r = {:.3e}", m.gamma, m.order, m.radius().unwrap_or(f64::NAN))
            });
        }
        for e in &self.trapping {
            line(&mut out, &format!("U({})", e.minimum), &e.outcome, |t| {
                format!("half side {}, {} cells", t.half_side, t.convexity_cells)
            });
        }
        for e in &self.orbits {
            line(&mut out, &e.label(), &e.outcome, |o| {
                format!("τ = {}, M = {}, K = {}, ν = {}, ρ = {:.3e}", o.tau(), o.pieces(), o.order, o.nu, o.rho)
            });
        }
        out.push_str(&format!("chain    {}\nverdict  {:?}\n", self.chain, self.verdict));
        out
    }
}

/// Chain notation from the legs, in configuration order.
fn chain_string(orbits: &[OrbitConfig], saddles: &[SaddleConfig]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for s in saddles {
        let legs: Vec<&str> = orbits.iter().filter(|o| o.saddle == s.name).map(|o| o.target.as_str()).collect();
        let seg = match legs.as_slice() {
            [] => continue,
            [a] => vec![s.name.clone(), "->".into(), a.to_string()],
            [a, rest @ ..] => {
                let mut v = vec![a.to_string(), "<-".into(), s.name.clone()];
                for b in rest {
                    v.push("->".into());
                    v.push(b.to_string());
                }
                v
            }
        };
        if parts.last() == seg.first() {
            parts.extend(seg.into_iter().skip(1));
        } else {
            if !parts.is_empty() {
                parts.push("|".into());
            }
            parts.extend(seg);
        }
    }
    parts.join(" ")
}

fn critical_stage(p: &MBParams, cfg: &RunConfig, guess: [f64; 2], kind: CriticalKind) -> Result<CriticalPoint> {
    let z = find_zero(p, guess)?;
    let mut cp = validate_zero(p, z, cfg.r_star)?;
    if cp.kind != kind {
        return Err(Error::validation(
            "critical point",
            format!("expected a {kind:?}, found a {:?}", cp.kind),
        ));
    }
    if kind == CriticalKind::Saddle {
        cp.eigen = Some(saddle_eigen(p, &cp)?);
    }
    Ok(cp)
}

fn manifold_stage(p: &MBParams, cp: &CriticalPoint, s: &SaddleConfig) -> Result<ManifoldParam> {
    let gamma = if s.tune_gamma { tune_gamma(p, cp, s.gamma, s.order)? } else { s.gamma };
    validate_manifold(p, cp, &compute_parameterization(p, cp, gamma, s.order)?)
}

fn orbit_stage(p: &MBParams, man: &ManifoldParam, sq: &TrappingSquare, o: &OrbitConfig, tau: f64) -> Result<OrbitSolution> {
    let start = man.eval_with_tail(Interval::point(o.branch as f64))?;
    let prob = OrbitProblem::new(p, start, tau, o.pieces, o.order, o.nu)?;
    let x = prob.solve_truncated(&prob.initial_guess()?)?;
    validate_orbit(&prob, &x, sq, &OrbitOptions { zk: o.zk, weights: None })
}

fn skipped<T>(what: &str) -> Outcome<T> {
    Outcome::Skipped(format!("{what} was not proven"))
}

/// Run the stages of `scope`, reusing results stored in `cache`.
///
/// Sets the global `exp` error budget to `config.exp_ulp_budget`.
pub fn run(config: &RunConfig, scope: Scope, cache: Option<&StageCache>) -> Result<MEPReport> {
    config.validate()?;
    set_exp_ulp_budget(config.exp_ulp_budget);
    let p = config.potential()?;
    // Inputs shared by every cache key.
    let base = (&config.params, config.exp_ulp_budget, config.r_star);

    let mut todo: Vec<(String, [f64; 2], CriticalKind)> = Vec::new();
    if scope.minima() {
        todo.extend(config.minima.iter().map(|m| (m.name.clone(), m.guess, CriticalKind::Minimum)));
    }
    if scope.saddles() {
        todo.extend(config.saddles.iter().map(|s| (s.name.clone(), s.guess, CriticalKind::Saddle)));
    }
    let critical_points: Vec<CriticalEntry> = todo
        .into_par_iter()
        .map(|(name, guess, kind)| {
            let key = StageCache::key("critical", &(base, guess, kind));
            let r = StageCache::get_or(cache, &key, || critical_stage(&p, config, guess, kind));
            CriticalEntry { name, kind, outcome: Outcome::from_result(r) }
        })
        .collect();
    let cp = |name: &str| {
        critical_points
            .iter()
            .find(|e| e.name == name)
            .and_then(|e| e.outcome.proven())
    };

    let manifolds: Vec<ManifoldEntry> = if matches!(scope, Scope::Manifolds | Scope::Mep) {
        config
            .saddles
            .par_iter()
            .map(|s| {
                let outcome = match cp(&s.name) {
                    None => skipped(&s.name),
                    Some(c) => {
                        let key = StageCache::key("manifold", &(base, c, s));
                        Outcome::from_result(StageCache::get_or(cache, &key, || manifold_stage(&p, c, s)))
                    }
                };
                ManifoldEntry { saddle: s.name.clone(), outcome }
            })
            .collect()
    } else {
        Vec::new()
    };

    let trapping: Vec<TrappingEntry> = if matches!(scope, Scope::Trapping | Scope::Mep) {
        let t = &config.trapping;
        config
            .minima
            .par_iter()
            .map(|m| {
                let outcome = match cp(&m.name) {
                    None => skipped(&m.name),
                    Some(c) => {
                        let key = StageCache::key("trapping", &(base, c, t));
                        Outcome::from_result(StageCache::get_or(cache, &key, || {
                            validate_trapping_square(&p, c, t.half_side, t.subdivisions)
                        }))
                    }
                };
                TrappingEntry { minimum: m.name.clone(), outcome }
            })
            .collect()
    } else {
        Vec::new()
    };

    let orbits: Vec<OrbitEntry> = if scope == Scope::Mep {
        config
            .orbits
            .par_iter()
            .map(|o| {
                let man = manifolds.iter().find(|e| e.saddle == o.saddle).and_then(|e| e.outcome.proven());
                let sq = trapping.iter().find(|e| e.minimum == o.target).and_then(|e| e.outcome.proven());
                let entry = |tau, outcome| OrbitEntry {
                    saddle: o.saddle.clone(),
                    target: o.target.clone(),
                    branch: o.branch,
                    tau,
                    outcome,
                };
                let (man, sq) = match (man, sq) {
                    (None, _) => return entry(o.tau, skipped(&format!("W^u({})", o.saddle))),
                    (_, None) => return entry(o.tau, skipped(&format!("U({})", o.target))),
                    (Some(m), Some(s)) => (m, s),
                };
                let tau = match o.tau {
                    Some(t) => t,
                    None => match find_tau(&p, &man.eval_point(o.branch as f64), sq) {
                        Ok(t) if t > 0.0 => t,
                        Ok(_) => {
                            return entry(None, Outcome::Failed("the orbit starts inside the trapping square".into()))
                        }
                        Err(e) => return entry(None, Outcome::Failed(e.to_string())),
                    },
                };
                let key = StageCache::key("orbit", &(base, man, sq, o, tau));
                let r = StageCache::get_or(cache, &key, || orbit_stage(&p, man, sq, o, tau));
                entry(Some(tau), Outcome::from_result(r))
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut report = MEPReport {
        scope,
        config: config.clone(),
        critical_points,
        manifolds,
        trapping,
        orbits,
        chain: chain_string(&config.orbits, &config.saddles),
        verdict: Verdict::NotProven,
    };
    report.verdict = report.reverify();
    Ok(report)
}

/// Run every stage of `config` without caching.
pub fn prove_mep(config: &RunConfig) -> Result<MEPReport> {
    run(config, Scope::Mep, None)
}
