use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equilibria::{DEFAULT_R_STAR, TRAPPING_SUBDIVISIONS};
use crate::error::{Error, Result};
use crate::interval::{EXP_ULP_BUDGET, EXP_ULP_BUDGET_PARANOID};
use crate::orbit::ZkMode;
use crate::potential::{MBParams, MBParamsDecimal};

/// A minimum to locate and trap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimumConfig {
    pub name: String,
    pub guess: [f64; 2],
}

/// A saddle and the parameterization of its unstable manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaddleConfig {
    pub name: String,
    pub guess: [f64; 2],
    /// Length `γ` of the eigenvector in the parameterization.
    pub gamma: f64,
    /// Number `N` of Taylor coefficients.
    pub order: usize,
    /// Rescale `γ` so that the last coefficient is near machine precision.
    #[serde(default)]
    pub tune_gamma: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrappingConfig {
    pub half_side: f64,
    pub subdivisions: usize,
}

/// One leg `saddle -> target` of the chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitConfig {
    pub saddle: String,
    pub target: String,
    /// End of the manifold the orbit starts from, `θ = ±1`.
    pub branch: i8,
    /// Integration time; searched with `find_tau` when absent.
    pub tau: Option<f64>,
    pub pieces: usize,
    pub order: usize,
    pub nu: f64,
    #[serde(default)]
    pub zk: ZkMode,
}

/// Every parameter of a run. The defaults reproduce the Müller-Brown chain
/// `Min1 <- Sad1 -> Min2 <- Sad2 -> Min3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: MBParamsDecimal,
    /// A priori radius cap for critical points and eigenpairs.
    pub r_star: f64,
    /// Error budget of `exp`, in ulps.
    pub exp_ulp_budget: u32,
    pub minima: Vec<MinimumConfig>,
    pub saddles: Vec<SaddleConfig>,
    pub trapping: TrappingConfig,
    pub orbits: Vec<OrbitConfig>,
    /// Seed for anything randomized downstream of a run.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let min = |name: &str, guess| MinimumConfig { name: name.into(), guess };
        let sad = |name: &str, guess, gamma, order| SaddleConfig {
            name: name.into(),
            guess,
            gamma,
            order,
            tune_gamma: false,
        };
        let leg = |saddle: &str, target: &str, branch, tau, order, nu| OrbitConfig {
            saddle: saddle.into(),
            target: target.into(),
            branch,
            tau: Some(tau),
            pieces: 10,
            order,
            nu,
            zk: ZkMode::Sharp,
        };
        RunConfig {
            params: MBParamsDecimal::default(),
            r_star: DEFAULT_R_STAR,
            exp_ulp_budget: EXP_ULP_BUDGET,
            minima: vec![
                min("Min1", [-0.558, 1.442]),
                min("Min2", [-0.050, 0.467]),
                min("Min3", [0.623, 0.028]),
            ],
            saddles: vec![
                sad("Sad1", [-0.822, 0.624], 5.0, 20),
                sad("Sad2", [0.212, 0.293], 15.0, 30),
            ],
            trapping: TrappingConfig {
                half_side: 0.01,
                subdivisions: TRAPPING_SUBDIVISIONS,
            },
            orbits: vec![
                leg("Sad1", "Min1", 1, 0.015, 30, 1.4),
                leg("Sad1", "Min2", -1, 0.025, 20, 1.5),
                leg("Sad2", "Min2", 1, 0.018, 20, 1.5),
                leg("Sad2", "Min3", -1, 0.012, 20, 1.7),
            ],
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn potential(&self) -> Result<MBParams> {
        self.params.to_params()
    }

    /// Widen the `exp` budget to its paranoid value.
    pub fn paranoid(mut self) -> Self {
        self.exp_ulp_budget = self.exp_ulp_budget.max(EXP_ULP_BUDGET_PARANOID);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.potential()?;
        if !(self.r_star > 0.0 && self.r_star.is_finite()) {
            return bad(format!("r_star = {} must be positive", self.r_star));
        }
        if self.exp_ulp_budget == 0 {
            return bad("exp_ulp_budget must be at least 1".into());
        }
        let mut names = BTreeSet::new();
        for n in self.minima.iter().map(|m| &m.name).chain(self.saddles.iter().map(|s| &s.name)) {
            if !names.insert(n.as_str()) {
                return bad(format!("duplicate name {n}"));
            }
        }
        for s in &self.saddles {
            if !(s.gamma.is_finite() && s.gamma != 0.0) || s.order < 2 {
                return bad(format!("{}: need finite nonzero gamma and order >= 2", s.name));
            }
        }
        let t = &self.trapping;
        if !(t.half_side > 0.0 && t.half_side.is_finite()) || t.subdivisions == 0 {
            return bad("trapping: half_side and subdivisions must be positive".into());
        }
        for o in &self.orbits {
            let leg = format!("{} -> {}", o.saddle, o.target);
            if !self.saddles.iter().any(|s| s.name == o.saddle) {
                return bad(format!("{leg}: unknown saddle"));
            }
            if !self.minima.iter().any(|m| m.name == o.target) {
                return bad(format!("{leg}: unknown minimum"));
            }
            if o.branch != 1 && o.branch != -1 {
                return bad(format!("{leg}: branch must be 1 or -1"));
            }
            if o.tau.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
                return bad(format!("{leg}: tau must be positive"));
            }
            if o.pieces == 0 || o.order == 0 || !(o.nu > 1.0 && o.nu.is_finite()) {
                return bad(format!("{leg}: need pieces >= 1, order >= 1, nu > 1"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn partial_config_takes_defaults() {
        let c = RunConfig::from_json(r#"{"seed": 7}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.orbits.len(), 4);
    }

    #[test]
    fn rejects_dangling_leg() {
        let mut c = RunConfig::default();
        c.orbits[0].target = "Min9".into();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        assert!(RunConfig::from_json(r#"{"unknown": 1}"#).is_err());
    }
}
