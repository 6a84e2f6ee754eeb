//! Experiment configuration: one JSON document per run, with command-line
//! overrides for the seed, path count, worker count and output directory.

use std::path::{Path, PathBuf};

use mfrisk_core::mfpp::PnMethod;
use mfrisk_core::risk::{ClaimModel, RiskConfig};
use mfrisk_core::MixedParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::RunError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub n_paths: usize,
    /// Real-time grid step `h`.
    pub grid_step: f64,
    /// Operational-time step `h_op` of the subordinator.
    pub operational_step: f64,
    pub horizon: f64,
    pub master_seed: u64,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MomentsConfig {
    pub times: Vec<f64>,
}

impl Default for MomentsConfig {
    fn default() -> Self {
        Self { times: vec![0.5, 1.0, 2.0, 5.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DistributionConfig {
    pub t: f64,
    pub n_max: usize,
    /// `n` up to which both state-probability methods are reported.
    pub n_cross: usize,
    pub method: PnMethod,
    pub density_times: Vec<f64>,
    pub pgf_points: Vec<f64>,
}

impl Default for DistributionConfig {
    fn default() -> Self {
        Self {
            t: 1.0,
            n_max: 40,
            n_cross: 5,
            method: PnMethod::Laplace,
            density_times: vec![0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0],
            pgf_points: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RuinConfig {
    /// Step of the ruin-density quadrature (exponential claims only).
    pub density_step: f64,
    pub density_terms: usize,
}

impl Default for RuinConfig {
    fn default() -> Self {
        Self { density_step: 2e-3, density_terms: 400 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DependenceConfig {
    pub s: f64,
    pub delta: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for DependenceConfig {
    fn default() -> Self {
        Self { s: 1.0, delta: 1.0, t_min: 1e2, t_max: 1e4, points: 41 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: MixedParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk: Option<RiskConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claims: Option<ClaimModel>,
    pub sim: SimConfig,
    #[serde(default)]
    pub moments: MomentsConfig,
    #[serde(default)]
    pub distribution: DistributionConfig,
    #[serde(default)]
    pub ruin: RuinConfig,
    #[serde(default)]
    pub dependence: DependenceConfig,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Command-line values that replace config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n_paths: Option<usize>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), RunError> {
        if let Some(s) = o.seed {
            self.sim.master_seed = s;
        }
        if let Some(n) = o.n_paths {
            self.sim.n_paths = n;
        }
        if let Some(w) = o.workers {
            self.sim.workers = w;
        }
        if let Some(d) = &o.out_dir {
            self.out_dir = d.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let s = &self.sim;
        let bad = |m: String| Err(RunError::Config(m));
        if s.n_paths < 1 {
            return bad("sim.n_paths must be at least 1".into());
        }
        for (name, v) in [("sim.grid_step", s.grid_step), ("sim.operational_step", s.operational_step), ("sim.horizon", s.horizon)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if s.grid_step > s.horizon {
            return bad(format!("sim.grid_step {} exceeds sim.horizon {}", s.grid_step, s.horizon));
        }
        if self.moments.times.iter().any(|&t| !(t.is_finite() && t > 0.0)) {
            return bad("moments.times must be positive".into());
        }
        let d = &self.distribution;
        if !(d.t.is_finite() && d.t > 0.0) || d.density_times.iter().chain(&d.pgf_points).any(|v| !v.is_finite()) {
            return bad("distribution.t must be positive and all points finite".into());
        }
        if !(self.ruin.density_step > 0.0 && self.ruin.density_terms > 0) {
            return bad("ruin.density_step and ruin.density_terms must be positive".into());
        }
        let dep = &self.dependence;
        if !(dep.s > 0.0 && dep.delta > 0.0 && dep.t_min > dep.s && dep.t_max > dep.t_min && dep.points >= 2) {
            return bad("dependence needs 0 < s < t_min < t_max, delta > 0 and at least 2 points".into());
        }
        Ok(())
    }

    /// SHA-256 of the configuration with the worker count and output
    /// directory cleared, so that neither changes the emitted files.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.sim.workers = 0;
        c.out_dir = PathBuf::new();
        let json = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn risk(&self) -> Result<RiskConfig, RunError> {
        self.risk.ok_or_else(|| RunError::Config("this command needs a `risk` section".into()))
    }

    pub fn claims(&self) -> Result<&ClaimModel, RunError> {
        self.claims.as_ref().ok_or_else(|| RunError::Config("this command needs a `claims` section".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MINIMAL: &str = r#"{
        "params": {"alpha1": 0.9, "alpha2": 0.5, "c1": 0.5, "c2": 0.5, "lambda": 1.0},
        "sim": {"n_paths": 10, "grid_step": 0.1, "operational_step": 0.001, "horizon": 1.0, "master_seed": 7}
    }"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.sim.workers, 0);
        assert_eq!(c.distribution, DistributionConfig::default());
        assert_eq!(c.out_dir, PathBuf::from("out"));
        assert!(c.risk().is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::from_json("{}").is_err());
        let unknown = MINIMAL.replacen("\"sim\"", "\"extra\": 1, \"sim\"", 1);
        assert!(ExperimentConfig::from_json(&unknown).is_err());
        let zero = MINIMAL.replace("\"n_paths\": 10", "\"n_paths\": 0");
        assert!(matches!(ExperimentConfig::from_json(&zero), Err(RunError::Config(_))));
        let alpha = MINIMAL.replace("\"alpha1\": 0.9", "\"alpha1\": 1.2");
        assert!(ExperimentConfig::from_json(&alpha).is_err());
    }

    #[test]
    fn hash_ignores_workers_and_out_dir() {
        let a = ExperimentConfig::from_json(MINIMAL).unwrap();
        let mut b = a.clone();
        b.apply(&Overrides { workers: Some(8), out_dir: Some("elsewhere".into()), ..Default::default() })
            .unwrap();
        assert_eq!(a.hash(), b.hash());
        b.apply(&Overrides { seed: Some(8), ..Default::default() }).unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
