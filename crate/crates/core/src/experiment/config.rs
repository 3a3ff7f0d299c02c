use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::env_models::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::functionals::PathFunctional;
use crate::metrics::ScheduleDescriptor;

fn default_id() -> String {
    "rwre".into()
}
fn default_dkw_delta() -> f64 {
    0.05
}
fn default_target_distance() -> f64 {
    0.1
}
fn default_inner_noise_factor() -> f64 {
    5.0
}
fn default_ks_threshold() -> f64 {
    0.1
}
fn default_matched_threshold() -> f64 {
    0.05
}
fn default_as_threshold() -> f64 {
    0.05
}

/// One experiment, as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_id")]
    pub experiment_id: String,
    pub spec: EnvironmentSpec,
    pub functional: PathFunctional,
    pub n_list: Vec<usize>,
    pub outer: usize,
    pub inner: usize,
    /// Mesh of the Brownian grid used for the limit law.
    pub mesh: usize,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    #[serde(default)]
    pub schedule: ScheduleDescriptor,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    /// Confidence level parameter of the DKW bands.
    #[serde(default = "default_dkw_delta")]
    pub dkw_delta: f64,
    /// Distance scale the inner noise is judged against.
    #[serde(default = "default_target_distance")]
    pub target_distance: f64,
    /// Inner noise is flagged when `factor · max_inner_stderr > target_distance`.
    #[serde(default = "default_inner_noise_factor")]
    pub inner_noise_factor: f64,
    /// Bound on KS at the largest `n` for the convergence run.
    #[serde(default = "default_ks_threshold")]
    pub ks_threshold: f64,
    #[serde(default = "default_matched_threshold")]
    pub matched_threshold: f64,
    #[serde(default = "default_as_threshold")]
    pub as_threshold: f64,
    /// Replicas for the direct `E f(B)` estimate; defaults to `outer · inner`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_replicas: Option<usize>,
    /// When set, the convergence run also requires the fitted log-log slope
    /// to be at most this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_max: Option<f64>,
}

fn config_err(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Config {
        field,
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment_id.is_empty() {
            return Err(config_err("experiment_id", "must be nonempty"));
        }
        if self.n_list.is_empty() {
            return Err(config_err("n_list", "must be nonempty"));
        }
        if self.n_list[0] < 2 {
            return Err(config_err("n_list", "entries must be at least 2"));
        }
        if let Some(w) = self.n_list.windows(2).find(|w| w[0] >= w[1]) {
            return Err(config_err(
                "n_list",
                format!("must be strictly increasing ({} then {})", w[0], w[1]),
            ));
        }
        if self.outer < 2 {
            return Err(config_err("outer", "must be at least 2"));
        }
        if self.inner < 2 {
            return Err(config_err("inner", "must be at least 2"));
        }
        if self.mesh < 1 {
            return Err(config_err("mesh", "must be at least 1"));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(config_err("alpha", "must be finite and exceed 2"));
        }
        for (field, v) in [
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("beta3", self.beta3),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_err(field, "must be positive and finite"));
            }
        }
        if !(self.dkw_delta > 0.0 && self.dkw_delta < 1.0) {
            return Err(config_err("dkw_delta", "must lie in (0, 1)"));
        }
        for (field, v) in [
            ("target_distance", self.target_distance),
            ("inner_noise_factor", self.inner_noise_factor),
            ("ks_threshold", self.ks_threshold),
            ("matched_threshold", self.matched_threshold),
            ("as_threshold", self.as_threshold),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_err(field, "must be positive and finite"));
            }
        }
        if self.reference_replicas.is_some_and(|r| r < 2) {
            return Err(config_err("reference_replicas", "must be at least 2"));
        }
        if self.slope_max.is_some_and(|s| !s.is_finite()) {
            return Err(config_err("slope_max", "must be finite"));
        }
        Ok(())
    }

    pub fn reference_replicas(&self) -> usize {
        self.reference_replicas.unwrap_or(self.outer * self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE: &str = r#"{
        "spec": {"family": "bio_normal", "params": {"sigma1": 1.0, "sigma2": 1.0}},
        "functional": {"kind": "clipped_endpoint", "L": 2.0},
        "n_list": [64, 256, 1024, 4096],
        "outer": 2000,
        "inner": 4000,
        "mesh": 1024,
        "alpha": 3.0, "beta1": 6.0, "beta2": 3.0, "beta3": 3.0,
        "master_seed": 20240101,
        "output_dir": "out"
    }"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::from_json_str(EXAMPLE).unwrap();
        assert_eq!(cfg.experiment_id, "rwre");
        assert_eq!(cfg.schedule, ScheduleDescriptor::Standard);
        assert_eq!(cfg.dkw_delta, 0.05);
        assert_eq!(cfg.reference_replicas(), 8_000_000);
    }

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig::from_json_str(EXAMPLE).unwrap();
        let back = ExperimentConfig::from_json_str(&cfg.to_json_string()).unwrap();
        assert_eq!(back, cfg);
    }

    fn field_of(json: &str) -> &'static str {
        match ExperimentConfig::from_json_str(json) {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn validation_names_the_field() {
        assert_eq!(
            field_of(&EXAMPLE.replace("[64, 256, 1024, 4096]", "[64, 64]")),
            "n_list"
        );
        assert_eq!(
            field_of(&EXAMPLE.replace("\"outer\": 2000", "\"outer\": 1")),
            "outer"
        );
        assert_eq!(
            field_of(&EXAMPLE.replace("\"inner\": 4000", "\"inner\": 0")),
            "inner"
        );
        assert_eq!(
            field_of(&EXAMPLE.replace("\"alpha\": 3.0", "\"alpha\": 2.0")),
            "alpha"
        );
    }

    #[test]
    fn rejects_unknown_fields() {
        let bad = EXAMPLE.replace("\"mesh\"", "\"mesh_size\": 3, \"mesh\"");
        assert!(matches!(
            ExperimentConfig::from_json_str(&bad),
            Err(Error::Json(_))
        ));
    }
}
