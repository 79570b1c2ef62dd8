//! Scenario configuration: parsing, defaults, validation and content hashing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ExperimentError;
use crate::gas::GasParams;
use crate::solver::{Grid1D, Profile, RunOptions, CFL_LIMIT};

/// Gas parameters as written in a config; `C0` defaults to the bound achieved
/// by the sampled initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub gamma: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub alpha: f64,
    pub lambda: f64,
    #[serde(rename = "C0", default)]
    pub c0: Option<f64>,
}

impl ParamsConfig {
    /// Parameters with `C0` replaced by `c0` when none was given.
    pub fn resolve(&self, achieved_c0: f64) -> GasParams {
        GasParams { gamma: self.gamma, k: self.k, alpha: self.alpha, lambda: self.lambda, c0: self.c0.unwrap_or(achieved_c0) }
    }
}

fn default_cfl() -> f64 {
    CFL_LIMIT
}

fn default_proxy_factor() -> f64 {
    50.0
}

fn default_refine_ratio() -> f64 {
    2.0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_proxy_factor")]
    pub proxy_factor: f64,
    #[serde(default = "default_refine_ratio")]
    pub refine_ratio: f64,
    #[serde(default = "default_true")]
    pub confirm_refined: bool,
    #[serde(default)]
    pub check_interval: Option<f64>,
    /// Trace both characteristics through the marked point and report
    /// Riccati residuals.
    #[serde(default = "default_true")]
    pub residuals: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: default_cfl(),
            proxy_factor: default_proxy_factor(),
            refine_ratio: default_refine_ratio(),
            confirm_refined: true,
            check_interval: None,
            residuals: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub params: ParamsConfig,
    pub grid: Grid1D,
    pub profile: Profile,
    pub horizon: f64,
    pub snapshot_cadence: f64,
    #[serde(default)]
    pub seed: u64,
    /// Time budget `t0` for `gamma = 3` thresholds.
    #[serde(default)]
    pub t0_budget: Option<f64>,
    #[serde(default)]
    pub solver: SolverConfig,
    /// When set, the run must (or must not) end in a gradient blow-up event.
    #[serde(default)]
    pub expect_blowup: Option<bool>,
}

impl ScenarioConfig {
    /// Every violated constraint, one message each.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let p = self.params.resolve(1.0);
        push_all(&mut v, "params", p.validate());
        push_all(&mut v, "grid", self.grid.validate());
        push_all(&mut v, "profile", self.profile.validate(&self.grid));
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            v.push(format!("horizon must be > 0 (got {})", self.horizon));
        }
        if !(self.snapshot_cadence > 0.0 && self.snapshot_cadence.is_finite()) {
            v.push(format!("snapshot_cadence must be > 0 (got {})", self.snapshot_cadence));
        }
        if let Some(t0) = self.t0_budget {
            if !(t0 > 0.0 && t0.is_finite()) {
                v.push(format!("t0_budget must be > 0 (got {t0})"));
            }
        }
        let s = &self.solver;
        if !(s.cfl > 0.0 && s.cfl <= CFL_LIMIT) {
            v.push(format!("solver.cfl must lie in (0, {CFL_LIMIT}] (got {})", s.cfl));
        }
        if !(s.proxy_factor > 1.0) {
            v.push(format!("solver.proxy_factor must be > 1 (got {})", s.proxy_factor));
        }
        if !(s.refine_ratio > 1.0) {
            v.push(format!("solver.refine_ratio must be > 1 (got {})", s.refine_ratio));
        }
        if let Some(c) = s.check_interval {
            if !(c > 0.0) {
                v.push(format!("solver.check_interval must be > 0 (got {c})"));
            }
        }
        v
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ExperimentError::Invalid(v))
        }
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            horizon: self.horizon,
            cadence: self.snapshot_cadence,
            cfl: self.solver.cfl,
            proxy_factor: self.solver.proxy_factor,
            refine_ratio: self.solver.refine_ratio,
            confirm_refined: self.solver.confirm_refined,
            check_interval: self.solver.check_interval,
            check_apriori: true,
        }
    }

    /// Canonical JSON: defaults filled in, object keys sorted.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&sort_keys(value)).expect("value serializes")
    }

    /// Hex SHA-256 of [`ScenarioConfig::canonical_json`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ExperimentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn push_all(v: &mut Vec<String>, section: &str, r: crate::Result<()>) {
    match r {
        Ok(()) => {}
        Err(crate::Error::InvalidParams(m)) => v.extend(m.split("; ").map(|part| format!("{section}: {part}"))),
        Err(e) => v.push(format!("{section}: {e}")),
    }
}

fn sort_keys(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Reads, parses and validates a config file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig, ExperimentError> {
    let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    ScenarioConfig::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "params": {"gamma": 2.0, "K": 0.125, "alpha": 0.5, "lambda": 0.5},
        "grid": {"x_min": 0.0, "x_max": 1.0, "n_cells": 64, "boundary": "periodic"},
        "profile": {"kind": "constant", "tau": 1.0, "u": 0.0},
        "horizon": 1.0,
        "snapshot_cadence": 0.1
    }"#;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = ScenarioConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.seed, 0);
        assert_eq!(c.params.c0, None);
        assert_eq!(c.solver, SolverConfig::default());
        assert_eq!(c.t0_budget, None);
    }

    #[test]
    fn key_order_does_not_change_hash() {
        let reordered = r#"{
            "snapshot_cadence": 0.1,
            "horizon": 1.0,
            "profile": {"u": 0.0, "tau": 1.0, "kind": "constant"},
            "grid": {"boundary": "periodic", "n_cells": 64, "x_max": 1.0, "x_min": 0.0},
            "params": {"lambda": 0.5, "alpha": 0.5, "K": 0.125, "gamma": 2.0}
        }"#;
        let a = ScenarioConfig::from_json(MINIMAL).unwrap();
        let b = ScenarioConfig::from_json(reordered).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let mut c = a.clone();
        c.horizon = 2.0;
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn negative_mean_volume_named() {
        let bad = MINIMAL.replace(
            r#"{"kind": "constant", "tau": 1.0, "u": 0.0}"#,
            r#"{"kind": "sine", "tau_mean": -1.0, "u_amp": 0.1, "wavenumber": 6.283185307179586}"#,
        );
        let Err(ExperimentError::Invalid(v)) = ScenarioConfig::from_json(&bad) else { panic!() };
        assert!(v.iter().any(|m| m.contains("tau_mean")), "{v:?}");
    }

    #[test]
    fn every_violation_listed() {
        let bad = MINIMAL.replace("\"horizon\": 1.0", "\"horizon\": 0.0").replace("\"n_cells\": 64", "\"n_cells\": 4");
        let Err(ExperimentError::Invalid(v)) = ScenarioConfig::from_json(&bad) else { panic!() };
        assert_eq!(v.len(), 2, "{v:?}");
    }

    #[test]
    fn unknown_key_rejected_with_position() {
        let bad = MINIMAL.replace("\"horizon\"", "\"horizn\"");
        match ScenarioConfig::from_json(&bad) {
            Err(ExperimentError::Parse { line, message, .. }) => {
                assert!(line > 1);
                assert!(message.contains("horizn"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }
}
