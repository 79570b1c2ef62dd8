//! Scenario configs, run artifacts, built-in suites and orchestration.
//!
//! A run directory holds `config.json`, one CSV per snapshot under
//! `snapshots/`, `manifest.json` (hash, resolved constants, events) and
//! `verdict.json` (the verifier report). Every float is written in shortest
//! round-trip form, so reloading a run reproduces the in-memory state bit for
//! bit.

pub mod artifacts;
pub mod config;
pub mod design;
pub mod envelope;
pub mod inspect;
pub mod scenario;
pub mod suites;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{BlowupBranch, BoundsContext, TailIntegral};
use crate::error::Error;
use crate::gas::{GammaRegime, GasParams};

pub use artifacts::{read_snapshot_csv, write_snapshot_csv, RunManifest, SnapshotEntry};
pub use config::{parse_config, ParamsConfig, ScenarioConfig, SolverConfig};
pub use design::{design_pulse_slope, evaluate_pulse, PulseDesign};
pub use envelope::{envelope_run, EnvelopeRun};
pub use inspect::{bounds_document, riccati_document, BoundsDocument, MarkedPoint, RiccatiDocument};
pub use scenario::{run_scenario, verify_run_dir, ScenarioOutcome};
pub use suites::{run_suite, suite, SuiteSummary, SUITE_NAMES};

/// Environment variable overriding the suite worker count.
pub const WORKERS_ENV: &str = "DAMPED_EULER_WORKERS";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid config: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("unknown suite {0:?} (expected one of {list})", list = SUITE_NAMES.join(", "))]
    UnknownSuite(String),

    #[error("malformed artifact {path}: {message}")]
    Artifact { path: String, message: String },

    #[error(transparent)]
    Numerical(#[from] Error),
}

impl ExperimentError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), message: e.to_string() }
    }

    /// Process exit status: 2 for configuration and input problems, 3 for
    /// numerical aborts.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(Error::InvalidParams(_) | Error::UnsupportedRegime(_) | Error::Domain { .. }) => 2,
            Self::Numerical(_) => 3,
            _ => 2,
        }
    }
}

/// Every analytic constant of a scenario, with `null` where a constant does
/// not apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConstants {
    pub params: GasParams,
    pub regime: GammaRegime,
    #[serde(rename = "C_tilde0")]
    pub c_tilde0: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// Density-floor constant, `1 < gamma < 3`.
    #[serde(rename = "C")]
    pub floor_constant: Option<f64>,
    #[serde(rename = "M_hat")]
    pub m_hat: Option<f64>,
    pub lambda_crit: Option<f64>,
    pub branch: Option<BlowupBranch>,
    pub t0: Option<f64>,
    #[serde(rename = "K3")]
    pub k3: Option<f64>,
    #[serde(rename = "K4")]
    pub k4: Option<f64>,
    /// Blow-up level for `1 < gamma < 3`.
    #[serde(rename = "N1")]
    pub n1: Option<f64>,
    /// Blow-up level for `gamma > 3`, `lambda > 1`.
    #[serde(rename = "N2")]
    pub n2: Option<f64>,
    /// Blow-up level for `gamma > 3`, `lambda < 1`.
    #[serde(rename = "N3")]
    pub n3: Option<f64>,
    /// `int a2_lower` from the start time to infinity.
    pub tail_integral: Option<TailIntegral>,
    pub sup_a0: Option<f64>,
    pub inf_a2: Option<f64>,
    #[serde(rename = "M_bar")]
    pub m_bar: Option<f64>,
    #[serde(rename = "M_tilde")]
    pub m_tilde: Option<f64>,
    /// Level `y(0)` must fall below, whatever the branch.
    pub level: Option<f64>,
    /// Why the threshold constants are missing, when they are.
    pub note: Option<String>,
}

impl ResolvedConstants {
    pub fn compute(ctx: &BoundsContext, t0_budget: Option<f64>) -> Result<Self, Error> {
        let p = ctx.params;
        let mut out = Self {
            params: p,
            regime: p.regime(),
            c_tilde0: ctx.c_tilde0(),
            m: ctx.m,
            floor_constant: None,
            m_hat: None,
            lambda_crit: p.lambda_crit(),
            branch: None,
            t0: None,
            k3: None,
            k4: None,
            n1: None,
            n2: None,
            n3: None,
            tail_integral: None,
            sup_a0: None,
            inf_a2: None,
            m_bar: None,
            m_tilde: None,
            level: None,
            note: None,
        };
        match p.regime() {
            GammaRegime::GammaBelow3 => out.floor_constant = Some(ctx.floor_constant()?),
            GammaRegime::GammaEq3 => out.m_hat = Some(ctx.m_hat()?),
            GammaRegime::GammaAbove3 => {}
        }
        let consts = match ctx.threshold_constants(t0_budget) {
            Ok(c) => c,
            Err(e @ (Error::UnsupportedRegime(_) | Error::InvalidParams(_))) => {
                out.note = Some(e.to_string());
                if !p.is_gamma3() && p.lambda != 1.0 {
                    out.t0 = ctx.sign_change_time()?;
                }
                return Ok(out);
            }
            Err(e) => return Err(e),
        };
        out.branch = Some(consts.branch);
        out.t0 = consts.t0;
        out.level = Some(consts.level);
        out.tail_integral = consts.tail;
        out.sup_a0 = consts.sup_a0;
        out.inf_a2 = consts.inf_a2;
        out.m_bar = consts.m_bar;
        out.m_tilde = consts.m_tilde;
        if consts.branch != BlowupBranch::GammaThree {
            out.k3 = Some(consts.k3);
            out.k4 = Some(consts.k4);
        }
        match consts.branch {
            BlowupBranch::LowGammaNonPositive | BlowupBranch::LowGammaSignChange => out.n1 = Some(consts.level),
            BlowupBranch::HighGammaLongTime => out.n2 = Some(consts.level),
            BlowupBranch::HighGammaNonPositive | BlowupBranch::HighGammaSignChange => out.n3 = Some(consts.level),
            BlowupBranch::GammaThree => {}
        }
        Ok(out)
    }
}
