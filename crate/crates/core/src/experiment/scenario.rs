//! One scenario end to end: initialize, run, verify, write artifacts.

use std::path::Path;

use super::artifacts::{read_json, read_snapshot_csv, snapshot_name, write_json, write_snapshot_csv};
use super::{ExperimentError, ResolvedConstants, RunManifest, ScenarioConfig, SnapshotEntry};
use crate::coeff::BoundsContext;
use crate::solver::{initialize, run, EventKind, FlowState, RunSeries};
use crate::verify::{initial_ceiling, verify_series, BoundReport, CheckResult, CheckStatus};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const VERDICT_FILE: &str = "verdict.json";
pub const CONFIG_FILE: &str = "config.json";

/// Result of one scenario.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub name: String,
    pub hash: String,
    pub series: RunSeries,
    pub report: BoundReport,
    pub constants: ResolvedConstants,
}

impl ScenarioOutcome {
    /// 0 when every applicable check passes, 3 on a numerical abort, 1 on
    /// any other failure.
    pub fn exit_code(&self) -> i32 {
        exit_code_of(&self.series, &self.report)
    }
}

fn exit_code_of(series: &RunSeries, report: &BoundReport) -> i32 {
    let aborted = series
        .terminal_event()
        .is_some_and(|e| matches!(e.kind, EventKind::Vacuum { .. } | EventKind::StepFailure { .. }));
    if aborted {
        3
    } else if report.passed() {
        0
    } else {
        1
    }
}

/// Whether the run ended the way the config says it must.
fn expectation_check(cfg: &ScenarioConfig, series: &RunSeries) -> CheckResult {
    let event = series.blowup_time();
    let (status, detail) = match (cfg.expect_blowup, event) {
        (None, _) => (CheckStatus::NotApplicable, "no expectation set".to_string()),
        (Some(true), Some(t)) => (CheckStatus::Pass, format!("blow-up event at t = {t}")),
        (Some(false), None) => (CheckStatus::Pass, format!("no event by t = {}", series.end_time())),
        (Some(true), None) => (CheckStatus::Fail, format!("expected blow-up, none by t = {}", series.end_time())),
        (Some(false), Some(t)) => (CheckStatus::Fail, format!("unexpected blow-up event at t = {t}")),
    };
    CheckResult {
        name: "expected_outcome".into(),
        status,
        worst_margin: None,
        location: event.map(|t| (series.initial.x0, t)),
        margins: Vec::new(),
        detail,
    }
}

fn verify(cfg: &ScenarioConfig, series: &RunSeries) -> Result<(BoundReport, ResolvedConstants), ExperimentError> {
    let paths = if cfg.solver.residuals { 1 } else { 0 };
    let mut report = verify_series(&cfg.name, series, cfg.t0_budget, paths)?;
    report.checks.push(expectation_check(cfg, series));
    let ctx = BoundsContext::new(&series.params, initial_ceiling(series)?)?;
    let constants = ResolvedConstants::compute(&ctx, cfg.t0_budget)?;
    Ok((report, constants))
}

/// Resolves `C0` against the sampled data. A configured `C0` below the
/// achieved bound would void every analytic constant, so it is rejected.
pub fn resolve_params(cfg: &ScenarioConfig) -> Result<crate::GasParams, ExperimentError> {
    let probe = cfg.params.resolve(1.0);
    let (_, rep) = initialize(&cfg.profile, &probe, &cfg.grid)?;
    if let Some(c0) = cfg.params.c0 {
        if c0 < rep.achieved_c0 {
            return Err(ExperimentError::Invalid(vec![format!(
                "params.C0 = {c0} is below the bound {} achieved by the initial data",
                rep.achieved_c0
            )]));
        }
    }
    Ok(cfg.params.resolve(rep.achieved_c0))
}

/// Runs and verifies a scenario, writing artifacts to `out` when given.
pub fn run_scenario(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<ScenarioOutcome, ExperimentError> {
    cfg.validate()?;
    let params = resolve_params(cfg)?;
    let series = run(&params, &cfg.grid, &cfg.profile, &cfg.run_options())?;
    let (report, constants) = verify(cfg, &series)?;
    let outcome = ScenarioOutcome { name: cfg.name.clone(), hash: cfg.hash(), series, report, constants };
    if let Some(dir) = out {
        write_run(dir, cfg, &outcome)?;
    }
    Ok(outcome)
}

fn write_run(dir: &Path, cfg: &ScenarioConfig, o: &ScenarioOutcome) -> Result<(), ExperimentError> {
    let snap_dir = dir.join("snapshots");
    std::fs::create_dir_all(&snap_dir).map_err(|e| ExperimentError::io(&snap_dir, e))?;
    let s = &o.series;
    let mut entries = Vec::with_capacity(s.snapshots.len());
    for (k, snap) in s.snapshots.iter().enumerate() {
        let rel = snapshot_name(k);
        write_snapshot_csv(&dir.join(&rel), snap, &s.params, &s.grid)?;
        entries.push(SnapshotEntry { t: snap.t, path: rel });
    }
    let manifest = RunManifest {
        scenario_hash: o.hash.clone(),
        name: o.name.clone(),
        config: cfg.clone(),
        params: s.params,
        grid: s.grid,
        cadence: s.cadence,
        constants: o.constants.clone(),
        initial: s.initial,
        snapshots: entries,
        events: s.events.clone(),
        proxy_history: s.proxy_history.clone(),
        verdict: VERDICT_FILE.into(),
    };
    std::fs::write(dir.join(CONFIG_FILE), cfg.canonical_json() + "\n")
        .map_err(|e| ExperimentError::io(&dir.join(CONFIG_FILE), e))?;
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    write_json(&dir.join(VERDICT_FILE), &o.report)
}

/// Rebuilds a run from its directory.
pub fn load_run(dir: &Path) -> Result<(RunManifest, RunSeries), ExperimentError> {
    let manifest: RunManifest = read_json(&dir.join(MANIFEST_FILE))?;
    let mut snapshots = Vec::with_capacity(manifest.snapshots.len());
    for e in &manifest.snapshots {
        let (tau, u) = read_snapshot_csv(&dir.join(&e.path))?;
        if tau.len() != manifest.grid.n_cells {
            return Err(ExperimentError::Artifact {
                path: e.path.clone(),
                message: format!("{} rows for {} cells", tau.len(), manifest.grid.n_cells),
            });
        }
        snapshots.push(FlowState::new(e.t, tau, u)?);
    }
    if snapshots.is_empty() {
        return Err(ExperimentError::Artifact { path: MANIFEST_FILE.into(), message: "no snapshots".into() });
    }
    let series = RunSeries {
        params: manifest.params,
        grid: manifest.grid,
        cadence: manifest.cadence,
        snapshots,
        events: manifest.events.clone(),
        initial: manifest.initial,
        proxy_history: manifest.proxy_history.clone(),
    };
    Ok((manifest, series))
}

/// Re-verifies a run directory, rewrites its verdict and returns the report
/// with the exit status.
pub fn verify_run_dir(dir: &Path) -> Result<(BoundReport, i32), ExperimentError> {
    let (manifest, series) = load_run(dir)?;
    let (report, _) = verify(&manifest.config, &series)?;
    write_json(&dir.join(&manifest.verdict), &report)?;
    let code = exit_code_of(&series, &report);
    Ok((report, code))
}
