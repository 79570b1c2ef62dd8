//! Confronts solver output with the analytic bounds: a-priori ceilings,
//! density floors, control-function ceilings, Riccati residuals along
//! characteristics and blow-up times.

use serde::{Deserialize, Serialize};

use crate::coeff::{ceiling_m, BoundsContext, CoefficientSet, ControlFunctions, ThresholdConstants, M_FLOOR};
use crate::error::{Error, Result};
use crate::gas::{GammaRegime, GasParams};
use crate::riccati::{branch_blowup_bound, BlowupBound};
use crate::solver::characteristic::CharacteristicPath;
use crate::solver::state::cell_gradient;
use crate::solver::{FlowState, Grid1D, RunSeries};

/// Slack on the blow-up time comparison, absorbing event-detection lag.
pub const BLOWUP_TIME_SLACK: f64 = 1.2;
/// Largest admissible relative drift of `int tau dx` on periodic grids.
pub const MASS_DRIFT_TOL: f64 = 1e-10;
/// Minimum path samples per snapshot interval for residual checks.
pub const MIN_SAMPLES_PER_INTERVAL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// Worst margin of one quantity and where it occurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub quantity: String,
    pub worst_margin: f64,
    pub x: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub worst_margin: Option<f64>,
    /// `(x, t)` of the worst margin.
    pub location: Option<(f64, f64)>,
    pub margins: Vec<Margin>,
    pub detail: String,
}

impl CheckResult {
    fn not_applicable(name: &str, detail: String) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::NotApplicable,
            worst_margin: None,
            location: None,
            margins: Vec::new(),
            detail,
        }
    }

    /// Pass iff every margin is non-negative.
    fn from_margins(name: &str, margins: Vec<Margin>, detail: String) -> Self {
        let worst = margins
            .iter()
            .min_by(|a, b| a.worst_margin.total_cmp(&b.worst_margin))
            .cloned();
        let status = match &worst {
            Some(m) if m.worst_margin >= 0.0 => CheckStatus::Pass,
            Some(_) => CheckStatus::Fail,
            None => CheckStatus::NotApplicable,
        };
        Self {
            name: name.into(),
            status,
            worst_margin: worst.as_ref().map(|m| m.worst_margin),
            location: worst.as_ref().map(|m| (m.x, m.t)),
            margins,
            detail,
        }
    }

    pub fn margin_of(&self, quantity: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.quantity == quantity).map(|m| m.worst_margin)
    }
}

/// Running minimum of `bound - value` over cells and snapshots.
struct Tracker {
    m: Margin,
}

impl Tracker {
    fn new(quantity: &str) -> Self {
        Self { m: Margin { quantity: quantity.into(), worst_margin: f64::INFINITY, x: f64::NAN, t: f64::NAN } }
    }

    fn see(&mut self, margin: f64, x: f64, t: f64) {
        // a NaN margin counts as a violation
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if margin < self.m.worst_margin {
            self.m = Margin { worst_margin: margin, x, t, ..self.m.clone() };
        }
    }
}

/// Snapshots of the classical phase: strictly before the blow-up event
/// time minus one snapshot interval.
pub fn classical_snapshots(series: &RunSeries) -> Vec<&FlowState> {
    let cut = series.blowup_time().map(|t| t - series.cadence);
    series
        .snapshots
        .iter()
        .filter(|s| cut.is_none_or(|c| s.t < c))
        .collect()
}

/// `|u| <= C~0` and `tau >= 1/C~0` at every cell and classical snapshot.
pub fn check_apriori(series: &RunSeries, snaps: &[&FlowState]) -> CheckResult {
    let ct = series.params.c_tilde0();
    let xs = series.grid.centers();
    let mut vel = Tracker::new("velocity");
    let mut vol = Tracker::new("specific_volume");
    for s in snaps {
        for (i, x) in xs.iter().enumerate() {
            vel.see(ct - s.u[i].abs(), *x, s.t);
            vol.see(s.tau[i] - 1.0 / ct, *x, s.t);
        }
    }
    CheckResult::from_margins("check_apriori", vec![vel.m, vol.m], format!("C~0 = {ct}"))
}

/// `rho >= density_floor(t)` at every cell and classical snapshot.
pub fn check_density_floor(series: &RunSeries, ctx: &BoundsContext, snaps: &[&FlowState]) -> CheckResult {
    let name = "check_density_floor";
    if series.params.regime() == GammaRegime::GammaAbove3 {
        let min_rho = snaps
            .iter()
            .flat_map(|s| s.tau.iter().map(|t| 1.0 / t))
            .fold(f64::INFINITY, f64::min);
        return CheckResult::not_applicable(
            name,
            format!("no density floor for gamma > 3; observed min density {min_rho}"),
        );
    }
    let xs = series.grid.centers();
    let mut tr = Tracker::new("density");
    let mut rel = Tracker::new("density_relative");
    for s in snaps {
        let floor = match ctx.density_floor(s.t) {
            Ok(f) => f,
            Err(e) => return CheckResult::not_applicable(name, e.to_string()),
        };
        for (i, x) in xs.iter().enumerate() {
            let rho = 1.0 / s.tau[i];
            tr.see(rho - floor, *x, s.t);
            rel.see(rho / floor - 1.0, *x, s.t);
        }
    }
    CheckResult::from_margins(name, vec![tr.m, rel.m], format!("M = {}", ctx.m))
}

/// `G, H <= M` (`lambda >= 0`) or `G^, H^ <= exp(-lambda (1+t)^{1-lambda}/(1-lambda)) M`.
pub fn check_gh_ceiling(series: &RunSeries, ctx: &BoundsContext, snaps: &[&FlowState]) -> CheckResult {
    let name = "check_GH_ceiling";
    let ctrl = match ControlFunctions::new(&series.params) {
        Ok(c) => c,
        Err(e) => return CheckResult::not_applicable(name, e.to_string()),
    };
    let p = &series.params;
    let xs = series.grid.centers();
    let mut g = Tracker::new("G");
    let mut h = Tracker::new("H");
    for s in snaps {
        let (w, z) = s.riemann(p);
        let a = cell_gradient(&series.grid, &w);
        let b = cell_gradient(&series.grid, &z);
        let ceil = ctrl.ceiling(s.t, ctx.m);
        for (i, x) in xs.iter().enumerate() {
            g.see(ceil - ctrl.evaluate(s.t, s.tau[i], a[i]), *x, s.t);
            h.see(ceil - ctrl.evaluate(s.t, s.tau[i], b[i]), *x, s.t);
        }
    }
    CheckResult::from_margins(name, vec![g.m, h.m], format!("M = {}", ctx.m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub rms: f64,
    pub max: f64,
    pub samples: usize,
}

/// Residual of `dy/dt = a0 - a1 y - a2 y^2` along a path, with `y` rebuilt
/// from the sampled gradient by `coeffs` and `dy/dt` from fourth-order
/// central differences. `cadence` is the snapshot interval of the series.
pub fn riccati_residual(path: &CharacteristicPath, coeffs: &CoefficientSet, cadence: f64) -> Result<ResidualStats> {
    let per_interval = (cadence / path.dt).round() as usize;
    if per_interval < MIN_SAMPLES_PER_INTERVAL {
        return Err(Error::InsufficientSamples { need: MIN_SAMPLES_PER_INTERVAL, got: per_interval });
    }
    let s = &path.samples;
    if s.len() < 5 {
        return Err(Error::InsufficientSamples { need: 5, got: s.len() });
    }
    let y: Vec<f64> = s.iter().map(|p| coeffs.gradient_variable(p.t, p.phi, p.grad)).collect();
    let h = path.dt;
    let mut sum = 0.0;
    let mut max = 0.0f64;
    let mut n = 0;
    for i in 2..s.len() - 2 {
        let dy = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
        let r = dy - coeffs.rhs(s[i].t, s[i].phi, y[i]);
        sum += r * r;
        max = max.max(r.abs());
        n += 1;
    }
    Ok(ResidualStats { rms: (sum / n as f64).sqrt(), max, samples: n })
}

/// Whether the threshold held at `t = 0` and how the run compares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupComparison {
    pub threshold_crossed: bool,
    /// The more negative of `y(x0, 0)` and `q(x0, 0)`.
    pub y0: f64,
    pub level: f64,
    pub slope: f64,
    pub slope_threshold: f64,
    pub event_time: Option<f64>,
    pub bound: Option<BlowupBound>,
    pub evaluated: bool,
    pub status: CheckStatus,
    pub detail: String,
}

/// Compares the run's blow-up event with the threshold and time bound at
/// the marked point.
pub fn blowup_confrontation(
    series: &RunSeries,
    ctx: &BoundsContext,
    consts: &ThresholdConstants,
) -> Result<BlowupComparison> {
    let c = ctx.coefficients()?;
    let init = &series.initial;
    let yw = c.gradient_variable(0.0, init.phi0, init.w_x0);
    let yz = c.gradient_variable(0.0, init.phi0, init.z_x0);
    let (y0, slope) = if yw <= yz { (yw, init.w_x0) } else { (yz, init.z_x0) };
    let slope_threshold = ctx.blowup_threshold(init.phi0, consts)?;
    let crossed = y0 < -consts.level;
    let event_time = series.blowup_time();
    let mut out = BlowupComparison {
        threshold_crossed: crossed,
        y0,
        level: consts.level,
        slope,
        slope_threshold,
        event_time,
        bound: None,
        evaluated: false,
        status: CheckStatus::NotApplicable,
        detail: String::new(),
    };
    if !crossed {
        out.detail = "threshold not crossed; outcome recorded only".into();
        return Ok(out);
    }
    out.bound = branch_blowup_bound(ctx, consts, y0)?;
    out.evaluated = true;
    let horizon_end = series.end_time();
    out.status = match (event_time, out.bound) {
        (Some(t), Some(b)) if t >= 0.0 && t <= BLOWUP_TIME_SLACK * b.t_bound => CheckStatus::Pass,
        (Some(t), Some(b)) => {
            out.detail = format!("event at {t} exceeds {BLOWUP_TIME_SLACK} x bound {}", b.t_bound);
            CheckStatus::Fail
        }
        (Some(_), None) => {
            out.detail = "event occurred; no finite time bound for this branch".into();
            CheckStatus::Pass
        }
        (None, Some(b)) if horizon_end < BLOWUP_TIME_SLACK * b.t_bound => {
            out.detail = format!("run ends at {horizon_end}, before the bound {}", b.t_bound);
            CheckStatus::NotApplicable
        }
        (None, _) => {
            out.detail = format!("no blow-up event by t = {horizon_end}");
            CheckStatus::Fail
        }
    };
    Ok(out)
}

/// Residual summary for one traced path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResidual {
    pub family: crate::solver::Family,
    pub anchor: (f64, f64),
    pub stats: Option<ResidualStats>,
    pub detail: String,
}

/// Every check for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub run_id: String,
    pub checks: Vec<CheckResult>,
    pub residual_stats: Vec<PathResidual>,
    pub blowup_comparison: Option<BlowupComparison>,
}

impl BoundReport {
    pub fn failures(&self) -> Vec<String> {
        let mut f: Vec<String> = self
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        if let Some(b) = &self.blowup_comparison {
            if b.status == CheckStatus::Fail {
                f.push(format!("blowup_confrontation: {}", b.detail));
            }
        }
        f
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Relative drift of `int tau dx` over all snapshots, periodic grids only.
/// The location is the domain midpoint, since the quantity is global.
pub fn check_mass_conservation(series: &RunSeries) -> CheckResult {
    let name = "check_mass_conservation";
    let g = &series.grid;
    if g.boundary != crate::solver::Boundary::Periodic {
        return CheckResult::not_applicable(name, "mass flux through open boundaries".into());
    }
    let m0 = series.snapshots[0].mass(g);
    let mid = 0.5 * (g.x_min + g.x_max);
    let mut drift = Tracker::new("relative_mass_drift");
    for s in &series.snapshots {
        drift.see(MASS_DRIFT_TOL - ((s.mass(g) - m0) / m0).abs(), mid, s.t);
    }
    CheckResult::from_margins(name, vec![drift.m], format!("tolerance {MASS_DRIFT_TOL}"))
}

/// `M` from the initial snapshot; the floor value for `gamma > 3`, where no
/// control functions are used.
pub fn initial_ceiling(series: &RunSeries) -> Result<f64> {
    state_ceiling(&series.params, &series.grid, &series.snapshots[0])
}

/// `M` measured on one state.
pub fn state_ceiling(params: &GasParams, grid: &Grid1D, state: &FlowState) -> Result<f64> {
    if params.regime() == GammaRegime::GammaAbove3 {
        return Ok(M_FLOOR);
    }
    let (w, z) = state.riemann(params);
    let a = cell_gradient(grid, &w);
    let b = cell_gradient(grid, &z);
    ceiling_m(params, &state.tau, &a, &b)
}

/// Runs every applicable check on a series.
pub fn verify_series(
    run_id: &str,
    series: &RunSeries,
    t0_budget: Option<f64>,
    residual_paths: usize,
) -> Result<BoundReport> {
    let m = initial_ceiling(series)?;
    let ctx = BoundsContext::new(&series.params, m)?;
    let snaps = classical_snapshots(series);
    let checks = vec![
        check_apriori(series, &snaps),
        check_density_floor(series, &ctx, &snaps),
        check_gh_ceiling(series, &ctx, &snaps),
        check_mass_conservation(series),
    ];
    let blowup_comparison = match ctx.threshold_constants(t0_budget) {
        Ok(consts) => Some(blowup_confrontation(series, &ctx, &consts)?),
        Err(Error::UnsupportedRegime(_)) | Err(Error::InvalidParams(_)) => None,
        Err(e) => return Err(e),
    };
    let mut residual_stats = Vec::new();
    if residual_paths > 0 {
        if let Ok(coeffs) = ctx.coefficients() {
            let t_end = snaps.last().map_or(0.0, |s| s.t);
            let x0 = series.initial.x0;
            for family in [crate::solver::Family::Forward, crate::solver::Family::Backward] {
                let traced = crate::solver::trace_characteristic(
                    series,
                    Some(coeffs),
                    family,
                    (x0, 0.0),
                    Some(t_end),
                    MIN_SAMPLES_PER_INTERVAL,
                );
                let (stats, detail) = match traced.and_then(|p| riccati_residual(&p, coeffs, series.cadence)) {
                    Ok(s) => (Some(s), String::new()),
                    Err(e) => (None, e.to_string()),
                };
                residual_stats.push(PathResidual { family, anchor: (x0, 0.0), stats, detail });
            }
        }
    }
    Ok(BoundReport { run_id: run_id.into(), checks, residual_stats, blowup_comparison })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::GasParams;
    use crate::solver::{run, Boundary, Grid1D, Profile, RunOptions};

    fn constant_run(gamma: f64, k: f64, lambda: f64) -> RunSeries {
        let p = GasParams::new(gamma, k, 0.5, lambda, 1.01).unwrap();
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Periodic).unwrap();
        let opts = RunOptions { horizon: 1.0, cadence: 0.1, ..Default::default() };
        run(&p, &g, &Profile::Constant { tau: 1.0, u: 0.0 }, &opts).unwrap()
    }

    #[test]
    fn constant_state_passes_everything() {
        for (g, k, l) in [(2.0, 0.125, 0.5), (3.0, 1.0 / 3.0, 0.0), (2.0, 0.125, -1.0)] {
            let s = constant_run(g, k, l);
            let r = verify_series("c", &s, Some(1.0), 0).unwrap();
            assert!(r.passed(), "{:?}", r.failures());
            let ap = r.check("check_apriori").unwrap();
            assert_eq!(ap.margin_of("velocity"), Some(s.params.c_tilde0()));
            assert_eq!(r.check("check_density_floor").unwrap().status, CheckStatus::Pass);
            assert_eq!(r.check("check_GH_ceiling").unwrap().status, CheckStatus::Pass);
        }
    }

    #[test]
    fn planted_velocity_violation_fails() {
        let mut s = constant_run(2.0, 0.125, 0.5);
        let ct = s.params.c_tilde0();
        s.snapshots[3].u[7] = 2.0 * ct;
        let snaps = classical_snapshots(&s);
        let r = check_apriori(&s, &snaps);
        assert_eq!(r.status, CheckStatus::Fail);
        let (x, t) = r.location.unwrap();
        assert!((x - s.grid.center(7)).abs() < 1e-15);
        assert!((t - s.snapshots[3].t).abs() < 1e-15);
    }

    #[test]
    fn planted_control_violation_fails() {
        let mut s = constant_run(2.0, 0.125, 0.5);
        let m = initial_ceiling(&s).unwrap();
        let ctx = BoundsContext::new(&s.params, m).unwrap();
        // a steep rarefaction step in one snapshot pushes G above M
        s.snapshots[2].u[10] += 5.0;
        let snaps = classical_snapshots(&s);
        assert_eq!(check_gh_ceiling(&s, &ctx, &snaps).status, CheckStatus::Fail);
    }

    #[test]
    fn high_gamma_floor_not_applicable() {
        let s = constant_run(5.0, 0.8, 0.5);
        let r = verify_series("c", &s, None, 0).unwrap();
        assert_eq!(r.check("check_density_floor").unwrap().status, CheckStatus::NotApplicable);
        assert_eq!(r.check("check_GH_ceiling").unwrap().status, CheckStatus::NotApplicable);
    }

    #[test]
    fn residual_needs_dense_samples() {
        let s = constant_run(2.0, 0.125, 0.5);
        let coeffs = crate::coeff::riccati_coefficients(&s.params).unwrap();
        let path = crate::solver::trace_characteristic(&s, Some(&coeffs), crate::solver::Family::Forward, (0.5, 0.0), None, 5)
            .unwrap();
        assert!(matches!(
            riccati_residual(&path, &coeffs, s.cadence),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn undamped_constant_state_has_zero_residual() {
        let p = GasParams::new(2.0, 0.125, 0.0, 0.0, 1.01).unwrap();
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Periodic).unwrap();
        let opts = RunOptions { horizon: 1.0, cadence: 0.1, ..Default::default() };
        let s = run(&p, &g, &Profile::Constant { tau: 1.0, u: 0.0 }, &opts).unwrap();
        let coeffs = crate::coeff::riccati_coefficients(&p).unwrap();
        let path = crate::solver::trace_characteristic(&s, Some(&coeffs), crate::solver::Family::Forward, (0.5, 0.0), None, 20)
            .unwrap();
        let r = riccati_residual(&path, &coeffs, s.cadence).unwrap();
        assert!(r.max < 1e-10);
    }
}
