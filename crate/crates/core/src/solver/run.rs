//! Time marching with snapshots and event detection.
//!
//! A gradient blow-up event is declared at a check time when the proxy
//! exceeds `proxy_factor` times its initial value and a companion run on a
//! twice finer grid, advanced in lockstep, shows a proxy at least
//! `refine_ratio` times larger. Resolved smooth gradients do not grow under
//! refinement; a forming shock does.

use serde::{Deserialize, Serialize};

use super::profile::{initialize, InitialReport, Profile};
use super::scheme::{stable_dt, step, CFL_LIMIT};
use super::state::gradient_proxy;
use super::{FlowState, Grid1D};
use crate::error::{Error, Result};
use crate::gas::GasParams;

/// Proxies below this are treated as a flat state.
const PROXY_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub horizon: f64,
    pub cadence: f64,
    pub cfl: f64,
    pub proxy_factor: f64,
    pub refine_ratio: f64,
    /// Run the refined companion and require it to confirm blow-up events.
    pub confirm_refined: bool,
    /// Time between event checks; defaults to a quarter of the cadence.
    pub check_interval: Option<f64>,
    /// Report `|u| > C~0` or `tau < 1/C~0` at snapshots.
    pub check_apriori: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            horizon: 1.0,
            cadence: 0.1,
            cfl: CFL_LIMIT,
            proxy_factor: 50.0,
            refine_ratio: 2.0,
            confirm_refined: true,
            check_interval: None,
            check_apriori: true,
        }
    }
}

impl RunOptions {
    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            v.push(format!("horizon must be non-negative, got {}", self.horizon));
        }
        if !(self.cadence > 0.0) {
            v.push(format!("snapshot cadence must be positive, got {}", self.cadence));
        }
        if !(self.cfl > 0.0 && self.cfl <= CFL_LIMIT) {
            v.push(format!("cfl must lie in (0, {CFL_LIMIT}], got {}", self.cfl));
        }
        if let Some(c) = self.check_interval {
            if !(c > 0.0) {
                v.push(format!("check interval must be positive, got {c}"));
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v.join("; ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EventKind {
    GradientBlowup { proxy: f64, refined_proxy: Option<f64> },
    Vacuum { cell: usize, tau: f64 },
    BoundViolation { quantity: String, cell: usize, value: f64, bound: f64 },
    StepFailure { message: String },
}

impl EventKind {
    pub fn is_terminal(&self) -> bool {
        !matches!(self, EventKind::BoundViolation { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

/// Snapshots and events of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSeries {
    pub params: GasParams,
    pub grid: Grid1D,
    pub cadence: f64,
    pub snapshots: Vec<FlowState>,
    pub events: Vec<Event>,
    pub initial: InitialReport,
    /// Largest proxy seen at each check time, `(t, proxy)`.
    pub proxy_history: Vec<(f64, f64)>,
}

impl RunSeries {
    pub fn blowup_time(&self) -> Option<f64> {
        self.events.iter().find_map(|e| match e.kind {
            EventKind::GradientBlowup { .. } => Some(e.t),
            _ => None,
        })
    }

    pub fn terminal_event(&self) -> Option<&Event> {
        self.events.iter().find(|e| e.kind.is_terminal())
    }

    pub fn end_time(&self) -> f64 {
        self.snapshots.last().map_or(0.0, |s| s.t)
    }
}

/// Advances `s` to exactly `target`.
fn advance(s: &mut FlowState, params: &GasParams, grid: &Grid1D, cfl: f64, target: f64) -> Result<()> {
    while s.t < target {
        let mut dt = stable_dt(s, params, grid, cfl);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::StepUnderflow { t: s.t, y: f64::NAN, h: dt });
        }
        let land = s.t + dt >= target;
        if land {
            dt = target - s.t;
        }
        if dt < 1e-14 * target.max(1.0) {
            s.t = target;
            break;
        }
        *s = step(s, params, grid, dt)?;
        if land {
            s.t = target;
        }
    }
    Ok(())
}

fn failure_event(t: f64, e: Error) -> Event {
    match e {
        Error::Vacuum { cell, t: te, tau } => Event {
            t: if te.is_finite() { te } else { t },
            kind: EventKind::Vacuum { cell, tau },
        },
        other => Event { t, kind: EventKind::StepFailure { message: other.to_string() } },
    }
}

/// A-priori bound checks on one snapshot; pushes the first violation per quantity.
fn apriori_events(s: &FlowState, params: &GasParams, seen: &mut [bool; 2], events: &mut Vec<Event>) {
    let ct = params.c_tilde0();
    if !seen[0] {
        if let Some((cell, &u)) = s.u.iter().enumerate().find(|(_, u)| u.abs() > ct) {
            seen[0] = true;
            events.push(Event {
                t: s.t,
                kind: EventKind::BoundViolation { quantity: "velocity".into(), cell, value: u, bound: ct },
            });
        }
    }
    if !seen[1] {
        if let Some((cell, &tau)) = s.tau.iter().enumerate().find(|(_, t)| **t < 1.0 / ct) {
            seen[1] = true;
            events.push(Event {
                t: s.t,
                kind: EventKind::BoundViolation {
                    quantity: "specific_volume".into(),
                    cell,
                    value: tau,
                    bound: 1.0 / ct,
                },
            });
        }
    }
}

/// Runs a scenario from its initial profile.
pub fn run(params: &GasParams, grid: &Grid1D, profile: &Profile, opts: &RunOptions) -> Result<RunSeries> {
    opts.validate()?;
    let (state, initial) = initialize(profile, params, grid)?;
    let fine_grid = grid.refined(2);
    let fine = if opts.confirm_refined {
        Some(initialize(profile, params, &fine_grid)?.0)
    } else {
        None
    };
    Ok(march(params, grid, state, fine, initial, opts))
}

fn march(
    params: &GasParams,
    grid: &Grid1D,
    mut coarse: FlowState,
    mut fine: Option<FlowState>,
    initial: InitialReport,
    opts: &RunOptions,
) -> RunSeries {
    let fine_grid = grid.refined(2);
    let check = opts.check_interval.unwrap_or(0.25 * opts.cadence);
    let trigger = (opts.proxy_factor * initial.proxy0).max(PROXY_FLOOR);
    let mut out = RunSeries {
        params: *params,
        grid: *grid,
        cadence: opts.cadence,
        snapshots: vec![coarse.clone()],
        events: Vec::new(),
        initial,
        proxy_history: vec![(0.0, initial.proxy0)],
    };
    let mut seen = [false; 2];
    if opts.check_apriori {
        apriori_events(&coarse, params, &mut seen, &mut out.events);
    }
    let mut n_snap = 1u64;
    let mut n_check = 1u64;
    loop {
        let t_snap = (n_snap as f64 * opts.cadence).min(opts.horizon);
        let t_check = (n_check as f64 * check).min(opts.horizon);
        let target = t_snap.min(t_check);
        if coarse.t >= opts.horizon || target <= coarse.t {
            break;
        }
        if let Err(e) = advance(&mut coarse, params, grid, opts.cfl, target) {
            out.events.push(failure_event(coarse.t, e));
            break;
        }
        if let Some(f) = fine.as_mut() {
            if let Err(e) = advance(f, params, &fine_grid, opts.cfl, target) {
                let ev = failure_event(f.t, e);
                out.events.push(Event {
                    t: ev.t,
                    kind: EventKind::StepFailure { message: format!("refined companion: {:?}", ev.kind) },
                });
                break;
            }
        }
        let is_snap = target == t_snap;
        if target == t_check {
            n_check += 1;
        }
        if is_snap {
            n_snap += 1;
            out.snapshots.push(coarse.clone());
            if opts.check_apriori {
                apriori_events(&coarse, params, &mut seen, &mut out.events);
            }
        }
        let proxy = gradient_proxy(&coarse, params, grid);
        out.proxy_history.push((coarse.t, proxy));
        if proxy > trigger {
            let refined = fine.as_ref().map(|f| gradient_proxy(f, params, &fine_grid));
            let confirmed = match refined {
                Some(r) => r >= opts.refine_ratio * proxy,
                None => true,
            };
            if confirmed {
                if !is_snap {
                    out.snapshots.push(coarse.clone());
                }
                out.events.push(Event {
                    t: coarse.t,
                    kind: EventKind::GradientBlowup { proxy, refined_proxy: refined },
                });
                break;
            }
        }
    }
    out
}
