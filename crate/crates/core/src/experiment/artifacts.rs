//! On-disk artifacts: snapshot CSVs, run manifests and JSON helpers.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{ExperimentError, ResolvedConstants, ScenarioConfig};
use crate::gas::GasParams;
use crate::solver::{Event, FlowState, Grid1D, InitialReport};

pub const CSV_HEADER: &str = "x,tau,u,rho,p,c,phi,w,z,A,B";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub t: f64,
    /// Path relative to the run directory.
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario_hash: String,
    pub name: String,
    pub config: ScenarioConfig,
    /// Parameters with `C0` resolved.
    pub params: GasParams,
    pub grid: Grid1D,
    pub cadence: f64,
    pub constants: ResolvedConstants,
    pub initial: InitialReport,
    pub snapshots: Vec<SnapshotEntry>,
    pub events: Vec<Event>,
    pub proxy_history: Vec<(f64, f64)>,
    /// Verdict file, relative to the run directory.
    pub verdict: String,
}

fn push_num(line: &mut String, buf: &mut ryu::Buffer, v: f64) {
    line.push_str(buf.format(v));
}

/// Renders a snapshot as CSV text.
pub fn snapshot_csv(state: &FlowState, params: &GasParams, grid: &Grid1D) -> String {
    let f = state.fields(params, grid);
    let mut out = String::with_capacity(200 * grid.n_cells);
    out.push_str(CSV_HEADER);
    out.push('\n');
    let mut buf = ryu::Buffer::new();
    for i in 0..grid.n_cells {
        let row = [
            grid.center(i),
            state.tau[i],
            state.u[i],
            f.rho[i],
            f.p[i],
            f.c[i],
            f.phi[i],
            f.w[i],
            f.z[i],
            f.a[i],
            f.b[i],
        ];
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            push_num(&mut out, &mut buf, *v);
        }
        out.push('\n');
    }
    out
}

pub fn write_snapshot_csv(path: &Path, state: &FlowState, params: &GasParams, grid: &Grid1D) -> Result<(), ExperimentError> {
    std::fs::write(path, snapshot_csv(state, params, grid)).map_err(|e| ExperimentError::io(path, e))
}

/// Reads the `tau` and `u` columns of a snapshot CSV.
pub fn read_snapshot_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>), ExperimentError> {
    let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    let bad = |message: String| ExperimentError::Artifact { path: path.display().to_string(), message };
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad("missing or unexpected header".into()));
    }
    let (mut tau, mut u) = (Vec::new(), Vec::new());
    for (n, line) in lines.enumerate() {
        let mut cols = line.split(',').skip(1);
        let mut next = |what: &str| -> Result<f64, ExperimentError> {
            cols.next()
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| bad(format!("row {}: bad {what}", n + 1)))
        };
        tau.push(next("tau")?);
        u.push(next("u")?);
    }
    Ok((tau, u))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ExperimentError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| ExperimentError::Artifact {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| ExperimentError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ExperimentError> {
    let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| ExperimentError::Artifact { path: path.display().to_string(), message: e.to_string() })
}

/// Relative path of snapshot `k`.
pub fn snapshot_name(k: usize) -> String {
    format!("snapshots/snap_{k:05}.csv")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Boundary;

    #[test]
    fn csv_round_trips_exactly() {
        let p = GasParams::new(2.0, 0.125, 0.5, 0.5, 2.0).unwrap();
        let g = Grid1D::new(0.0, 1.0, 16, Boundary::Periodic).unwrap();
        let tau: Vec<f64> = (0..16).map(|i| 1.0 + 0.1 * (i as f64 * 0.7).sin() + 1e-17 * i as f64).collect();
        let u: Vec<f64> = (0..16).map(|i| (i as f64 / 3.0).cos() / 7.0).collect();
        let s = FlowState::new(0.3, tau.clone(), u.clone()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_snapshot_csv(&path, &s, &p, &g).unwrap();
        let (t2, u2) = read_snapshot_csv(&path).unwrap();
        assert_eq!(t2, tau);
        assert_eq!(u2, u);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 17);
        assert_eq!(text, snapshot_csv(&s, &p, &g));
    }
}
