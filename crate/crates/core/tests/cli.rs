//! End-to-end checks of the command-line tool.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_damped-euler");

const SINE: &str = r#"{
    "name": "sine",
    "params": {"gamma": 2.0, "K": 0.125, "alpha": 0.5, "lambda": 0.5},
    "grid": {"x_min": 0.0, "x_max": 1.0, "n_cells": 128, "boundary": "periodic"},
    "profile": {"kind": "sine", "tau_mean": 1.0, "tau_amp": 0.1, "u_amp": 0.05, "wavenumber": 6.283185307179586},
    "horizon": 0.5,
    "snapshot_cadence": 0.1
}"#;

const PULSE: &str = r#"{
    "name": "pulse",
    "params": {"gamma": 2.0, "K": 0.125, "alpha": 0.5, "lambda": -1.0},
    "grid": {"x_min": -3.0, "x_max": 3.0, "n_cells": 600, "boundary": "constant_extrapolation"},
    "profile": {"kind": "compression_pulse", "tau_mean": 1.0, "slope": -3.0, "width": 0.5, "x0": 0.0},
    "horizon": 1.0,
    "snapshot_cadence": 0.1
}"#;

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn cli(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("DAMPED_EULER_WORKERS").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn bounds_reports_every_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "pulse.json", PULSE);
    let out = cli(&["bounds", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    for key in ["K3", "K4", "N1", "t0", "M", "C", "M_bar", "M_tilde", "C_tilde0", "level"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["branch"], "low_gamma_sign_change");
    assert!(v["N1"].as_f64().unwrap() > 0.0 && v["t0"].as_f64().unwrap() > 0.0);
    assert!(v["M_hat"].is_null());
    let mp = &v["marked_point"];
    assert_eq!(mp["threshold_crossed"], Value::Bool(true));
    assert!(mp["bound"]["t_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn riccati_envelope_reaches_the_pole() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "pulse.json", PULSE);
    let out = cli(&["riccati", "--config", cfg.to_str().unwrap(), "--t-end", "3.0", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let y0 = v["marked_point"]["y0"].as_f64().unwrap();
    let env = &v["envelope"];
    assert_eq!(env["y0"].as_f64().unwrap(), y0);
    assert!(!env["samples"].as_array().unwrap().is_empty());
    assert_eq!(env["outcome"]["kind"], "blow_up");
    let bound = v["marked_point"]["bound"]["t_bound"].as_f64().unwrap();
    assert!(env["outcome"]["t_star"].as_f64().unwrap() <= bound);
}

#[test]
fn invalid_config_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SINE.replace("\"tau_mean\": 1.0", "\"tau_mean\": -1.0");
    let cfg = write_config(dir.path(), "bad.json", &bad);
    let out = cli(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("run").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau_mean"));

    let cfg = write_config(dir.path(), "typo.json", &SINE.replace("\"horizon\"", "\"horizn\""));
    let out = cli(&["bounds", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn simulate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sine.json", SINE);
    let run = dir.path().join("run");
    let out = cli(&["simulate", "--config", cfg.to_str().unwrap(), "--out", run.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["config.json", "manifest.json", "verdict.json", "snapshots/snap_00000.csv", "snapshots/snap_00005.csv"] {
        assert!(run.join(f).is_file(), "missing {f}");
    }
    let verdict = std::fs::read(run.join("verdict.json")).unwrap();
    let out = cli(&["verify", "--run", run.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(run.join("verdict.json")).unwrap(), verdict);
}

#[test]
fn verify_rejects_a_missing_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["verify", "--run", dir.path().join("nope").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn smoke_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["suite", "smoke", "--out", dir.path().to_str().unwrap(), "--workers", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&std::fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["exit_code"], Value::from(0));
}

#[test]
fn unknown_suite_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["suite", "nonsense", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("smoke"));
}
