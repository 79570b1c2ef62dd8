//! Command-line front end.
//!
//! Exit status: 0 when every applicable check passes, 1 on a check failure,
//! 2 on a configuration error, 3 on a numerical abort.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use damped_euler::experiment::{
    bounds_document, parse_config, riccati_document, run_scenario, run_suite, verify_run_dir, ExperimentError,
    WORKERS_ENV,
};
use damped_euler::verify::BoundReport;

#[derive(Parser)]
#[command(name = "damped-euler", version, about = "Blow-up and vacuum experiments for damped 1D Euler flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario, verify it and write its artifacts.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print every analytic constant of a scenario as JSON.
    Bounds {
        #[arg(long)]
        config: PathBuf,
    },
    /// Integrate the comparison equation from the marked point and print it as JSON.
    Riccati {
        #[arg(long)]
        config: PathBuf,
        /// End time; defaults to the scenario horizon.
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Re-verify a run directory and rewrite its verdict.
    Verify {
        #[arg(long)]
        run: PathBuf,
    },
    /// Run a built-in suite.
    Suite {
        /// smoke, regimes_gamma_lt3, regimes_gamma_gt3, gamma_eq_3 or classical_limit
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
    },
}

fn print_json<T: Serialize>(v: &T) -> Result<(), ExperimentError> {
    let text = serde_json::to_string_pretty(v)
        .map_err(|e| ExperimentError::Artifact { path: "<stdout>".into(), message: e.to_string() })?;
    println!("{text}");
    Ok(())
}

fn summarize(label: &str, report: &BoundReport, code: i32) {
    for c in &report.checks {
        println!("{label}: {} {:?} {}", c.name, c.status, c.detail);
    }
    if let Some(b) = &report.blowup_comparison {
        println!(
            "{label}: blowup_confrontation {:?} crossed={} event={:?} bound={:?}",
            b.status,
            b.threshold_crossed,
            b.event_time,
            b.bound.map(|x| x.t_bound)
        );
    }
    for f in report.failures() {
        eprintln!("{label}: FAIL {f}");
    }
    println!("{label}: exit {code}");
}

fn simulate(config: &Path, out: &Path) -> Result<i32, ExperimentError> {
    let cfg = parse_config(config)?;
    let o = run_scenario(&cfg, Some(out))?;
    let code = o.exit_code();
    summarize(&cfg.name, &o.report, code);
    Ok(code)
}

fn dispatch(cmd: Command) -> Result<i32, ExperimentError> {
    match cmd {
        Command::Simulate { config, out } => simulate(&config, &out),
        Command::Bounds { config } => {
            print_json(&bounds_document(&parse_config(&config)?)?)?;
            Ok(0)
        }
        Command::Riccati { config, t_end, samples } => {
            print_json(&riccati_document(&parse_config(&config)?, t_end, samples)?)?;
            Ok(0)
        }
        Command::Verify { run } => {
            let (report, code) = verify_run_dir(&run)?;
            summarize(&report.run_id, &report, code);
            Ok(code)
        }
        Command::Suite { name, out, workers } => {
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let s = run_suite(&name, &out, workers)?;
            for e in &s.entries {
                println!(
                    "{:<40} exit {}  event {:?}  bound {:?}",
                    e.name, e.exit_code, e.blowup_time, e.blowup_bound
                );
                for f in &e.failures {
                    eprintln!("  {}: {f}", e.name);
                }
            }
            println!("suite {name}: exit {}", s.exit_code);
            Ok(s.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
