//! Command-line harness: `bench` reproduces the multi-method random
//! objective benchmark, `vdp` the Van der Pol identification demo, and
//! `theory-check` runs the acquisition's structural identities as a
//! pass/fail table.
//!
//! Exit codes: 0 success, 1 check failure, 2 configuration error, 3 I/O
//! failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use efe_bo::bench::{
    checks::run_theory_checks, run_benchmark, run_vdp_demo, write_outputs, write_vdp_outputs,
    BenchmarkConfig, VdpDemoConfig,
};
use efe_bo::engine::RunRecord;
use efe_bo::Error;

#[derive(Parser)]
#[command(
    name = "efe-bo",
    version,
    about = "Expected-free-energy Bayesian optimization harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the multi-method benchmark over random sinusoid objectives.
    Bench {
        /// JSON benchmark configuration; defaults to the built-in reference
        /// setup (see `default.config`).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
        /// Override the worker count.
        #[arg(long)]
        workers: Option<usize>,
        /// Comma-separated subset of configured methods to run
        /// (e.g. `EFE,VAR,TS`).
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
    },
    /// Run the Van der Pol identification demo (adaptive vs fixed EFE).
    Vdp {
        /// Seed of the noisy reference trajectory.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "vdp-out")]
        out: PathBuf,
        /// Optimization iterations per mode.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Run every structural identity check and print a pass/fail table.
    TheoryCheck {
        /// Sample count for the Monte Carlo oracles.
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: usize,
    },
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Bench {
            config,
            seed,
            out,
            workers,
            methods,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let body =
                        fs::read_to_string(&path).map_err(|e| Error::Io { path, source: e })?;
                    serde_json::from_str::<BenchmarkConfig>(&body)
                        .map_err(|e| Error::InvalidConfig(format!("config file: {e}")))?
                }
                None => BenchmarkConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(workers) = workers {
                cfg.workers = workers;
            }
            if let Some(names) = methods {
                cfg.methods = select_methods(&cfg, &names)?;
            }

            let outcome = run_benchmark(&cfg)?;
            write_outputs(&outcome, &out)?;

            println!(
                "benchmark: {} objectives x {} methods, master seed {}",
                cfg.n_objectives,
                cfg.methods.len(),
                cfg.master_seed
            );
            println!(
                "{:<10} {:>12} {:>12} {:>14} {:>12}",
                "method", "mean mse", "sd mse", "mean regret", "sd regret"
            );
            for m in &outcome.report.methods {
                println!(
                    "{:<10} {:>12.6} {:>12.6} {:>14.6} {:>12.6}",
                    m.method,
                    m.mean_final_mse,
                    m.sd_final_mse,
                    m.mean_final_regret,
                    m.sd_final_regret
                );
            }
            println!(
                "completed {} runs, {} failed; outputs in {}",
                outcome.report.completed_runs,
                outcome.report.failed_runs,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Vdp {
            seed,
            out,
            iterations,
        } => {
            let mut cfg = VdpDemoConfig::default();
            if let Some(seed) = seed {
                cfg.vdp.seed = seed;
            }
            if let Some(iterations) = iterations {
                cfg.iterations = iterations;
            }
            let result = run_vdp_demo(&cfg)?;
            write_vdp_outputs(&result, &out)?;

            let final_mse = |r: &RunRecord| r.final_metrics().gp_mse;
            println!(
                "adaptive EFE: best queried kappa {:.4}, final GP MSE {:.6}",
                result.best_kappa_adaptive,
                final_mse(&result.adaptive)
            );
            println!(
                "fixed EFE:    best queried kappa {:.4}, final GP MSE {:.6}",
                result.best_kappa_fixed,
                final_mse(&result.fixed)
            );
            println!("outputs in {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::TheoryCheck { mc_samples } => {
            let rows = run_theory_checks(mc_samples);
            println!(
                "{:<40} {:>14} {:>10} {:>8}",
                "check", "computed", "bound", "status"
            );
            let mut all_pass = true;
            for row in &rows {
                all_pass &= row.pass;
                println!(
                    "{:<40} {:>14.3e} {:>10.0e} {:>8}",
                    row.name,
                    row.computed,
                    row.bound,
                    if row.pass { "PASS" } else { "FAIL" }
                );
            }
            if all_pass {
                println!("all {} checks passed", rows.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("checks FAILED");
                Ok(ExitCode::from(1))
            }
        }
    }
}

/// Restrict the configured method list to the named subset, preserving
/// config order.
fn select_methods(
    cfg: &BenchmarkConfig,
    names: &[String],
) -> Result<Vec<efe_bo::acquisition::AcquisitionSpec>, Error> {
    let mut selected = Vec::new();
    for name in names {
        let spec = cfg
            .methods
            .iter()
            .find(|m| m.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown method '{name}'; configured: {}",
                    cfg.methods
                        .iter()
                        .map(|m| m.name())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
        selected.push(spec.clone());
    }
    Ok(selected)
}
