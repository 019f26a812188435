//! Reproducible experiment harness: the multi-method random-objective
//! benchmark, the Van der Pol identification demo, and persistence of
//! configs, per-run records and aggregate statistics.
//!
//! Fairness contract: every method sees the same objectives, the same
//! initial design, and the same observation-noise draw for a given
//! (objective, evaluation index, grid index). Per-objective sub-seeds are
//! derived from the master seed by hashing with the objective index, never
//! by consuming a shared stream, so the run set is embarrassingly parallel
//! without any loss of determinism.

pub mod checks;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acquisition::AcquisitionSpec;
use crate::engine::{run, RunConfig, RunRecord};
use crate::error::{Error, Result};
use crate::gp::{fit, posterior, Dataset, GpConfig};
use crate::grid::{Grid, GridSpec};
use crate::objectives::{
    evaluate_objective, generate_sinusoid, noisy_reference, vdp_objective, SinusoidObjective,
    VdpConfig,
};
use crate::seeding::{self, stream};

/// Benchmark settings. [`BenchmarkConfig::default`] reproduces the reference
/// setup: 50 random sinusoid objectives on a 400-point grid over `[-8, 8]`,
/// RBF length-scale 0.5 with noise level 0.2, initial design `{-5, 0, 5}`,
/// 50 iterations, and all seven acquisition methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub n_objectives: usize,
    pub methods: Vec<AcquisitionSpec>,
    pub grid: GridSpec,
    pub gp: GpConfig,
    pub initial_points: Vec<f64>,
    pub iterations: usize,
    pub obs_noise_std: f64,
    pub master_seed: u64,
    pub workers: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            n_objectives: 50,
            methods: default_methods(),
            grid: GridSpec {
                lower: -8.0,
                upper: 8.0,
                n: 400,
            },
            gp: GpConfig::new(0.5, 1.0, 0.04),
            initial_points: vec![-5.0, 0.0, 5.0],
            iterations: 50,
            obs_noise_std: 0.2,
            master_seed: 0,
            workers: 4,
        }
    }
}

/// The seven benchmark acquisitions with their reference parameters.
pub fn default_methods() -> Vec<AcquisitionSpec> {
    vec![
        AcquisitionSpec::Ucb { beta: 2.0 },
        AcquisitionSpec::Ei,
        AcquisitionSpec::Pi { xi: 0.01 },
        AcquisitionSpec::Var,
        AcquisitionSpec::Ts,
        AcquisitionSpec::Efe {
            tau_sq_min: 1.0,
            tau_sq_max: 30.0,
            fixed_tau_sq: None,
        },
        AcquisitionSpec::Kg,
    ]
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_objectives == 0 {
            return Err(Error::InvalidConfig("n_objectives must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("methods must be nonempty".into()));
        }
        let mut names: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.methods.len() {
            return Err(Error::InvalidConfig("method names must be unique".into()));
        }
        // The engine validates the rest per run; fail fast here.
        self.run_config(&self.methods[0], 0).validate()
    }

    /// Sub-seed for objective `index`.
    pub fn objective_seed(&self, index: usize) -> u64 {
        seeding::derive(self.master_seed, &[stream::OBJECTIVE, index as u64])
    }

    fn run_config(&self, method: &AcquisitionSpec, objective_index: usize) -> RunConfig {
        RunConfig {
            grid: self.grid,
            gp: self.gp,
            acquisition: method.clone(),
            initial_points: self.initial_points.clone(),
            iterations: self.iterations,
            obs_noise_std: self.obs_noise_std,
            seed: self.objective_seed(objective_index),
        }
    }
}

/// One persisted run: the method, the objective it optimized (replayable
/// from its component list), and the engine record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredRun {
    pub method: String,
    pub objective_seed: u64,
    pub objective: SinusoidObjective,
    pub record: RunRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureNote {
    pub method: String,
    pub objective_seed: u64,
    pub error: String,
}

/// Mean and sample standard deviation of the final metrics of one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub completed: usize,
    pub mean_final_mse: f64,
    pub sd_final_mse: f64,
    pub mean_final_regret: f64,
    pub sd_final_regret: f64,
}

/// Final metrics of one (method, objective) pair, for scatter plots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub method: String,
    pub objective_seed: u64,
    pub final_mse: f64,
    pub final_regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub methods: Vec<MethodSummary>,
    pub scatter: Vec<ScatterPoint>,
    pub completed_runs: usize,
    pub failed_runs: usize,
}

/// Everything a benchmark produced.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutcome {
    pub config: BenchmarkConfig,
    pub runs: Vec<StoredRun>,
    pub failures: Vec<FailureNote>,
    pub report: AggregateReport,
}

/// Run every method on every objective. Failed runs are excluded from the
/// aggregates and surfaced in `failures`.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkOutcome> {
    config.validate()?;

    let grid = config.grid.build()?;
    let objectives: Vec<(u64, SinusoidObjective, Vec<f64>)> = (0..config.n_objectives)
        .map(|i| {
            let seed = config.objective_seed(i);
            let objective = generate_sinusoid(seed);
            let f_grid = grid
                .points()
                .iter()
                .map(|&x| evaluate_objective(&objective, x))
                .collect::<Result<Vec<f64>>>()?;
            Ok((seed, objective, f_grid))
        })
        .collect::<Result<_>>()?;

    let tasks: Vec<(usize, usize)> = (0..config.n_objectives)
        .flat_map(|oi| (0..config.methods.len()).map(move |mi| (oi, mi)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;

    let results: Vec<std::result::Result<StoredRun, FailureNote>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(oi, mi)| {
                let method = &config.methods[mi];
                let (seed, objective, f_grid) = &objectives[oi];
                let run_config = config.run_config(method, oi);
                match run(&run_config, f_grid) {
                    Ok(record) => Ok(StoredRun {
                        method: method.name().to_string(),
                        objective_seed: *seed,
                        objective: objective.clone(),
                        record,
                    }),
                    Err(e) => Err(FailureNote {
                        method: method.name().to_string(),
                        objective_seed: *seed,
                        error: e.to_string(),
                    }),
                }
            })
            .collect()
    });

    let mut runs = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(run) => runs.push(run),
            Err(note) => failures.push(note),
        }
    }

    let report = aggregate(config, &runs, failures.len());
    Ok(BenchmarkOutcome {
        config: config.clone(),
        runs,
        failures,
        report,
    })
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    match values.len() {
        0 => (f64::NAN, f64::NAN),
        1 => (values[0], 0.0),
        n => {
            let mean = values.iter().sum::<f64>() / n as f64;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            (mean, var.sqrt())
        }
    }
}

/// Build the aggregate statistics from completed runs, in config method
/// order, then objective order within a method.
pub fn aggregate(config: &BenchmarkConfig, runs: &[StoredRun], failed: usize) -> AggregateReport {
    let mut methods = Vec::with_capacity(config.methods.len());
    let mut scatter = Vec::with_capacity(runs.len());
    for spec in &config.methods {
        let name = spec.name();
        let mut mses = Vec::new();
        let mut regrets = Vec::new();
        for run in runs.iter().filter(|r| r.method == name) {
            let fin = run.record.final_metrics();
            mses.push(fin.gp_mse);
            regrets.push(fin.simple_regret);
            scatter.push(ScatterPoint {
                method: name.to_string(),
                objective_seed: run.objective_seed,
                final_mse: fin.gp_mse,
                final_regret: fin.simple_regret,
            });
        }
        let (mean_mse, sd_mse) = mean_sd(&mses);
        let (mean_regret, sd_regret) = mean_sd(&regrets);
        methods.push(MethodSummary {
            method: name.to_string(),
            completed: mses.len(),
            mean_final_mse: mean_mse,
            sd_final_mse: sd_mse,
            mean_final_regret: mean_regret,
            sd_final_regret: sd_regret,
        });
    }
    AggregateReport {
        methods,
        scatter,
        completed_runs: runs.len(),
        failed_runs: failed,
    }
}

pub const SUMMARY_HEADER: &str =
    "method,mean_final_mse,sd_final_mse,mean_final_regret,sd_final_regret";
pub const SCATTER_HEADER: &str = "method,objective_seed,final_mse,final_regret";

/// Render `summary.csv`: one row per method, mirroring the reference
/// table's columns. Floats use the shortest round-trip decimal form.
pub fn summary_csv(report: &AggregateReport) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for m in &report.methods {
        writeln!(
            out,
            "{},{},{},{},{}",
            m.method, m.mean_final_mse, m.sd_final_mse, m.mean_final_regret, m.sd_final_regret
        )
        .expect("write to string");
    }
    out
}

/// Render `scatter.csv`: the final (MSE, regret) of every completed run.
pub fn scatter_csv(report: &AggregateReport) -> String {
    let mut out = String::from(SCATTER_HEADER);
    out.push('\n');
    for p in &report.scatter {
        writeln!(
            out,
            "{},{},{},{}",
            p.method, p.objective_seed, p.final_mse, p.final_regret
        )
        .expect("write to string");
    }
    out
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let body = serde_json::to_string_pretty(value)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    write_file(path, body)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let body = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&body).map_err(|e| Error::io(path, std::io::Error::other(e)))
}

/// Persist a benchmark: `summary.csv`, `scatter.csv`, `report.json`,
/// `config.replay.json`, and one JSON record per run under
/// `runs/<method>/<objective_seed>.json`.
pub fn write_outputs(outcome: &BenchmarkOutcome, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_file(&out_dir.join("summary.csv"), summary_csv(&outcome.report))?;
    write_file(&out_dir.join("scatter.csv"), scatter_csv(&outcome.report))?;
    write_json(&out_dir.join("report.json"), &outcome.report)?;
    write_json(&out_dir.join("config.replay.json"), &outcome.config)?;
    if !outcome.failures.is_empty() {
        write_json(&out_dir.join("failures.json"), &outcome.failures)?;
    }
    for run in &outcome.runs {
        let dir = out_dir.join("runs").join(&run.method);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        write_json(&dir.join(format!("{}.json", run.objective_seed)), run)?;
    }
    Ok(())
}

/// Re-read a persisted report.
pub fn import_report(path: &Path) -> Result<AggregateReport> {
    read_json(path)
}

/// Re-read persisted run records and rebuild the aggregate report; equals
/// the live report exactly for a completed benchmark directory.
pub fn replay_report(out_dir: &Path) -> Result<AggregateReport> {
    let config: BenchmarkConfig = read_json(&out_dir.join("config.replay.json"))?;
    let mut runs = Vec::new();
    let mut missing = 0usize;
    for method in &config.methods {
        for oi in 0..config.n_objectives {
            let path = out_dir
                .join("runs")
                .join(method.name())
                .join(format!("{}.json", config.objective_seed(oi)));
            if path.exists() {
                runs.push(read_json::<StoredRun>(&path)?);
            } else {
                missing += 1;
            }
        }
    }
    // Restore objective-major order to match the live aggregation input.
    runs.sort_by_key(|r| {
        let oi = (0..config.n_objectives)
            .position(|i| config.objective_seed(i) == r.objective_seed)
            .unwrap_or(usize::MAX);
        let mi = config
            .methods
            .iter()
            .position(|m| m.name() == r.method)
            .unwrap_or(usize::MAX);
        (oi, mi)
    });
    Ok(aggregate(&config, &runs, missing))
}

/// Settings of the Van der Pol identification demo: adaptive against
/// fixed-`tau^2` EFE on the frozen noisy reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VdpDemoConfig {
    pub vdp: VdpConfig,
    pub grid_points: usize,
    pub gp: GpConfig,
    pub iterations: usize,
    pub tau_sq_min: f64,
    pub tau_sq_max: f64,
    /// Preference variance of the nonadaptive run; the exploitation end of
    /// the adaptive range.
    pub fixed_tau_sq: f64,
}

impl Default for VdpDemoConfig {
    fn default() -> Self {
        VdpDemoConfig {
            vdp: VdpConfig::default(),
            grid_points: 400,
            // The GP noise term matches the reference noise level 0.1.
            gp: GpConfig::new(0.5, 1.0, 0.01),
            iterations: 50,
            tau_sq_min: 1.0,
            tau_sq_max: 30.0,
            fixed_tau_sq: 1.0,
        }
    }
}

/// Plot-ready curves over the kappa grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VdpPlotData {
    pub kappa: Vec<f64>,
    pub true_cost: Vec<f64>,
    pub adaptive_mu: Vec<f64>,
    pub adaptive_sigma: Vec<f64>,
    pub fixed_mu: Vec<f64>,
    pub fixed_sigma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VdpDemoResult {
    pub config: VdpDemoConfig,
    pub adaptive: RunRecord,
    pub fixed: RunRecord,
    /// Queried kappa with the best observed cost, per mode.
    pub best_kappa_adaptive: f64,
    pub best_kappa_fixed: f64,
    pub plot: VdpPlotData,
}

/// Run the demo: build the frozen noisy reference, optimize the negative
/// identification MSE with adaptive and with fixed-`tau^2` EFE, and collect
/// the final posterior bands next to the true cost curve.
pub fn run_vdp_demo(config: &VdpDemoConfig) -> Result<VdpDemoResult> {
    let vdp = &config.vdp;
    vdp.validate()?;
    let reference = noisy_reference(vdp)?;
    let grid = Grid::uniform(vdp.kappa_domain.0, vdp.kappa_domain.1, config.grid_points)?;
    let f_grid: Vec<f64> = grid
        .points()
        .iter()
        .map(|&kappa| vdp_objective(kappa, &reference, vdp))
        .collect::<Result<_>>()?;

    // Initial design at the same relative positions as the benchmark's
    // {-5, 0, 5} in [-8, 8].
    let span = vdp.kappa_domain.1 - vdp.kappa_domain.0;
    let initial_points: Vec<f64> = [3.0 / 16.0, 0.5, 13.0 / 16.0]
        .iter()
        .map(|f| vdp.kappa_domain.0 + f * span)
        .collect();

    let run_config = |fixed: Option<f64>| RunConfig {
        grid: grid.spec(),
        gp: config.gp,
        acquisition: AcquisitionSpec::Efe {
            tau_sq_min: config.tau_sq_min,
            tau_sq_max: config.tau_sq_max,
            fixed_tau_sq: fixed,
        },
        initial_points: initial_points.clone(),
        iterations: config.iterations,
        // The frozen noisy reference already perturbs the cost; queries of
        // it are exact.
        obs_noise_std: 0.0,
        seed: vdp.seed,
    };

    let adaptive = run(&run_config(None), &f_grid)?;
    let fixed = run(&run_config(Some(config.fixed_tau_sq)), &f_grid)?;

    let band = |record: &RunRecord| -> Result<(Vec<f64>, Vec<f64>)> {
        let post = posterior(&fit(config.gp, final_dataset(record)?)?, &grid)?;
        let sigma = post.var_latent.iter().map(|v| v.sqrt()).collect();
        Ok((post.mu, sigma))
    };
    let (adaptive_mu, adaptive_sigma) = band(&adaptive)?;
    let (fixed_mu, fixed_sigma) = band(&fixed)?;

    Ok(VdpDemoResult {
        config: config.clone(),
        best_kappa_adaptive: best_queried(&adaptive),
        best_kappa_fixed: best_queried(&fixed),
        adaptive,
        fixed,
        plot: VdpPlotData {
            kappa: grid.points().to_vec(),
            true_cost: f_grid,
            adaptive_mu,
            adaptive_sigma,
            fixed_mu,
            fixed_sigma,
        },
    })
}

/// All observations of a run, in query order.
fn final_dataset(record: &RunRecord) -> Result<Dataset> {
    let mut data = Dataset::empty();
    for obs in &record.initial_observations {
        data.push(obs.x, obs.y);
    }
    for m in &record.iterations {
        data.push(m.selected_x, m.observed_y);
    }
    Ok(data)
}

/// Queried location with the best observed value, initial design included.
fn best_queried(record: &RunRecord) -> f64 {
    let mut best_x = record.initial_observations[0].x;
    let mut best_y = record.initial_observations[0].y;
    for obs in &record.initial_observations {
        if obs.y > best_y {
            best_y = obs.y;
            best_x = obs.x;
        }
    }
    for m in &record.iterations {
        if m.observed_y > best_y {
            best_y = m.observed_y;
            best_x = m.selected_x;
        }
    }
    best_x
}

/// Persist the demo: plot-ready CSV plus the paired records as JSON.
pub fn write_vdp_outputs(result: &VdpDemoResult, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut csv = String::from("kappa,true_cost,adaptive_mu,adaptive_sigma,fixed_mu,fixed_sigma\n");
    for i in 0..result.plot.kappa.len() {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            result.plot.kappa[i],
            result.plot.true_cost[i],
            result.plot.adaptive_mu[i],
            result.plot.adaptive_sigma[i],
            result.plot.fixed_mu[i],
            result.plot.fixed_sigma[i]
        )
        .expect("write to string");
    }
    write_file(&out_dir.join("vdp_plot.csv"), csv)?;
    write_json(&out_dir.join("vdp_demo.json"), result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn tiny_config() -> BenchmarkConfig {
        BenchmarkConfig {
            n_objectives: 2,
            methods: vec![AcquisitionSpec::Var, AcquisitionSpec::Ucb { beta: 2.0 }],
            grid: GridSpec {
                lower: -8.0,
                upper: 8.0,
                n: 60,
            },
            iterations: 3,
            workers: 1,
            ..BenchmarkConfig::default()
        }
    }

    #[test]
    fn single_run_benchmark_has_one_record() {
        let config = BenchmarkConfig {
            n_objectives: 1,
            methods: vec![AcquisitionSpec::Var],
            grid: GridSpec {
                lower: -8.0,
                upper: 8.0,
                n: 60,
            },
            iterations: 1,
            workers: 1,
            ..BenchmarkConfig::default()
        };
        let outcome = run_benchmark(&config).unwrap();
        assert_eq!(outcome.runs.len(), 1);
        assert_eq!(outcome.report.completed_runs, 1);
        assert_eq!(outcome.report.failed_runs, 0);
        assert_eq!(outcome.report.methods.len(), 1);
        assert_eq!(outcome.report.methods[0].completed, 1);
    }

    #[test]
    fn same_master_seed_gives_byte_identical_outputs() {
        let config = tiny_config();
        let a = run_benchmark(&config).unwrap();
        let b = run_benchmark(&config).unwrap();
        assert_eq!(summary_csv(&a.report), summary_csv(&b.report));
        assert_eq!(scatter_csv(&a.report), scatter_csv(&b.report));
        assert_eq!(a.runs, b.runs);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let serial = tiny_config();
        let parallel = BenchmarkConfig {
            workers: 4,
            ..tiny_config()
        };
        let a = run_benchmark(&serial).unwrap();
        let b = run_benchmark(&parallel).unwrap();
        assert_eq!(a.report, b.report);
    }

    #[test]
    fn methods_forced_onto_the_same_queries_see_identical_observations() {
        // Adaptive EFE with a collapsed range tau_min^2 == tau_max^2 scores
        // exactly like fixed EFE at that tau^2, so the two (distinct)
        // methods trace the same query sequence; the shared noise
        // addressing then guarantees identical observations.
        let config = BenchmarkConfig {
            n_objectives: 1,
            methods: vec![
                AcquisitionSpec::Efe {
                    tau_sq_min: 5.0,
                    tau_sq_max: 5.0,
                    fixed_tau_sq: None,
                },
                AcquisitionSpec::Efe {
                    tau_sq_min: 5.0,
                    tau_sq_max: 5.0,
                    fixed_tau_sq: Some(5.0),
                },
            ],
            grid: GridSpec {
                lower: -8.0,
                upper: 8.0,
                n: 80,
            },
            iterations: 8,
            workers: 1,
            ..BenchmarkConfig::default()
        };
        let outcome = run_benchmark(&config).unwrap();
        let var_run = &outcome.runs[0];
        let ucb_run = &outcome.runs[1];
        assert_eq!(
            var_run.record.initial_observations,
            ucb_run.record.initial_observations
        );
        for (a, b) in var_run
            .record
            .iterations
            .iter()
            .zip(&ucb_run.record.iterations)
        {
            assert_eq!(a.selected_x, b.selected_x);
            assert_eq!(a.observed_y, b.observed_y);
        }
    }

    #[test]
    fn changing_master_seed_changes_objectives_only() {
        let a = BenchmarkConfig::default();
        let b = BenchmarkConfig {
            master_seed: 1,
            ..BenchmarkConfig::default()
        };
        assert_ne!(a.objective_seed(0), b.objective_seed(0));
        // Sub-seeds are pure functions of (master, index).
        assert_eq!(
            a.objective_seed(7),
            BenchmarkConfig::default().objective_seed(7)
        );
    }

    #[test]
    fn outputs_round_trip_through_disk() {
        let config = tiny_config();
        let outcome = run_benchmark(&config).unwrap();
        let dir = tempdir().unwrap();
        write_outputs(&outcome, dir.path()).unwrap();

        let report = import_report(&dir.path().join("report.json")).unwrap();
        assert_eq!(report, outcome.report);

        let replayed = replay_report(dir.path()).unwrap();
        assert_eq!(replayed, outcome.report);

        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert!(summary.starts_with(SUMMARY_HEADER));
        assert_eq!(summary.lines().count(), 1 + config.methods.len());
        let scatter = fs::read_to_string(dir.path().join("scatter.csv")).unwrap();
        assert!(scatter.starts_with(SCATTER_HEADER));
        assert_eq!(scatter.lines().count(), 1 + outcome.runs.len());
    }

    #[test]
    fn failed_runs_are_excluded_and_counted() {
        // A noiseless GP with sub-ulp jitter: the first resample of a point
        // makes the kernel matrix singular and that run aborts. UCB with
        // beta = 0 resamples its own best observation immediately; VAR never
        // queries a zero-variance point and completes.
        let mut config = tiny_config();
        config.methods = vec![AcquisitionSpec::Var, AcquisitionSpec::Ucb { beta: 0.0 }];
        config.n_objectives = 1;
        config.iterations = 5;
        config.obs_noise_std = 0.0;
        config.gp.noise_variance = 0.0;
        config.gp.jitter = 1e-30;

        let outcome = run_benchmark(&config).unwrap();
        assert_eq!(outcome.report.completed_runs, 1);
        assert_eq!(outcome.report.failed_runs, 1);
        assert_eq!(outcome.failures.len(), 1);
        assert_eq!(outcome.failures[0].method, "UCB");
        assert!(outcome.failures[0].error.contains("factorization"));
        let var = outcome
            .report
            .methods
            .iter()
            .find(|m| m.method == "VAR")
            .unwrap();
        assert_eq!(var.completed, 1);
        let ucb = outcome
            .report
            .methods
            .iter()
            .find(|m| m.method == "UCB")
            .unwrap();
        assert_eq!(ucb.completed, 0);
    }

    #[test]
    fn duplicate_method_names_are_rejected() {
        let config = BenchmarkConfig {
            methods: vec![AcquisitionSpec::Var, AcquisitionSpec::Var],
            ..BenchmarkConfig::default()
        };
        assert!(matches!(config.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn vdp_demo_runs_and_persists() {
        let config = VdpDemoConfig {
            iterations: 6,
            grid_points: 80,
            ..VdpDemoConfig::default()
        };
        let result = run_vdp_demo(&config).unwrap();
        assert_eq!(result.adaptive.iterations.len(), 6);
        assert_eq!(result.fixed.iterations.len(), 6);
        assert_eq!(result.plot.kappa.len(), 80);
        assert!(result.plot.true_cost.iter().all(|&c| c <= 0.0));

        let dir = tempdir().unwrap();
        write_vdp_outputs(&result, dir.path()).unwrap();
        let plot = fs::read_to_string(dir.path().join("vdp_plot.csv")).unwrap();
        assert_eq!(plot.lines().count(), 1 + 80);
        let reread: VdpDemoResult = read_json(&dir.path().join("vdp_demo.json")).unwrap();
        assert_eq!(reread, result);
    }
}
