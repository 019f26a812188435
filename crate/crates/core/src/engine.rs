//! Sequential Bayesian-optimization loop: observe the initial design, then
//! repeatedly fit the GP, score the acquisition over the grid, query the
//! argmax through the noise channel, and append.
//!
//! The optimizer itself never reads the true objective; the harness hands per
//! grid-point ground-truth values to `run` only so it can compute the
//! out-of-band metrics (simple regret, GP regression error) after each
//! iteration. Selection happens on the full grid, including already-queried
//! points: resampling is allowed and expected near optima.
//!
//! Observation noise is addressed, not streamed: the draw for evaluation `t`
//! at grid index `j` depends only on `(seed, t, j)`, so any two methods with
//! the same seed that query the same point at the same step see the same
//! noisy value.

use serde::{Deserialize, Serialize};

use crate::acquisition::{
    adaptive_tau_sq, curvature_tau_i_sq, efe_scores, ei_scores, kg_scores, pi_scores, ts_scores,
    ucb_scores, var_scores, AcquisitionSpec, EfePreference, ScoreVector, TauMode,
};
use crate::error::{Error, Result};
use crate::gp::{fit, posterior, Dataset, GpConfig, GpModel, Posterior};
use crate::grid::{Grid, GridSpec};
use crate::seeding::{self, stream};

/// Full description of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub gp: GpConfig,
    pub acquisition: AcquisitionSpec,
    /// Initial design; each point is snapped to its nearest grid node so
    /// that every observation (and hence every recommendation) lives on the
    /// evaluation grid.
    pub initial_points: Vec<f64>,
    pub iterations: usize,
    pub obs_noise_std: f64,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.gp.validate()?;
        self.acquisition.validate()?;
        let grid = self.grid.build()?;
        if self.initial_points.is_empty() {
            return Err(Error::InvalidConfig(
                "initial_points must be nonempty".into(),
            ));
        }
        for &x in &self.initial_points {
            if !(x >= grid.lower() && x <= grid.upper()) {
                return Err(Error::InvalidConfig(format!(
                    "initial point {x} outside grid bounds [{}, {}]",
                    grid.lower(),
                    grid.upper()
                )));
            }
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be >= 1".into()));
        }
        if !(self.obs_noise_std.is_finite() && self.obs_noise_std >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "obs_noise_std must be >= 0, got {}",
                self.obs_noise_std
            )));
        }
        Ok(())
    }
}

/// Per-iteration metrics, recorded after the new observation is absorbed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationMetrics {
    pub selected_x: f64,
    pub observed_y: f64,
    /// Queried location with the largest posterior mean.
    pub incumbent_x: f64,
    /// True objective at the incumbent.
    pub incumbent_objective: f64,
    pub simple_regret: f64,
    pub gp_mse: f64,
    /// Preference variance at the selected point (EFE runs only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_sq_selected: Option<f64>,
}

/// A single query and its (possibly noisy) observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub x: f64,
    pub y: f64,
}

/// Everything a run produced; a pure function of `(RunConfig, objective)`.
/// Together with the config (and the serialized objective, for benchmark
/// runs) this is enough to replay the run's dataset exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: RunConfig,
    /// The initial design as observed through the noise channel.
    pub initial_observations: Vec<Observation>,
    pub iterations: Vec<IterationMetrics>,
}

impl RunRecord {
    /// Metrics at iteration end.
    pub fn final_metrics(&self) -> &IterationMetrics {
        self.iterations
            .last()
            .expect("iterations >= 1 is validated")
    }
}

/// Run the loop against ground-truth values `f_grid` aligned with the grid.
pub fn run(config: &RunConfig, f_grid: &[f64]) -> Result<RunRecord> {
    config.validate()?;
    let grid = config.grid.build()?;
    if f_grid.len() != grid.len() {
        return Err(Error::InvalidConfig(format!(
            "objective has {} values for a {}-point grid",
            f_grid.len(),
            grid.len()
        )));
    }
    let f_max = f_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !f_max.is_finite() {
        return Err(Error::InvalidConfig(
            "objective values must be finite".into(),
        ));
    }

    let mut data = Dataset::empty();
    let mut eval_index = 0u64;
    let observe = |data: &mut Dataset, grid_idx: usize, eval_index: u64| {
        let f = f_grid[grid_idx];
        let y = if config.obs_noise_std > 0.0 {
            f + config.obs_noise_std
                * seeding::normal_draw(config.seed, &[stream::NOISE, eval_index, grid_idx as u64])
        } else {
            f
        };
        data.push(grid.points()[grid_idx], y);
    };

    for &x in &config.initial_points {
        observe(&mut data, grid.nearest_index(x), eval_index);
        eval_index += 1;
    }
    let initial_observations: Vec<Observation> = data
        .xs()
        .iter()
        .zip(data.ys())
        .map(|(&x, &y)| Observation { x, y })
        .collect();

    let mut ts_rng = seeding::stream_rng(config.seed, &[stream::ACQUISITION]);
    let mut efe_tau_hist_max = 0.0_f64;

    let mut model = fit(config.gp, data.clone())?;
    let mut post = posterior(&model, &grid)?;
    let mut iterations = Vec::with_capacity(config.iterations);

    for _ in 0..config.iterations {
        let (scores, tau) = score_acquisition(
            &config.acquisition,
            &post,
            &model,
            &grid,
            &data,
            &mut ts_rng,
            &mut efe_tau_hist_max,
        )?;
        let idx = scores.argmax_index;

        observe(&mut data, idx, eval_index);
        eval_index += 1;
        debug_assert_eq!(
            data.len(),
            config.initial_points.len() + iterations.len() + 1
        );

        model = fit(config.gp, data.clone())?;
        post = posterior(&model, &grid)?;

        let (incumbent_x, _) = incumbent(&data, &post, &grid)?;
        let inc_idx = grid.nearest_index(incumbent_x);
        iterations.push(IterationMetrics {
            selected_x: grid.points()[idx],
            observed_y: *data.ys().last().expect("just pushed"),
            incumbent_x,
            incumbent_objective: f_grid[inc_idx],
            simple_regret: f_max - f_grid[inc_idx],
            gp_mse: gp_mse(&post, f_grid),
            tau_sq_selected: tau.map(|t| t[idx]),
        });
    }

    Ok(RunRecord {
        config: config.clone(),
        initial_observations,
        iterations,
    })
}

/// Score one acquisition over the grid. Returns the per-point preference
/// variance alongside for EFE, so the engine can log it.
///
/// For adaptive EFE the curvature update is normalized by the geometric
/// mean of the current grid maximum of `tau_i^2` and its running maximum
/// over the run. Early on the two coincide and the map spans the full
/// `[tau_min^2, tau_max^2]` range; as the posterior sharpens everywhere,
/// the map slides toward the exploitation end instead of being fully
/// re-stretched each iteration, so the run finishes by resampling
/// (denoising) the candidate optima it has found. Equivalently, the
/// per-grid rescaling runs with an effective upper bound shrunk by
/// `sqrt(max(tau_i^2) / hist_max)`.
fn score_acquisition(
    spec: &AcquisitionSpec,
    post: &Posterior,
    model: &GpModel,
    grid: &Grid,
    data: &Dataset,
    ts_rng: &mut rand_chacha::ChaCha8Rng,
    efe_tau_hist_max: &mut f64,
) -> Result<(ScoreVector, Option<Vec<f64>>)> {
    match *spec {
        AcquisitionSpec::Efe {
            tau_sq_min,
            tau_sq_max,
            fixed_tau_sq,
        } => {
            // The preferred observation is the plug-in posterior-mean
            // incumbent over the grid.
            let y_star = post.mu.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let pref = match fixed_tau_sq {
                None => {
                    let grid_max = curvature_tau_i_sq(post).into_iter().fold(0.0_f64, f64::max);
                    *efe_tau_hist_max = efe_tau_hist_max.max(grid_max);
                    let ratio = if *efe_tau_hist_max > 0.0 {
                        (grid_max / *efe_tau_hist_max).sqrt()
                    } else {
                        1.0
                    };
                    let tau_sq_max_eff = tau_sq_min + (tau_sq_max - tau_sq_min) * ratio;
                    EfePreference::adaptive(y_star, tau_sq_min, tau_sq_max_eff)?
                }
                Some(t) => EfePreference::fixed(y_star, t)?,
            };
            let tau = match pref.mode {
                TauMode::Adaptive => adaptive_tau_sq(post, &pref),
                TauMode::Fixed(t) => vec![t; post.len()],
            };
            let scores = efe_scores(post, &pref, model.config().noise_variance)?;
            Ok((scores, Some(tau)))
        }
        AcquisitionSpec::Ucb { beta } => Ok((ucb_scores(post, beta), None)),
        AcquisitionSpec::Ei => {
            let (_, best_mu) = incumbent(data, post, grid)?;
            Ok((ei_scores(post, best_mu), None))
        }
        AcquisitionSpec::Pi { xi } => {
            let (_, best_mu) = incumbent(data, post, grid)?;
            Ok((pi_scores(post, best_mu, xi), None))
        }
        AcquisitionSpec::Var => Ok((var_scores(post), None)),
        AcquisitionSpec::Ts => Ok((ts_scores(model, grid, ts_rng)?, None)),
        AcquisitionSpec::Kg => Ok((kg_scores(post, model.config().noise_variance), None)),
    }
}

/// The queried location with the largest posterior mean (robust to
/// observation noise), with ties broken by earliest query. Returns the
/// location and its mean.
pub fn incumbent(data: &Dataset, post: &Posterior, grid: &Grid) -> Result<(f64, f64)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut best_x = data.xs()[0];
    let mut best_mu = post.mu[grid.nearest_index(best_x)];
    for &x in &data.xs()[1..] {
        let mu = post.mu[grid.nearest_index(x)];
        if mu > best_mu {
            best_mu = mu;
            best_x = x;
        }
    }
    Ok((best_x, best_mu))
}

/// Gap between the grid maximum of the objective and its value at the
/// recommendation.
pub fn simple_regret(f_grid: &[f64], grid: &Grid, x_hat: f64) -> f64 {
    let f_max = f_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    f_max - f_grid[grid.nearest_index(x_hat)]
}

/// Mean squared deviation between the posterior mean and the objective over
/// the grid.
pub fn gp_mse(post: &Posterior, f_grid: &[f64]) -> f64 {
    let acc: f64 = post
        .mu
        .iter()
        .zip(f_grid)
        .map(|(m, f)| (m - f) * (m - f))
        .sum();
    acc / f_grid.len() as f64
}
