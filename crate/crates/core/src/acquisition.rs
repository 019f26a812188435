//! Acquisition functions over a grid posterior.
//!
//! Every scoring function maps a [`Posterior`] (plus per-method state) to a
//! per-grid-point score with a uniform "higher is better" convention; the
//! selected query is the smallest index attaining the maximum score.
//!
//! The expected-free-energy acquisition scores a candidate `x` by
//!
//! ```text
//! G(x) = ((mu(x) - y*)^2 + sigma_y^2(x)) / (2 tau^2)     pragmatic value
//!        - 0.5 ln(1 + sigma^2(x) / sigma_n^2)            epistemic value
//! ```
//!
//! and selects the minimizer of `G` (scores are `-G`). The preference
//! variance `tau^2` balances the two terms: small `tau^2` exploits, large
//! `tau^2` explores. In adaptive mode `tau^2` is set per grid point from the
//! local curvature of the posterior mean and the latent variance,
//!
//! ```text
//! tau_i^-2 = |mu''(x)| + 1 / sigma^2(x)
//! tau^2(x) = tau_min^2 + (tau_max^2 - tau_min^2) * tau_i^2 / max(tau_i^2)
//! ```
//!
//! which drives resampling of sharply curved, well-resolved regions and
//! exploration of flat, uncertain ones.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::{sample_posterior, GpModel, Posterior};
use crate::grid::Grid;

/// Variance floor applied before any reciprocal of the latent variance.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// Gaussian outcome preference `p(y) = N(y*, tau^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfePreference {
    /// Preferred observation.
    pub y_star: f64,
    /// Exploitation end of the adaptive range.
    pub tau_sq_min: f64,
    /// Exploration end of the adaptive range.
    pub tau_sq_max: f64,
    pub mode: TauMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauMode {
    /// Curvature-aware per-point `tau^2`.
    Adaptive,
    /// A single `tau^2` for every grid point.
    Fixed(f64),
}

impl EfePreference {
    pub fn adaptive(y_star: f64, tau_sq_min: f64, tau_sq_max: f64) -> Result<Self> {
        if !(tau_sq_min > 0.0 && tau_sq_min <= tau_sq_max) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < tau_sq_min <= tau_sq_max, got [{tau_sq_min}, {tau_sq_max}]"
            )));
        }
        Ok(EfePreference {
            y_star,
            tau_sq_min,
            tau_sq_max,
            mode: TauMode::Adaptive,
        })
    }

    pub fn fixed(y_star: f64, tau_sq: f64) -> Result<Self> {
        if !tau_sq.is_finite() || tau_sq <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "fixed tau_sq must be positive, got {tau_sq}"
            )));
        }
        Ok(EfePreference {
            y_star,
            tau_sq_min: tau_sq,
            tau_sq_max: tau_sq,
            mode: TauMode::Fixed(tau_sq),
        })
    }
}

/// Declarative description of an acquisition method, as read from run
/// configurations. `y*` for EFE is not configurable: the engine plugs in
/// the posterior-mean incumbent each iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AcquisitionSpec {
    #[serde(rename = "EFE")]
    Efe {
        tau_sq_min: f64,
        tau_sq_max: f64,
        /// When set, run EFE with this fixed `tau^2` instead of the
        /// curvature-aware update.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fixed_tau_sq: Option<f64>,
    },
    #[serde(rename = "UCB")]
    Ucb { beta: f64 },
    #[serde(rename = "EI")]
    Ei,
    #[serde(rename = "PI")]
    Pi { xi: f64 },
    #[serde(rename = "VAR")]
    Var,
    #[serde(rename = "TS")]
    Ts,
    #[serde(rename = "KG")]
    Kg,
}

impl AcquisitionSpec {
    /// Short name used for output directories and report rows.
    pub fn name(&self) -> &'static str {
        match self {
            AcquisitionSpec::Efe {
                fixed_tau_sq: None, ..
            } => "EFE",
            AcquisitionSpec::Efe {
                fixed_tau_sq: Some(_),
                ..
            } => "EFE-fixed",
            AcquisitionSpec::Ucb { .. } => "UCB",
            AcquisitionSpec::Ei => "EI",
            AcquisitionSpec::Pi { .. } => "PI",
            AcquisitionSpec::Var => "VAR",
            AcquisitionSpec::Ts => "TS",
            AcquisitionSpec::Kg => "KG",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AcquisitionSpec::Efe {
                tau_sq_min,
                tau_sq_max,
                fixed_tau_sq,
            } => {
                EfePreference::adaptive(0.0, tau_sq_min, tau_sq_max)?;
                if let Some(t) = fixed_tau_sq {
                    EfePreference::fixed(0.0, t)?;
                }
                Ok(())
            }
            AcquisitionSpec::Ucb { beta } if !beta.is_finite() || beta < 0.0 => Err(
                Error::InvalidConfig(format!("UCB beta must be >= 0, got {beta}")),
            ),
            AcquisitionSpec::Pi { xi } if !xi.is_finite() || xi < 0.0 => Err(Error::InvalidConfig(
                format!("PI xi must be >= 0, got {xi}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Scores over the grid plus the selected index. The argmax is always the
/// smallest index attaining the maximum, so identical inputs give identical
/// selections.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    pub argmax_index: usize,
}

impl ScoreVector {
    /// Panics on non-finite scores; every scoring rule below is bounded for
    /// validated inputs, so a NaN here is a caller bug, not a data condition.
    pub fn new(scores: Vec<f64>) -> Self {
        assert!(!scores.is_empty(), "empty score vector");
        let mut argmax = 0;
        let mut best = f64::NEG_INFINITY;
        for (i, &s) in scores.iter().enumerate() {
            assert!(s.is_finite(), "non-finite score {s} at index {i}");
            if s > best {
                best = s;
                argmax = i;
            }
        }
        ScoreVector {
            scores,
            argmax_index: argmax,
        }
    }
}

/// Expected negative log-preference of the predictive distribution at one
/// point, with the additive constant `0.5 ln(2 pi tau^2)` dropped:
/// `((mu - y*)^2 + sigma_y^2) / (2 tau^2)`.
pub fn pragmatic_value(mu: f64, var_predictive: f64, y_star: f64, tau_sq: f64) -> f64 {
    debug_assert!(tau_sq > 0.0 && var_predictive >= 0.0);
    let d = mu - y_star;
    (d * d + var_predictive) / (2.0 * tau_sq)
}

/// Expected KL between the point posterior and prior after an observation:
/// `0.5 ln(1 + sigma^2 / sigma_n^2)`, the expected information gain.
pub fn epistemic_value(var_latent: f64, noise_var: f64) -> Result<f64> {
    if noise_var <= 0.0 {
        return Err(Error::NoiseVarZero);
    }
    debug_assert!(var_latent >= 0.0);
    Ok(0.5 * (1.0 + var_latent / noise_var).ln())
}

/// Raw per-point preference variance of the curvature update,
/// `tau_i^2 = 1 / (|mu''(x)| + 1 / sigma^2(x))`, before rescaling.
pub fn curvature_tau_i_sq(posterior: &Posterior) -> Vec<f64> {
    (0..posterior.len())
        .map(|k| {
            let var = posterior.var_latent[k].max(VARIANCE_FLOOR);
            1.0 / (posterior.mu_dd[k].abs() + 1.0 / var)
        })
        .collect()
}

/// Curvature-aware preference variance per grid point: `tau_i^2` rescaled
/// into `[tau_min^2, tau_max^2]` by its ratio to the maximum over the grid.
pub fn adaptive_tau_sq(posterior: &Posterior, pref: &EfePreference) -> Vec<f64> {
    let tau_i = curvature_tau_i_sq(posterior);
    let max = tau_i.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return vec![pref.tau_sq_max; posterior.len()];
    }
    // The ratio is taken first so the argmax gets exactly tau_sq_max and
    // the range containment holds to the last ulp.
    tau_i
        .into_iter()
        .map(|t| pref.tau_sq_min + (pref.tau_sq_max - pref.tau_sq_min) * (t / max))
        .collect()
}

/// Expected-free-energy scores: `-G(x)`, so the argmax selects the minimizer
/// of `G`.
pub fn efe_scores(
    posterior: &Posterior,
    pref: &EfePreference,
    noise_var: f64,
) -> Result<ScoreVector> {
    let tau: Vec<f64> = match pref.mode {
        TauMode::Adaptive => adaptive_tau_sq(posterior, pref),
        TauMode::Fixed(t) => vec![t; posterior.len()],
    };
    let mut scores = Vec::with_capacity(posterior.len());
    for (k, &tau_sq) in tau.iter().enumerate() {
        let prag = pragmatic_value(
            posterior.mu[k],
            posterior.var_predictive[k],
            pref.y_star,
            tau_sq,
        );
        let epi = epistemic_value(posterior.var_latent[k], noise_var)?;
        scores.push(epi - prag);
    }
    Ok(ScoreVector::new(scores))
}

/// `mu + beta sigma`, with the latent standard deviation.
pub fn ucb_scores(posterior: &Posterior, beta: f64) -> ScoreVector {
    ScoreVector::new(
        (0..posterior.len())
            .map(|k| posterior.mu[k] + beta * posterior.var_latent[k].sqrt())
            .collect(),
    )
}

/// Expected improvement over `incumbent`, with the latent standard deviation.
pub fn ei_scores(posterior: &Posterior, incumbent: f64) -> ScoreVector {
    ScoreVector::new(
        (0..posterior.len())
            .map(|k| {
                let sigma = posterior.var_latent[k].sqrt();
                let d = posterior.mu[k] - incumbent;
                if sigma == 0.0 {
                    d.max(0.0)
                } else {
                    let z = d / sigma;
                    sigma * norm_pdf(z) + d * norm_cdf(z)
                }
            })
            .collect(),
    )
}

/// Probability of improving on `incumbent` by at least `xi`.
pub fn pi_scores(posterior: &Posterior, incumbent: f64, xi: f64) -> ScoreVector {
    ScoreVector::new(
        (0..posterior.len())
            .map(|k| {
                let sigma = posterior.var_latent[k].sqrt();
                let d = posterior.mu[k] - incumbent - xi;
                if sigma == 0.0 {
                    if d > 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    norm_cdf(d / sigma)
                }
            })
            .collect(),
    )
}

/// Pure exploration: the latent standard deviation itself.
pub fn var_scores(posterior: &Posterior) -> ScoreVector {
    ScoreVector::new(posterior.var_latent.iter().map(|v| v.sqrt()).collect())
}

/// Thompson sampling: one joint posterior draw is the score vector.
pub fn ts_scores(model: &GpModel, grid: &Grid, rng: &mut ChaCha8Rng) -> Result<ScoreVector> {
    Ok(ScoreVector::new(sample_posterior(model, grid, rng)?))
}

/// One-step knowledge gradient on the grid under the marginal fantasy
/// update: observing `y ~ N(mu(x), sigma^2(x) + sigma_n^2)` moves the mean at
/// the queried point by `K (y - mu(x))` with `K = sigma^2 / (sigma^2 +
/// sigma_n^2)` and leaves the other grid means unchanged, so
///
/// ```text
/// KG(x) = E[max(M_-x, mu(x) + b Z)] - max_i mu_i,   b = sigma^2(x) / sqrt(S)
/// ```
///
/// with `M_-x` the best mean elsewhere. The expectation has the closed form
/// `b psi(z)` with `psi(z) = z Phi(z) + phi(z)`.
pub fn kg_scores(posterior: &Posterior, noise_var: f64) -> ScoreVector {
    let n = posterior.len();
    if n == 1 {
        // A mean-preserving update cannot improve the maximum over itself.
        return ScoreVector::new(vec![0.0]);
    }

    // Best and second-best means, for O(1) leave-one-out maxima.
    let mut best_idx = 0;
    for k in 1..n {
        if posterior.mu[k] > posterior.mu[best_idx] {
            best_idx = k;
        }
    }
    let best = posterior.mu[best_idx];
    let mut second = f64::NEG_INFINITY;
    for k in 0..n {
        if k != best_idx && posterior.mu[k] > second {
            second = posterior.mu[k];
        }
    }

    let scores = (0..n)
        .map(|k| {
            let var = posterior.var_latent[k];
            if var <= 0.0 {
                return 0.0;
            }
            let s = var + noise_var;
            let b = var / s.sqrt();
            let others = if k == best_idx { second } else { best };
            // E[max(c, a + bZ)] - max(a, c) = b * psi(-|c - a| / b).
            let z = -((others - posterior.mu[k]) / b).abs();
            (b * (z * norm_cdf(z) + norm_pdf(z))).max(0.0)
        })
        .collect();
    ScoreVector::new(scores)
}

pub(crate) fn norm_pdf(z: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

pub(crate) fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}
