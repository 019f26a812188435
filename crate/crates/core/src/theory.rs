//! Numerical realizations of the structural results behind the EFE
//! acquisition: the LCB/UCB linearizations, the equivalence of the epistemic
//! term with expected information gain, the Kalman variance identity, and
//! the local quadratic model of the EFE maximizer with its bias.
//!
//! Everything here is a checkable procedure rather than a symbolic proof;
//! the `theory-check` subcommand runs them as regression tests.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::acquisition::epistemic_value;
use crate::error::{Error, Result};

/// Reference point and preference parameters at which an acquisition
/// objective `J(mu, sigma)` is linearized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizationPoint {
    pub mu0: f64,
    pub sigma0: f64,
    pub y_star: f64,
    pub tau_sq: f64,
    pub noise_var: f64,
}

impl LinearizationPoint {
    fn validate(&self) -> Result<()> {
        if !(self.sigma0 > 0.0 && self.tau_sq > 0.0 && self.noise_var >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need sigma0 > 0, tau_sq > 0, noise_var >= 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// First-order coefficients of `J ~ a mu + b sigma` at the reference point,
/// and the confidence-bound weight `beta` they induce when the regime
/// conditions of the corresponding linearization hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCoeffs {
    /// dJ/dmu at the reference.
    pub a: f64,
    /// dJ/dsigma at the reference.
    pub b: f64,
    pub beta: f64,
}

/// Pragmatic-only objective `((mu - y*)^2 + sigma^2 + sigma_n^2) / (2 tau^2)`.
pub fn j_pragmatic(pt: &LinearizationPoint, mu: f64, sigma: f64) -> f64 {
    let d = mu - pt.y_star;
    (d * d + sigma * sigma + pt.noise_var) / (2.0 * pt.tau_sq)
}

/// Full EFE objective in `(mu, sigma)`, up to terms constant in both
/// arguments: the epistemic part is written `-0.5 ln(sigma_n^2 + sigma^2)`
/// (dropping `+0.5 ln(sigma_n^2)`), which leaves every derivative unchanged
/// and stays finite for noiseless configurations.
pub fn j_full(pt: &LinearizationPoint, mu: f64, sigma: f64) -> f64 {
    j_pragmatic(pt, mu, sigma) - 0.5 * (pt.noise_var + sigma * sigma).ln()
}

/// Linearize the pragmatic-only objective: minimizing it is locally
/// equivalent to maximizing `mu - beta sigma` when `y* > mu0`.
pub fn lcb_linearization(pt: &LinearizationPoint) -> Result<LinearCoeffs> {
    pt.validate()?;
    let a = (pt.mu0 - pt.y_star) / pt.tau_sq;
    let b = pt.sigma0 / pt.tau_sq;
    if a >= 0.0 {
        return Err(Error::SignConditionViolated(format!(
            "LCB regime needs y* > mu0, got y* = {}, mu0 = {}",
            pt.y_star, pt.mu0
        )));
    }
    Ok(LinearCoeffs {
        a,
        b,
        beta: b / a.abs(),
    })
}

/// Linearize the full EFE objective: minimizing it is locally equivalent to
/// maximizing `mu + beta sigma` when `mu0 < y*` and
/// `sigma_n^2 + sigma0^2 <= tau^2` (equality degenerates to greedy mean
/// maximization, beta = 0).
pub fn ucb_linearization(pt: &LinearizationPoint) -> Result<LinearCoeffs> {
    pt.validate()?;
    let s0 = pt.noise_var + pt.sigma0 * pt.sigma0;
    let a = (pt.mu0 - pt.y_star) / pt.tau_sq;
    let b = pt.sigma0 * (1.0 / pt.tau_sq - 1.0 / s0);
    if a >= 0.0 {
        return Err(Error::SignConditionViolated(format!(
            "UCB regime needs mu0 < y*, got mu0 = {}, y* = {}",
            pt.mu0, pt.y_star
        )));
    }
    if s0 > pt.tau_sq {
        return Err(Error::SignConditionViolated(format!(
            "UCB regime needs sigma_n^2 + sigma0^2 <= tau^2, got {} > {}",
            s0, pt.tau_sq
        )));
    }
    Ok(LinearCoeffs {
        a,
        b,
        beta: (-b) / (-a),
    })
}

/// Kalman variance identity `E[(mu+ - mu)^2] = sigma^4 / (sigma^2 +
/// sigma_n^2) = sigma^2 - sigma+^2`: the analytic value next to a Monte Carlo
/// estimate over fantasy observations.
pub fn kalman_identity_check(
    var_latent: f64,
    noise_var: f64,
    n_samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, f64)> {
    if !(var_latent >= 0.0 && noise_var > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "need var_latent >= 0 and noise_var > 0, got ({var_latent}, {noise_var})"
        )));
    }
    let s = var_latent + noise_var;
    let analytic = var_latent * var_latent / s;
    let gain = var_latent / s;
    let mut acc = 0.0;
    for _ in 0..n_samples {
        let z: f64 = StandardNormal.sample(rng);
        let shift = gain * s.sqrt() * z;
        acc += shift * shift;
    }
    Ok((analytic, acc / n_samples as f64))
}

/// Second-order local model of the posterior around the objective's
/// maximizer: latent variance `v0`, its first two derivatives `g`, `v2`, the
/// objective curvature `m`, and the preference variance. The EFE maximizer's
/// offset from the true optimum turns out not to depend on `m` at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalExpansion {
    /// Curvature of the objective at its maximizer.
    pub m: f64,
    /// Latent variance at the maximizer, `sigma^2(x*)`.
    pub v0: f64,
    /// First derivative of the latent variance at the maximizer.
    pub g: f64,
    /// Second derivative of the latent variance at the maximizer.
    pub v2: f64,
    pub noise_var: f64,
    pub tau_sq: f64,
}

impl LocalExpansion {
    /// Predictive variance at the maximizer, `S = v0 + sigma_n^2`.
    pub fn s(&self) -> f64 {
        self.v0 + self.noise_var
    }

    /// `Delta = 1/tau^2 - 1/S`; zero exactly at the unbiased setting.
    pub fn delta(&self) -> f64 {
        1.0 / self.tau_sq - 1.0 / self.s()
    }

    fn validate(&self) -> Result<()> {
        if !(self.v0 > 0.0 && self.s() > 0.0 && self.tau_sq > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need v0 > 0, S > 0, tau_sq > 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Coefficients of the quadratic model `a_EFE(h) = C + L h + Q h^2` of the
/// (negated) EFE around the maximizer: `L = -g Delta / 2`,
/// `Q = -v2 Delta / 4 - g^2 / (4 S^2)`.
pub fn quadratic_model_coeffs(exp: &LocalExpansion) -> (f64, f64) {
    let s = exp.s();
    let delta = exp.delta();
    let l = -exp.g * delta / 2.0;
    let q = -exp.v2 * delta / 4.0 - exp.g * exp.g / (4.0 * s * s);
    (l, q)
}

/// Offset `h = x_EFE - x*` of the EFE maximizer from the true optimum under
/// the quadratic model: the stationary point `-L / (2Q)`, in closed form
/// `-g Delta / (v2 Delta + g^2 / S^2)`. Zero iff `Delta = 0` (that is,
/// `tau^2 = sigma^2(x*) + sigma_n^2`) or `g = 0`.
pub fn efe_bias(exp: &LocalExpansion) -> Result<f64> {
    exp.validate()?;
    let s = exp.s();
    let delta = exp.delta();
    let denom = exp.v2 * delta + exp.g * exp.g / (s * s);
    if denom.abs() < 1e-14 {
        return Err(Error::DegenerateQuadratic(format!(
            "v2 Delta + g^2/S^2 = {denom:.3e}; no isolated stationary point"
        )));
    }
    Ok(-exp.g * delta / denom)
}

/// The epistemic value next to the mutual information `I(f(x); y | x)`
/// computed from the two Gaussian entropies; the two routes must agree.
pub fn eig_identity_check(var_latent: f64, noise_var: f64) -> Result<(f64, f64)> {
    if var_latent <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "entropies are finite only for var_latent > 0, got {var_latent}"
        )));
    }
    let epistemic = epistemic_value(var_latent, noise_var)?;
    let var_post = var_latent * noise_var / (var_latent + noise_var);
    let tau_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    let h_prior = 0.5 * (tau_e * var_latent).ln();
    let h_post = 0.5 * (tau_e * var_post).ln();
    Ok((epistemic, h_prior - h_post))
}
