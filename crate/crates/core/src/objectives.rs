//! Benchmark objective families: randomized sinusoid mixtures on `[-8, 8]`
//! and the Van der Pol parameter-identification cost, plus the Gaussian
//! observation channel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding;

/// Domain shared by all sinusoid objectives.
pub const SINUSOID_DOMAIN: (f64, f64) = (-8.0, 8.0);

/// Number of sinusoidal/cosinusoidal components per objective.
pub const SINUSOID_COMPONENTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Waveform {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinusoidComponent {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
    pub waveform: Waveform,
}

/// A random multimodal 1-D objective: the sum of ten sin/cos components with
/// amplitudes in `[0.2, 1]`, frequencies in `[0.2, 1.5]` and phases in
/// `[0, 2 pi)`. Regenerating from the same seed reproduces the exact
/// component list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinusoidObjective {
    pub seed: u64,
    pub components: Vec<SinusoidComponent>,
}

/// Draw a fresh objective from `seed`.
pub fn generate_sinusoid(seed: u64) -> SinusoidObjective {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let components = (0..SINUSOID_COMPONENTS)
        .map(|_| SinusoidComponent {
            amplitude: rng.random_range(0.2..1.0),
            frequency: rng.random_range(0.2..1.5),
            phase: rng.random_range(0.0..std::f64::consts::TAU),
            waveform: if rng.random::<bool>() {
                Waveform::Sin
            } else {
                Waveform::Cos
            },
        })
        .collect();
    SinusoidObjective { seed, components }
}

/// Evaluate the objective at `x` inside the domain.
pub fn evaluate_objective(obj: &SinusoidObjective, x: f64) -> Result<f64> {
    let (lower, upper) = SINUSOID_DOMAIN;
    if !(x >= lower && x <= upper) {
        return Err(Error::DomainViolation { x, lower, upper });
    }
    Ok(obj
        .components
        .iter()
        .map(|c| {
            let arg = c.frequency * x + c.phase;
            c.amplitude
                * match c.waveform {
                    Waveform::Sin => arg.sin(),
                    Waveform::Cos => arg.cos(),
                }
        })
        .sum())
}

/// Additive Gaussian observation noise `y = f(x) + eps`,
/// `eps ~ N(0, sigma_n^2)`, with a reproducible draw sequence.
#[derive(Debug, Clone)]
pub struct ObservationChannel {
    noise_std: f64,
    rng: ChaCha8Rng,
}

impl ObservationChannel {
    pub fn new(noise_std: f64, seed: u64) -> Self {
        ObservationChannel {
            noise_std,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn observe(&mut self, f_value: f64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        f_value + self.noise_std * z
    }
}

/// Settings of the Van der Pol identification problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VdpConfig {
    /// True damping parameter that generated the reference trajectory.
    pub kappa_true: f64,
    /// Initial position and velocity.
    pub x0: f64,
    pub v0: f64,
    /// Integrator step / sampling time, seconds.
    pub dt: f64,
    pub t_end: f64,
    /// Steady-state window over which the cost is evaluated.
    pub window: (f64, f64),
    /// Noise added to the reference trajectory.
    pub obs_noise_std: f64,
    /// Search interval for kappa.
    pub kappa_domain: (f64, f64),
    pub seed: u64,
}

impl Default for VdpConfig {
    fn default() -> Self {
        VdpConfig {
            kappa_true: 3.0,
            x0: 0.5,
            v0: 0.0,
            dt: 0.05,
            t_end: 60.0,
            window: (20.0, 60.0),
            obs_noise_std: 0.1,
            kappa_domain: (0.5, 5.0),
            seed: 0,
        }
    }
}

impl VdpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0) {
            return Err(Error::InvalidConfig("dt and t_end must be positive".into()));
        }
        if !(self.window.0 >= 0.0 && self.window.0 < self.window.1 && self.window.1 <= self.t_end) {
            return Err(Error::InvalidConfig(format!(
                "window {:?} must lie inside [0, {}]",
                self.window, self.t_end
            )));
        }
        if self.kappa_domain.0 >= self.kappa_domain.1
            || self.kappa_domain.0.is_nan()
            || self.kappa_domain.1.is_nan()
        {
            return Err(Error::InvalidConfig(format!(
                "empty kappa domain {:?}",
                self.kappa_domain
            )));
        }
        Ok(())
    }

    /// Indices of the trajectory samples falling inside the cost window.
    fn window_indices(&self) -> (usize, usize) {
        let eps = 1e-9;
        let first = ((self.window.0 / self.dt) - eps).ceil() as usize;
        let last = ((self.window.1 / self.dt) + eps).floor() as usize;
        (first, last)
    }
}

/// Integrate `x'' - kappa (1 - x^2) x' + x = 0` with fixed-step RK4 from
/// `(x0, v0)`; returns the position at every sample `t = k dt`, including
/// `t = 0`. Errors with [`Error::NumericalBlowup`] once any state magnitude
/// exceeds `1e6` (the step size cannot resolve that stiff a regime).
pub fn simulate_vdp(kappa: f64, cfg: &VdpConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if !kappa.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "kappa must be finite, got {kappa}"
        )));
    }

    let deriv = |x: f64, v: f64| (v, kappa * (1.0 - x * x) * v - x);
    let steps = (cfg.t_end / cfg.dt + 0.5).floor() as usize;
    let h = cfg.dt;
    let (mut x, mut v) = (cfg.x0, cfg.v0);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(x);
    for k in 0..steps {
        let (k1x, k1v) = deriv(x, v);
        let (k2x, k2v) = deriv(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
        let (k3x, k3v) = deriv(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
        let (k4x, k4v) = deriv(x + h * k3x, v + h * k3v);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        let magnitude = x.abs().max(v.abs());
        // NaN must trip the guard as well.
        if magnitude > 1e6 || magnitude.is_nan() {
            return Err(Error::NumericalBlowup {
                t: (k + 1) as f64 * h,
                magnitude,
            });
        }
        out.push(x);
    }
    Ok(out)
}

/// Reference trajectory at the true parameter with observation noise added
/// to every sample.
pub fn noisy_reference(cfg: &VdpConfig) -> Result<Vec<f64>> {
    let clean = simulate_vdp(cfg.kappa_true, cfg)?;
    let mut rng = seeding::stream_rng(cfg.seed, &[seeding::stream::REFERENCE]);
    Ok(clean
        .into_iter()
        .map(|x| {
            let z: f64 = StandardNormal.sample(&mut rng);
            x + cfg.obs_noise_std * z
        })
        .collect())
}

/// Negative mean-squared error between the trajectory simulated at `kappa`
/// and the observed reference, over the steady-state window only.
pub fn vdp_objective(kappa: f64, reference: &[f64], cfg: &VdpConfig) -> Result<f64> {
    let sim = simulate_vdp(kappa, cfg)?;
    if reference.len() != sim.len() {
        return Err(Error::InvalidConfig(format!(
            "reference has {} samples, simulation {}",
            reference.len(),
            sim.len()
        )));
    }
    let (first, last) = cfg.window_indices();
    let mut acc = 0.0;
    for i in first..=last {
        let d = sim[i] - reference[i];
        acc += d * d;
    }
    Ok(-acc / (last - first + 1) as f64)
}
