//! Bayesian optimization built around an expected-free-energy acquisition
//! function with a curvature-aware adaptive preference variance, alongside
//! the classical acquisitions (UCB, EI, PI, VAR, TS, KG), a deterministic
//! benchmark harness for random 1-D objectives, and a Van der Pol
//! system-identification demo.
//!
//! The crate is organized the way the problem decomposes:
//!
//! - [`gp`]: exact GP regression with a fixed RBF kernel on a 1-D grid.
//! - [`acquisition`]: all scoring rules, as pure maps from a posterior.
//! - [`theory`]: the structural identities behind the EFE acquisition
//!   (LCB/UCB linearizations, information-gain equivalence, the local
//!   quadratic model and its bias), as checkable procedures.
//! - [`objectives`]: random sinusoid mixtures and the Van der Pol cost.
//! - [`engine`]: the sequential ask/tell optimization loop.
//! - [`mod@bench`]: the multi-method benchmark, the identification demo,
//!   the theory-check suite, and file export/replay.

pub mod acquisition;
pub mod bench;
pub mod engine;
pub mod error;
pub mod gp;
pub mod grid;
pub mod objectives;
pub mod seeding;
pub mod theory;

pub use error::{Error, Result};
pub use grid::{Grid, GridSpec};
