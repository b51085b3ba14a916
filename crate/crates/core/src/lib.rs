//! Coordinated exploration for concurrent reinforcement learning.
//!
//! `K` agents act in parallel on copies of one unknown environment and pool
//! every observation into a shared posterior. Seed-sampling agents each hold
//! a fixed random seed that they map, together with the current posterior,
//! to a plausible model; baselines resample, act optimistically, or act
//! greedily.
//!
//! - [`beliefs`]: conjugate posteriors (Gaussian, Dirichlet, finite scenario)
//! - [`environments`]: bipolar chain, parallel chains, maximum reward path,
//!   Dirichlet testbed
//! - [`planner`]: finite-horizon backward induction
//! - [`strategies`]: seed-sampling variants and baselines
//! - [`engine`]: event-driven simulation and Bayes regret
//! - [`bench`]: presets, parameter sweeps, CSV output and the CLI

pub mod beliefs;
pub mod bench;
pub mod engine;
pub mod environments;
mod error;
pub mod linalg;
pub mod planner;
pub mod seeds;
pub mod strategies;

pub use error::{Error, Result};
