//! Sparse scatterer detection for multibaseline SAR tomography.
//!
//! Subspace detectors (classical, RAP- and RCC-MUSIC), greedy and exhaustive
//! baselines, correlation-subspace covariance denoising, accuracy bounds and a
//! seeded Monte Carlo bench.

pub mod bench;
pub mod covest;
pub mod detect;
pub mod error;
pub mod fmt;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod selfcheck;

#[cfg(test)]
mod proptests;

pub use error::{Error, Result};
