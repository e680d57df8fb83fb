//! Scatterer detectors and model-order selection.
//!
//! All detectors work on a fixed elevation grid and return `k` distinct grid
//! indices (0-based) in detection order.

mod greedy;
mod music;
mod nls;
mod order;
mod sequential;

use serde::{Deserialize, Serialize};

pub use greedy::{relax, relax_with_history, sglrtc, RelaxOptions};
pub use music::{classical_music, local_maxima, music_spectrum};
pub use nls::{nls, nls_objective};
pub use order::{estimate_model_order, Criterion, ModelOrderResult};
pub use sequential::{rap_music, rcc_music};

use crate::covest::CovarianceEstimate;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::{SnapshotStack, SteeringMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    /// Detected grid indices in detection order.
    pub omega: Vec<usize>,
    pub elevations: Vec<f64>,
    /// Estimated scatterer powers, same order as `omega`.
    pub powers: Vec<f64>,
    /// Search metric over the grid for each iteration, when the detector has one.
    pub spectra: Option<Vec<Vec<f64>>>,
    /// Set when the detector could not find `k` genuine peaks and padded.
    pub degraded: bool,
    /// False when an iterative detector stopped at its iteration cap.
    pub converged: bool,
    pub iterations: usize,
}

impl DetectionResult {
    fn new(steering: &SteeringMatrix, omega: Vec<usize>, powers: Vec<f64>, spectra: Option<Vec<Vec<f64>>>) -> Self {
        let elevations = omega.iter().map(|&m| steering.elevations()[m]).collect();
        let iterations = omega.len();
        Self {
            omega,
            elevations,
            powers,
            spectra,
            degraded: false,
            converged: true,
            iterations,
        }
    }

    pub fn k(&self) -> usize {
        self.omega.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorKind {
    ClassicalMusic,
    RapMusic,
    RccMusic,
    Sglrtc,
    Relax,
    Nls,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 6] = [
        DetectorKind::ClassicalMusic,
        DetectorKind::RapMusic,
        DetectorKind::RccMusic,
        DetectorKind::Sglrtc,
        DetectorKind::Relax,
        DetectorKind::Nls,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DetectorKind::ClassicalMusic => "classical_music",
            DetectorKind::RapMusic => "rap_music",
            DetectorKind::RccMusic => "rcc_music",
            DetectorKind::Sglrtc => "sglrtc",
            DetectorKind::Relax => "relax",
            DetectorKind::Nls => "nls",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.as_str() == name)
    }

    /// Whether the detector reads the covariance estimate (and so benefits
    /// from covariance post-processing). The others only see the snapshots.
    pub fn uses_covariance(&self) -> bool {
        matches!(
            self,
            DetectorKind::ClassicalMusic | DetectorKind::RapMusic | DetectorKind::RccMusic
        )
    }

    pub fn run(&self, input: &DetectionInput<'_>, k: usize) -> Result<DetectionResult> {
        let (stack, r, a) = (input.stack, input.covariance, input.steering);
        match self {
            DetectorKind::ClassicalMusic => classical_music(r, a, k),
            DetectorKind::RapMusic => rap_music(r, a, k),
            DetectorKind::RccMusic => rcc_music(stack, r, a, k),
            DetectorKind::Sglrtc => sglrtc(stack, a, k),
            DetectorKind::Relax => relax(stack, a, k, &input.relax),
            DetectorKind::Nls => nls(stack, a, k),
        }
    }
}

impl std::fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything a detector may need for one trial.
#[derive(Debug, Clone, Copy)]
pub struct DetectionInput<'a> {
    pub stack: &'a SnapshotStack,
    pub covariance: &'a CovarianceEstimate,
    pub steering: &'a SteeringMatrix,
    pub relax: RelaxOptions,
}

fn check_order(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("model order k must be at least 1".into()));
    }
    if k >= n {
        return Err(Error::ModelOrder { k, n });
    }
    Ok(())
}

fn check_stack(stack: &SnapshotStack, steering: &SteeringMatrix) -> Result<()> {
    if stack.channels() != steering.n() {
        return Err(Error::Dimension(format!(
            "stack has {} channels, steering matrix {}",
            stack.channels(),
            steering.n()
        )));
    }
    Ok(())
}

fn check_covariance(r: &CovarianceEstimate, steering: &SteeringMatrix) -> Result<()> {
    if r.n() != steering.n() {
        return Err(Error::Dimension(format!(
            "covariance is {0}x{0}, steering matrix has {1} rows",
            r.n(),
            steering.n()
        )));
    }
    Ok(())
}

/// Index of the largest finite entry not in `excluded`; ties go to the
/// smallest index.
fn argmax_excluding(values: &[f64], excluded: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (m, &v) in values.iter().enumerate() {
        if !v.is_finite() || excluded.contains(&m) {
            continue;
        }
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((m, v));
        }
    }
    best.map(|(m, _)| m)
}

/// Per-snapshot least-squares amplitudes of `stack` on the selected columns.
fn ls_amplitudes(steering: &SteeringMatrix, omega: &[usize], g: &CMatrix) -> Result<CMatrix> {
    let a = steering.select(omega);
    linalg::least_squares(&a, g).ok_or_else(|| Error::SingularGram(omega.to_vec()))
}

/// Squared LS amplitudes averaged over looks.
fn snapshot_powers(steering: &SteeringMatrix, omega: &[usize], stack: &SnapshotStack) -> Result<Vec<f64>> {
    let x = ls_amplitudes(steering, omega, stack.data())?;
    let looks = x.ncols() as f64;
    Ok(x.row_iter()
        .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>() / looks)
        .collect())
}

/// `diag(A⁺ R A⁺ᴴ)` clamped at zero, for detectors that only see `R`.
fn covariance_powers(steering: &SteeringMatrix, omega: &[usize], r: &CovarianceEstimate) -> Result<Vec<f64>> {
    let a = steering.select(omega);
    let pinv = linalg::least_squares(&a, &CMatrix::identity(a.nrows(), a.nrows()))
        .ok_or_else(|| Error::SingularGram(omega.to_vec()))?;
    let p = &pinv * r.matrix() * pinv.adjoint();
    Ok(p.diagonal().iter().map(|z| z.re.max(0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_skips_excluded_and_nan() {
        assert_eq!(argmax_excluding(&[1.0, 3.0, f64::NAN, 3.0], &[]), Some(1));
        assert_eq!(argmax_excluding(&[1.0, 3.0, 2.0], &[1]), Some(2));
        assert_eq!(argmax_excluding(&[1.0], &[0]), None);
    }

    #[test]
    fn detector_names_round_trip() {
        for d in DetectorKind::ALL {
            assert_eq!(DetectorKind::parse(d.as_str()), Some(d));
            let json = serde_json::to_string(&d).unwrap();
            assert_eq!(json, format!("\"{}\"", d.as_str()));
        }
    }
}
