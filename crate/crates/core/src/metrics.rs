//! Estimate-to-truth matching, RMSE and Cramér–Rao bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// When a trial counts as a successful detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetectionGate {
    /// Every matched error below a fixed distance in meters (one Rayleigh
    /// cell by default).
    Absolute { limit: f64 },
    /// Every matched error below half the smallest true separation: each
    /// estimate lands closer to its own target than to its neighbor.
    HalfSeparation,
}

impl DetectionGate {
    pub fn rayleigh(rho_s: f64) -> Self {
        DetectionGate::Absolute { limit: rho_s }
    }

    fn limit(&self, truth_sorted: &[f64]) -> f64 {
        match *self {
            DetectionGate::Absolute { limit } => limit,
            DetectionGate::HalfSeparation => {
                let min_gap = truth_sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
                0.5 * min_gap
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// True elevations, ascending.
    pub true_elevations: Vec<f64>,
    /// Estimates paired with `true_elevations`.
    pub estimated_elevations: Vec<f64>,
    pub detected: bool,
}

impl TrialOutcome {
    /// Mean squared matched error over the targets of this trial.
    pub fn mse(&self) -> f64 {
        let k = self.true_elevations.len().max(1) as f64;
        self.true_elevations
            .iter()
            .zip(&self.estimated_elevations)
            .map(|(s, e)| (s - e).powi(2))
            .sum::<f64>()
            / k
    }
}

/// Sorts both lists and pairs them positionally. For two targets inside the
/// gate this coincides with the optimal assignment.
pub fn match_estimates(estimated: &[f64], truth: &[f64], gate: DetectionGate) -> Result<TrialOutcome> {
    if estimated.len() != truth.len() {
        return Err(Error::Dimension(format!(
            "{} estimates for {} targets",
            estimated.len(),
            truth.len()
        )));
    }
    let mut est = estimated.to_vec();
    let mut tru = truth.to_vec();
    est.sort_by(f64::total_cmp);
    tru.sort_by(f64::total_cmp);
    let limit = gate.limit(&tru);
    let detected = est.iter().zip(&tru).all(|(e, t)| (e - t).abs() < limit);
    Ok(TrialOutcome {
        true_elevations: tru,
        estimated_elevations: est,
        detected,
    })
}

/// Root mean square location error over detected trials, in meters.
pub fn rmse(outcomes: &[TrialOutcome]) -> Result<f64> {
    let (sum, count) = outcomes
        .iter()
        .filter(|o| o.detected)
        .fold((0.0, 0usize), |(s, c), o| (s + o.mse(), c + 1));
    if count == 0 {
        return Err(Error::NoDetections);
    }
    Ok((sum / count as f64).sqrt())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Single-scatterer location bound in m²: `(3/(2π²))·ρ_s²/(L·N·SNR)`.
pub fn crlb_single(rho_s: f64, looks: f64, n: f64, snr_linear: f64) -> Result<f64> {
    check_positive("rho_s", rho_s)?;
    check_positive("looks", looks)?;
    check_positive("N", n)?;
    check_positive("snr", snr_linear)?;
    Ok(3.0 / (2.0 * PI * PI) * rho_s * rho_s / (looks * n * snr_linear))
}

/// Two-scatterer penalty `max{15/(π²α²), 1}` for separation `α` in Rayleigh cells.
pub fn zeta(alpha: f64) -> Result<f64> {
    check_positive("alpha", alpha)?;
    Ok((15.0 / (PI * PI * alpha * alpha)).max(1.0))
}

/// Separation above which two scatterers are as well localized as one.
pub fn zeta_breakpoint() -> f64 {
    15f64.sqrt() / PI
}

pub fn crlb_double(rho_s: f64, looks: f64, n: f64, snr_linear: f64, alpha: f64) -> Result<f64> {
    Ok(crlb_single(rho_s, looks, n, snr_linear)? * zeta(alpha)?)
}
