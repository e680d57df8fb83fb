//! Sequential MUSIC: RAP-MUSIC and RCC-MUSIC.

use super::music::subspace_energy;
use super::{
    argmax_excluding, check_covariance, check_order, check_stack, covariance_powers, snapshot_powers,
    DetectionResult,
};
use crate::covest::CovarianceEstimate;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::model::{SnapshotStack, SteeringMatrix};

/// Recursively applied and projected MUSIC.
///
/// The signal subspace `U_s` comes once from `R`; iteration `i` maximizes
/// `‖U_sᴴ(I − Π)a‖²` where `Π` projects onto the columns picked so far.
pub fn rap_music(r: &CovarianceEstimate, steering: &SteeringMatrix, k: usize) -> Result<DetectionResult> {
    check_covariance(r, steering)?;
    check_order(k, r.n())?;
    let n = r.n();
    let us = r.eig()?.leading(k);
    let mut omega = Vec::with_capacity(k);
    let mut spectra = Vec::with_capacity(k);
    for _ in 0..k {
        let w = if omega.is_empty() {
            us.clone()
        } else {
            let a_sel = steering.select(&omega);
            let coeff = linalg::least_squares(&a_sel, &CMatrix::identity(n, n))
                .ok_or_else(|| Error::SingularGram(omega.clone()))?;
            let mut perp = -(&a_sel * coeff);
            for i in 0..n {
                perp[(i, i)] += C64::new(1.0, 0.0);
            }
            // (I − Π) is Hermitian, so Usᴴ(I − Π)a = ((I − Π)Us)ᴴ a
            perp * &us
        };
        let metric = subspace_energy(&w, steering.matrix());
        let m = argmax_excluding(&metric, &omega).ok_or_else(|| Error::SingularGram(omega.clone()))?;
        omega.push(m);
        spectra.push(metric);
    }
    let powers = covariance_powers(steering, &omega, r)?;
    Ok(DetectionResult::new(steering, omega, powers, Some(spectra)))
}

/// Recursive covariance cancellation MUSIC.
///
/// Before iteration `i` the powers of the targets found so far are estimated
/// by per-look least squares on the snapshots, their rank-one contributions
/// are removed from `R`, and the next target is the peak of the projection
/// onto the `k − i + 1` leading eigenvectors of what remains.
pub fn rcc_music(
    stack: &SnapshotStack,
    r: &CovarianceEstimate,
    steering: &SteeringMatrix,
    k: usize,
) -> Result<DetectionResult> {
    check_stack(stack, steering)?;
    check_covariance(r, steering)?;
    check_order(k, r.n())?;
    let mut omega = Vec::with_capacity(k);
    let mut spectra = Vec::with_capacity(k);
    for i in 0..k {
        let mut ri = r.matrix().clone();
        if !omega.is_empty() {
            let lambda = snapshot_powers(steering, &omega, stack)?;
            for (&m, &p) in omega.iter().zip(&lambda) {
                ri -= linalg::outer(&steering.column(m)).scale(p);
            }
        }
        // the deflated matrix may be indefinite; only its ordering matters
        let us = linalg::eig_of_hermitian_part(&ri)?.leading(k - i);
        let metric = subspace_energy(&us, steering.matrix());
        let m = argmax_excluding(&metric, &omega).ok_or_else(|| Error::SingularGram(omega.clone()))?;
        omega.push(m);
        spectra.push(metric);
    }
    let powers = snapshot_powers(steering, &omega, stack)?;
    Ok(DetectionResult::new(steering, omega, powers, Some(spectra)))
}
