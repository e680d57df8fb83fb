//! Snapshot-domain greedy baselines: SOMP-style SGLRTC and cyclic RELAX.

use serde::{Deserialize, Serialize};

use super::{argmax_excluding, check_order, check_stack, ls_amplitudes, snapshot_powers, DetectionResult};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{SnapshotStack, SteeringMatrix};

/// Residual snapshots after removing the LS fit on the selected columns.
fn residual(steering: &SteeringMatrix, omega: &[usize], g: &CMatrix) -> Result<CMatrix> {
    if omega.is_empty() {
        return Ok(g.clone());
    }
    let x = ls_amplitudes(steering, omega, g)?;
    Ok(g - steering.select(omega) * x)
}

/// `Σ_l |a_mᴴ r_l|²` for every grid column, via `S = Res·Resᴴ`.
fn correlation_energy(a: &CMatrix, res: &CMatrix) -> Vec<f64> {
    let s = res * res.adjoint();
    let sa = &s * a;
    a.column_iter()
        .zip(sa.column_iter())
        .map(|(ac, sc)| ac.iter().zip(sc.iter()).map(|(x, y)| (x.conj() * y).re).sum::<f64>().max(0.0))
        .collect()
}

fn column_energies(a: &CMatrix) -> Vec<f64> {
    a.column_iter().map(|c| c.norm_squared()).collect()
}

/// Simultaneous orthogonal matching pursuit with a beamforming metric: pick
/// the grid column best matched to the residual snapshots, refit all picks
/// jointly by least squares, repeat `k` times.
pub fn sglrtc(stack: &SnapshotStack, steering: &SteeringMatrix, k: usize) -> Result<DetectionResult> {
    check_stack(stack, steering)?;
    check_order(k, steering.n())?;
    let a = steering.matrix();
    let norms = column_energies(a);
    let g = stack.data();
    let mut omega = Vec::with_capacity(k);
    let mut spectra = Vec::with_capacity(k);
    let mut res = g.clone();
    for _ in 0..k {
        let metric: Vec<f64> = correlation_energy(a, &res)
            .into_iter()
            .zip(&norms)
            .map(|(e, n)| e / n)
            .collect();
        let m = argmax_excluding(&metric, &omega).ok_or_else(|| Error::SingularGram(omega.clone()))?;
        omega.push(m);
        spectra.push(metric);
        res = residual(steering, &omega, g)?;
    }
    let powers = snapshot_powers(steering, &omega, stack)?;
    Ok(DetectionResult::new(steering, omega, powers, Some(spectra)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelaxOptions {
    /// Change in residual power, relative to the data energy, below which
    /// cycling stops.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iter: 50 }
    }
}

/// Cyclic RELAX initialized from [`sglrtc`].
pub fn relax(stack: &SnapshotStack, steering: &SteeringMatrix, k: usize, opts: &RelaxOptions) -> Result<DetectionResult> {
    relax_with_history(stack, steering, k, opts).map(|(d, _)| d)
}

/// [`relax`] plus the residual power `‖G − A_Ω X‖²_F` at the start and after
/// every cycle.
///
/// Each cycle re-places every target in turn: the other targets are fitted
/// jointly and removed, and the target moves to the grid column that best
/// explains what is left. The match is normalized by the part of the column
/// not already spanned by the other targets, which makes every move a
/// coordinate-descent step, so the residual power never increases.
pub fn relax_with_history(
    stack: &SnapshotStack,
    steering: &SteeringMatrix,
    k: usize,
    opts: &RelaxOptions,
) -> Result<(DetectionResult, Vec<f64>)> {
    if opts.max_iter == 0 || !(opts.tol >= 0.0) {
        return Err(Error::InvalidArgument("relax needs max_iter ≥ 1 and tol ≥ 0".into()));
    }
    let init = sglrtc(stack, steering, k)?;
    let a = steering.matrix();
    let g = stack.data();
    let norms = column_energies(a);
    // changes are measured against the data energy so a near-perfect fit
    // does not turn rounding noise into a large relative change
    let total = g.norm_squared().max(f64::MIN_POSITIVE);
    let mut omega = init.omega;
    let mut history = vec![residual(steering, &omega, g)?.norm_squared()];
    let mut spectra = Vec::new();
    let mut converged = false;
    let mut cycles = 0;
    while cycles < opts.max_iter {
        cycles += 1;
        let mut changed = false;
        let mut cycle_spectra = Vec::with_capacity(k);
        for p in 0..k {
            let others: Vec<usize> = omega.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &m)| m).collect();
            let res = residual(steering, &others, g)?;
            // energy of each column outside span(others)
            let free: Vec<f64> = if others.is_empty() {
                norms.clone()
            } else {
                let a_o = steering.select(&others);
                let coeff = crate::linalg::least_squares(&a_o, a).ok_or_else(|| Error::SingularGram(others.clone()))?;
                (a - a_o * coeff).column_iter().map(|c| c.norm_squared()).collect()
            };
            let metric: Vec<f64> = correlation_energy(a, &res)
                .into_iter()
                .zip(free.iter().zip(&norms))
                .map(|(e, (&f, &full))| if f > 1e-12 * full { e / f } else { f64::NEG_INFINITY })
                .collect();
            let m = argmax_excluding(&metric, &others).ok_or_else(|| Error::SingularGram(others.clone()))?;
            // keep the incumbent on ties so cycling terminates
            if m != omega[p] && metric[m] > metric[omega[p]] {
                omega[p] = m;
                changed = true;
            }
            cycle_spectra.push(metric);
        }
        spectra = cycle_spectra;
        let power = residual(steering, &omega, g)?.norm_squared();
        let previous = *history.last().expect("initial residual recorded");
        history.push(power);
        let rel = (previous - power).abs() / total;
        if !changed && rel < opts.tol {
            converged = true;
            break;
        }
    }
    let powers = snapshot_powers(steering, &omega, stack)?;
    let mut out = DetectionResult::new(steering, omega, powers, Some(spectra));
    out.converged = converged;
    out.iterations = cycles;
    Ok((out, history))
}
