//! Exhaustive nonlinear least squares over grid pairs.

use super::{argmax_excluding, check_order, check_stack, ls_amplitudes, snapshot_powers, DetectionResult};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{SnapshotStack, SteeringMatrix};

/// Pairs whose Gram determinant falls below this fraction of `g₁₁g₂₂` are
/// treated as collinear and skipped.
const SINGULAR_PAIR: f64 = 1e-12;

/// `Σ_l ‖Π_Ω g(l)‖²`, the energy of the snapshots captured by the span of
/// the selected steering columns.
pub fn nls_objective(stack: &SnapshotStack, steering: &SteeringMatrix, omega: &[usize]) -> Result<f64> {
    check_stack(stack, steering)?;
    if omega.is_empty() {
        return Ok(0.0);
    }
    let x = ls_amplitudes(steering, omega, stack.data())?;
    Ok((steering.select(omega) * x).norm_squared())
}

/// Searches every grid subset of size `k ≤ 2` for the one maximizing
/// [`nls_objective`]. Ties go to the lexicographically smallest subset.
pub fn nls(stack: &SnapshotStack, steering: &SteeringMatrix, k: usize) -> Result<DetectionResult> {
    check_stack(stack, steering)?;
    check_order(k, steering.n())?;
    if k > 2 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search is limited to k ≤ 2, got k = {k}"
        )));
    }
    let n = steering.n();
    let m_len = steering.m();
    let g = stack.data();
    let r = (g * g.adjoint()).unscale(stack.looks() as f64);
    let x = &r * steering.matrix();
    let a = steering.matrix().as_slice();
    let x = x.as_slice();
    fn col(buf: &[C64], n: usize, m: usize) -> &[C64] {
        &buf[m * n..(m + 1) * n]
    }

    let energy: Vec<f64> = (0..m_len)
        .map(|m| col(a, n, m).iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let captured: Vec<f64> = (0..m_len)
        .map(|m| col(a, n, m).iter().zip(col(x, n, m)).map(|(p, q)| (p.conj() * q).re).sum())
        .collect();

    let omega = if k == 1 {
        let metric: Vec<f64> = captured.iter().zip(&energy).map(|(w, e)| w / e).collect();
        vec![argmax_excluding(&metric, &[]).ok_or(Error::NoDetections)?]
    } else {
        let mut best: Option<(f64, usize, usize)> = None;
        let mut ai = vec![C64::new(0.0, 0.0); n];
        for i in 0..m_len {
            for (dst, z) in ai.iter_mut().zip(col(a, n, i)) {
                *dst = z.conj();
            }
            let (g11, w11) = (energy[i], captured[i]);
            for j in i + 1..m_len {
                let (aj, xj) = (col(a, n, j), col(x, n, j));
                let mut g12 = C64::new(0.0, 0.0);
                let mut w12 = C64::new(0.0, 0.0);
                for t in 0..n {
                    g12 += ai[t] * aj[t];
                    w12 += ai[t] * xj[t];
                }
                let g22 = energy[j];
                let det = g11 * g22 - g12.norm_sqr();
                if det <= SINGULAR_PAIR * g11 * g22 {
                    continue;
                }
                let obj = (g22 * w11 + g11 * captured[j] - 2.0 * (g12.conj() * w12).re) / det;
                if best.map_or(true, |(b, _, _)| obj > b) {
                    best = Some((obj, i, j));
                }
            }
        }
        let (_, i, j) = best.ok_or(Error::NoDetections)?;
        vec![i, j]
    };
    let powers = snapshot_powers(steering, &omega, stack)?;
    Ok(DetectionResult::new(steering, omega, powers, None))
}
