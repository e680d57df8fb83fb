use super::{check_covariance, check_order, covariance_powers, DetectionResult};
use crate::covest::CovarianceEstimate;
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::model::SteeringMatrix;

const DENOMINATOR_FLOOR: f64 = 1e-30;

/// MUSIC pseudo-spectrum `1 / (aᴴ Uₙ Uₙᴴ a)` over every grid column.
pub fn music_spectrum(r: &CovarianceEstimate, steering: &SteeringMatrix, k: usize) -> Result<Vec<f64>> {
    check_covariance(r, steering)?;
    check_order(k, r.n())?;
    let un = r.eig()?.trailing(k);
    Ok(subspace_energy(&un, steering.matrix())
        .into_iter()
        .map(|d| 1.0 / d.max(DENOMINATOR_FLOOR))
        .collect())
}

/// `‖Uᴴ a_m‖²` for each column `a_m`.
pub(super) fn subspace_energy(u: &CMatrix, a: &CMatrix) -> Vec<f64> {
    let proj = u.ad_mul(a);
    proj.column_iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

/// Strict interior local maxima, strongest first (ties by index).
pub fn local_maxima(spectrum: &[f64]) -> Vec<usize> {
    let mut peaks: Vec<usize> = (1..spectrum.len().saturating_sub(1))
        .filter(|&m| spectrum[m] > spectrum[m - 1] && spectrum[m] > spectrum[m + 1])
        .collect();
    peaks.sort_by(|&a, &b| spectrum[b].total_cmp(&spectrum[a]).then(a.cmp(&b)));
    peaks
}

/// Picks the `k` strongest peaks of the MUSIC spectrum. When fewer than `k`
/// peaks exist the remainder is filled with the largest remaining entries
/// and the result is flagged `degraded`.
pub fn classical_music(r: &CovarianceEstimate, steering: &SteeringMatrix, k: usize) -> Result<DetectionResult> {
    let spectrum = music_spectrum(r, steering, k)?;
    let mut omega: Vec<usize> = local_maxima(&spectrum).into_iter().take(k).collect();
    let degraded = omega.len() < k;
    if degraded {
        let mut rest: Vec<usize> = (0..spectrum.len()).filter(|m| !omega.contains(m)).collect();
        rest.sort_by(|&a, &b| spectrum[b].total_cmp(&spectrum[a]).then(a.cmp(&b)));
        omega.extend(rest.into_iter().take(k - omega.len()));
    }
    // padded picks may be adjacent and nearly collinear; fall back to
    // single-column estimates rather than failing the detection
    let powers = covariance_powers(steering, &omega, r).unwrap_or_else(|_| {
        omega
            .iter()
            .map(|&m| covariance_powers(steering, &[m], r).map_or(0.0, |p| p[0]))
            .collect()
    });
    let mut out = DetectionResult::new(steering, omega, powers, Some(vec![spectrum]));
    out.degraded = degraded;
    out.iterations = 1;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covest::CovarianceKind;
    use crate::model::{exact_covariance, make_uniform_geometry, steering_matrix, ElevationGrid, ScattererScene};

    fn steering() -> SteeringMatrix {
        let geom = make_uniform_geometry(14, 26.0).unwrap();
        steering_matrix(&geom, &ElevationGrid::rayleigh_span(234, 26.0, 9.0).unwrap())
    }

    #[test]
    fn isotropic_covariance_gives_flat_spectrum() {
        let a = steering();
        let r = CovarianceEstimate::new(CMatrix::identity(14, 14), CovarianceKind::Exact).unwrap();
        let p = music_spectrum(&r, &a, 1).unwrap();
        let (lo, hi) = p.iter().fold((f64::MAX, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!((hi - lo) / hi < 1e-9);
    }

    #[test]
    fn single_target_peak() {
        let a = steering();
        let scene = ScattererScene::new(vec![77], vec![1.0], 0.0).unwrap();
        let r = exact_covariance(&scene, &a).unwrap();
        let p = music_spectrum(&r, &a, 1).unwrap();
        let best = (0..p.len()).max_by(|&x, &y| p[x].total_cmp(&p[y])).unwrap();
        assert_eq!(best, 77);
        let det = classical_music(&r, &a, 1).unwrap();
        assert_eq!(det.omega, vec![77]);
        assert!((det.powers[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn two_separated_targets() {
        let a = steering();
        let scene = ScattererScene::new(vec![104, 130], vec![1.0, 1.0], 0.01).unwrap();
        let r = exact_covariance(&scene, &a).unwrap();
        let mut det = classical_music(&r, &a, 2).unwrap().omega;
        det.sort();
        assert_eq!(det, vec![104, 130]);
    }

    #[test]
    fn merged_peak_is_degraded() {
        // a short grid around one target has a single peak
        let geom = make_uniform_geometry(14, 26.0).unwrap();
        let a = steering_matrix(&geom, &ElevationGrid::centered(9, 1.0).unwrap());
        let scene = ScattererScene::new(vec![4], vec![1.0], 0.01).unwrap();
        let r = exact_covariance(&scene, &a).unwrap();
        let det = classical_music(&r, &a, 2).unwrap();
        assert_eq!(det.k(), 2);
        assert_ne!(det.omega[0], det.omega[1]);
        assert_eq!(det.omega[0], 4);
        assert!(det.degraded);
    }

    #[test]
    fn local_maxima_ordering() {
        assert_eq!(local_maxima(&[0.0, 2.0, 1.0, 5.0, 0.0, 5.0]), vec![3, 1]);
        assert!(local_maxima(&[1.0, 1.0, 1.0]).is_empty());
    }
}
