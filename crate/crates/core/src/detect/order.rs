//! Information-theoretic model-order selection (AIC / MDL).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::EigenSystem;

const EIGEN_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Aic,
    Mdl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOrderResult {
    pub k_hat: usize,
    /// Criterion value for every candidate `k = 0..N−1`.
    pub criterion_values: Vec<f64>,
    pub criterion: Criterion,
}

/// Wax–Kailath model order from the covariance eigenvalues of `looks` snapshots.
///
/// For candidate `k` the `N − k` trailing eigenvalues are tested for equality
/// through the ratio of their geometric and arithmetic means.
pub fn estimate_model_order(eigs: &EigenSystem, looks: usize, criterion: Criterion) -> Result<ModelOrderResult> {
    if looks == 0 {
        return Err(Error::InvalidArgument("looks must be at least 1".into()));
    }
    let n = eigs.dim();
    if n == 0 {
        return Err(Error::Dimension("empty eigensystem".into()));
    }
    let lambda: Vec<f64> = eigs.values().iter().map(|&v| v.max(EIGEN_FLOOR)).collect();
    let l = looks as f64;
    let values: Vec<f64> = (0..n)
        .map(|k| {
            let tail = &lambda[k..];
            let len = tail.len() as f64;
            let log_geo = tail.iter().map(|v| v.ln()).sum::<f64>() / len;
            let arith = tail.iter().sum::<f64>() / len;
            // ln(geometric / arithmetic) ≤ 0
            let fit = -l * len * (log_geo - arith.ln());
            let dof = (k * (2 * n - k)) as f64;
            match criterion {
                Criterion::Aic => 2.0 * fit + 2.0 * dof,
                Criterion::Mdl => fit + 0.5 * dof * l.ln(),
            }
        })
        .collect();
    let k_hat = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, &v)| if v < best.1 { (k, v) } else { best })
        .0;
    Ok(ModelOrderResult {
        k_hat,
        criterion_values: values,
        criterion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, CMatrix};
    use crate::model::{exact_covariance, make_uniform_geometry, steering_matrix, ElevationGrid, ScattererScene};

    #[test]
    fn white_noise_has_order_zero() {
        let eig = hermitian_eig(&CMatrix::identity(14, 14).scale(3.0)).unwrap();
        for c in [Criterion::Aic, Criterion::Mdl] {
            let r = estimate_model_order(&eig, 25, c).unwrap();
            assert_eq!(r.k_hat, 0);
            assert_eq!(r.criterion_values.len(), 14);
        }
    }

    #[test]
    fn exact_two_target_covariance() {
        let geom = make_uniform_geometry(14, 26.0).unwrap();
        let a = steering_matrix(&geom, &ElevationGrid::rayleigh_span(234, 26.0, 9.0).unwrap());
        let scene = ScattererScene::new(vec![104, 130], vec![1.0, 1.0], 1.0 / 140.0).unwrap();
        let eig = exact_covariance(&scene, &a).unwrap().eig().unwrap();
        for c in [Criterion::Aic, Criterion::Mdl] {
            assert_eq!(estimate_model_order(&eig, 25, c).unwrap().k_hat, 2);
        }
    }
}
