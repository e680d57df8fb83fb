//! Covariance estimation: sample covariance, noise-floor estimation,
//! correlation-subspace denoising and subspace-distance diagnostics.

mod corrsub;

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use corrsub::{
    build_correlation_subspace, correlation_vector, corrsub_optimal, corrsub_simplified,
    corrsub_suboptimal, CorrelationSubspaceBasis, OptimalOptions, OptimalSolution,
};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, EigenSystem};
use crate::model::SnapshotStack;

/// Relative asymmetry tolerated by [`CovarianceEstimate::new`].
pub const COVARIANCE_HERMITIAN_TOL: f64 = 1e-12;

/// Where a covariance matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceKind {
    Exact,
    Scm,
    CorrsubOptimal,
    CorrsubSuboptimal,
    CorrsubSimplified,
}

impl CovarianceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CovarianceKind::Exact => "exact",
            CovarianceKind::Scm => "scm",
            CovarianceKind::CorrsubOptimal => "corrsub_optimal",
            CovarianceKind::CorrsubSuboptimal => "corrsub_suboptimal",
            CovarianceKind::CorrsubSimplified => "corrsub_simplified",
        }
    }
}

/// An N×N Hermitian covariance matrix tagged with its estimator.
#[derive(Debug, Clone)]
pub struct CovarianceEstimate {
    matrix: CMatrix,
    kind: CovarianceKind,
}

impl CovarianceEstimate {
    pub fn new(matrix: CMatrix, kind: CovarianceKind) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "covariance must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("covariance has non-finite entries".into()));
        }
        let asym = linalg::relative_asymmetry(&matrix);
        if asym > COVARIANCE_HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self { matrix, kind })
    }

    pub(crate) fn from_hermitian_part(matrix: CMatrix, kind: CovarianceKind) -> Self {
        Self {
            matrix: linalg::hermitian_part(&matrix),
            kind,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> CovarianceKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eig(&self) -> Result<EigenSystem> {
        hermitian_eig(self)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            matrix: self.matrix.scale(c),
            kind: self.kind,
        }
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// `R̂ = (1/L)·Σ g(l)g(l)ᴴ`.
pub fn sample_covariance(stack: &SnapshotStack) -> CovarianceEstimate {
    let g = stack.data();
    let r = (g * g.adjoint()).scale(1.0 / stack.looks() as f64);
    CovarianceEstimate::from_hermitian_part(r, CovarianceKind::Scm)
}

pub fn hermitian_eig(r: &CovarianceEstimate) -> Result<EigenSystem> {
    linalg::hermitian_eig(&r.matrix)
}

/// Maximum-likelihood noise floor: mean of the `N − k` smallest eigenvalues.
pub fn estimate_noise_variance(eigs: &EigenSystem, k: usize) -> Result<f64> {
    let n = eigs.dim();
    if k >= n {
        return Err(Error::ModelOrder { k, n });
    }
    let tail = &eigs.values()[k..];
    Ok(tail.iter().sum::<f64>() / tail.len() as f64)
}

/// Matrix norm used by [`subspace_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceNorm {
    #[default]
    Frobenius,
    Spectral,
}

/// `‖E_sᴴ·Ê_n‖` between the `k`-dimensional signal subspace of `r_true` and
/// the noise subspace of `r_hat`. Lies in `[0, √k]` for the Frobenius norm.
pub fn subspace_distance(
    r_true: &CovarianceEstimate,
    r_hat: &CovarianceEstimate,
    k: usize,
    norm: SubspaceNorm,
) -> Result<f64> {
    let n = r_true.n();
    if r_hat.n() != n {
        return Err(Error::Dimension(format!("{n}x{n} truth vs {0}x{0} estimate", r_hat.n())));
    }
    if k >= n {
        return Err(Error::ModelOrder { k, n });
    }
    let es = linalg::eig_of_hermitian_part(r_true.matrix())?.leading(k);
    let en = linalg::eig_of_hermitian_part(r_hat.matrix())?.trailing(k);
    let cross = es.adjoint() * en;
    Ok(match norm {
        SubspaceNorm::Frobenius => cross.norm(),
        SubspaceNorm::Spectral => linalg::spectral_norm(&cross),
    })
}

/// Covariance post-processing applied to a sample covariance before detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovarianceEstimator {
    Scm,
    Suboptimal { subtract_noise: bool, enforce_psd: bool },
    Simplified,
    Optimal(OptimalOptions),
}

impl CovarianceEstimator {
    pub fn needs_basis(&self) -> bool {
        !matches!(self, CovarianceEstimator::Scm)
    }

    /// Applies the estimator to `scm`. `k` is the model order used for the
    /// noise-floor estimate.
    pub fn apply(
        &self,
        scm: &CovarianceEstimate,
        basis: Option<&CorrelationSubspaceBasis>,
        k: usize,
    ) -> Result<CovarianceEstimate> {
        let basis = || basis.ok_or_else(|| Error::InvalidArgument("correlation subspace basis missing".into()));
        match *self {
            CovarianceEstimator::Scm => Ok(scm.clone()),
            CovarianceEstimator::Suboptimal {
                subtract_noise,
                enforce_psd,
            } => corrsub_suboptimal(scm, basis()?, k, subtract_noise, enforce_psd),
            CovarianceEstimator::Simplified => corrsub_simplified(scm, basis()?),
            CovarianceEstimator::Optimal(opts) => Ok(corrsub_optimal(scm, basis()?, k, &opts)?.estimate),
        }
    }
}

/// Text dump of a covariance matrix: a `# real` block then an `# imag` block,
/// each with N row-major lines of comma-separated `%.17g` values.
pub fn format_matrix_dump(r: &CovarianceEstimate) -> String {
    let n = r.n();
    let mut out = String::new();
    let _ = writeln!(out, "# covariance {} {}x{}", r.kind().as_str(), n, n);
    for (label, part) in [("real", 0), ("imag", 1)] {
        let _ = writeln!(out, "# {label}");
        for p in 0..n {
            let row: Vec<String> = (0..n)
                .map(|q| {
                    let z = r.matrix()[(p, q)];
                    crate::fmt::fmt_g(if part == 0 { z.re } else { z.im }, 17)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
    }
    out
}

pub fn write_matrix_dump(path: &Path, r: &CovarianceEstimate) -> Result<()> {
    std::fs::write(path, format_matrix_dump(r)).map_err(|e| Error::io(path, e))
}

/// Parses the format written by [`format_matrix_dump`].
pub fn parse_matrix_dump(text: &str) -> Result<CMatrix> {
    let mut blocks: Vec<Vec<Vec<f64>>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "# real" || line == "# imag" {
            blocks.push(Vec::new());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad matrix entry: {e}")))?;
        blocks
            .last_mut()
            .ok_or_else(|| Error::InvalidArgument("matrix rows before a block header".into()))?
            .push(row);
    }
    let [re, im] = blocks.as_slice() else {
        return Err(Error::InvalidArgument("expected a real and an imag block".into()));
    };
    let n = re.len();
    if im.len() != n || re.iter().chain(im).any(|r| r.len() != n) {
        return Err(Error::Dimension("matrix dump blocks are not square".into()));
    }
    Ok(CMatrix::from_fn(n, n, |p, q| linalg::C64::new(re[p][q], im[p][q])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CVector, C64};
    use crate::model::{exact_covariance, make_uniform_geometry, steering_matrix, ElevationGrid, ScattererScene};

    #[test]
    fn scm_of_single_look_is_outer_product() {
        let g = CVector::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.0, 3.0)]);
        let stack = SnapshotStack::new(CMatrix::from_columns(&[g.clone()]), 0).unwrap();
        let r = sample_covariance(&stack);
        assert!((r.matrix() - &g * g.adjoint()).norm() < 1e-15);

        let stack = SnapshotStack::new(CMatrix::from_columns(&[g.clone(), g.clone(), g.clone()]), 0).unwrap();
        assert!((sample_covariance(&stack).matrix() - &g * g.adjoint()).norm() < 1e-14);
    }

    #[test]
    fn noise_variance_examples() {
        let r = CovarianceEstimate::new(CMatrix::identity(6, 6).scale(4.0), CovarianceKind::Exact).unwrap();
        assert!((estimate_noise_variance(&r.eig().unwrap(), 0).unwrap() - 4.0).abs() < 1e-14);
        assert!(estimate_noise_variance(&r.eig().unwrap(), 6).is_err());

        let geom = make_uniform_geometry(14, 26.0).unwrap();
        let grid = ElevationGrid::rayleigh_span(234, 26.0, 9.0).unwrap();
        let a = steering_matrix(&geom, &grid);
        let scene = ScattererScene::new(vec![100, 113], vec![1.0, 1.0], 0.5).unwrap();
        let r = exact_covariance(&scene, &a).unwrap();
        let eig = r.eig().unwrap();
        assert!((estimate_noise_variance(&eig, 2).unwrap() - 0.5).abs() < 1e-10);
        // two eigenvalues above the floor, the rest on it
        assert!(eig.values()[1] > 0.5 + 1e-6);
        assert!(eig.values()[2..].iter().all(|v| (v - 0.5).abs() < 1e-10));
    }

    #[test]
    fn subspace_distance_bounds() {
        let geom = make_uniform_geometry(8, 10.0).unwrap();
        let grid = ElevationGrid::rayleigh_span(64, 10.0, 6.0).unwrap();
        let a = steering_matrix(&geom, &grid);
        let scene = ScattererScene::new(vec![20, 40], vec![1.0, 2.0], 0.1).unwrap();
        let r = exact_covariance(&scene, &a).unwrap();
        let d = subspace_distance(&r, &r, 2, SubspaceNorm::Frobenius).unwrap();
        assert!(d < 1e-8);
        let id = CovarianceEstimate::new(CMatrix::identity(8, 8), CovarianceKind::Scm).unwrap();
        let d = subspace_distance(&r, &id, 2, SubspaceNorm::Frobenius).unwrap();
        assert!(d > 0.0 && d <= 2f64.sqrt() + 1e-12);
        let ds = subspace_distance(&r, &id, 2, SubspaceNorm::Spectral).unwrap();
        assert!(ds <= d + 1e-12 && ds <= 1.0 + 1e-12);
        assert!(subspace_distance(&r, &id, 8, SubspaceNorm::Frobenius).is_err());
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut m = CMatrix::identity(3, 3);
        m[(2, 0)] = C64::new(0.0, 1.0);
        assert!(CovarianceEstimate::new(m, CovarianceKind::Scm).is_err());
    }

    #[test]
    fn matrix_dump_round_trip() {
        let m = CMatrix::from_fn(3, 3, |p, q| {
            if p == q {
                C64::new(1.0 + p as f64 / 3.0, 0.0)
            } else {
                let z = C64::new(0.1 * (p + q) as f64, 0.7 / 3.0 * (q as f64 - p as f64));
                z
            }
        });
        let r = CovarianceEstimate::new(linalg::hermitian_part(&m), CovarianceKind::Scm).unwrap();
        let text = format_matrix_dump(&r);
        assert!(text.lines().nth(2).unwrap().split(',').count() == 3);
        let back = parse_matrix_dump(&text).unwrap();
        assert_eq!(&back, r.matrix());
    }
}
