//! Correlation-subspace covariance denoising.
//!
//! Every noise-free on-grid covariance `Σ σ² a aᴴ` vectorizes into the span
//! of the correlation vectors `c(s) = vec(a(s)a(s)ᴴ)`. For a uniform aperture
//! that span has dimension 2N−1 (one per distinct baseline difference), so
//! projecting a noisy estimate onto it removes most of the estimation noise.

use crate::covest::{estimate_noise_variance, CovarianceEstimate, CovarianceKind};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::model::{AcquisitionGeometry, SteeringMatrix};

/// `c(s) = vec(a(s)a(s)ᴴ)`, column-major, length N².
pub fn correlation_vector(geometry: &AcquisitionGeometry, s: f64) -> CVector {
    let a = geometry.steering_vector(s);
    linalg::vectorize(&linalg::outer(&a))
}

/// Orthonormal basis `Q` (N²×(2N−1)) of the correlation subspace together
/// with the dense projector `QQᴴ`.
#[derive(Debug, Clone)]
pub struct CorrelationSubspaceBasis {
    n: usize,
    q: CMatrix,
    projector: CMatrix,
    spectrum: Vec<f64>,
}

/// Builds the basis from the leading 2N−1 eigenvectors of
/// `B = Σᵢ c(sᵢ)c(sᵢ)ᴴ` over the grid columns of `steering`, computed as the
/// leading left singular vectors of `C = [c(s₁) … c(s_M)]`.
pub fn build_correlation_subspace(steering: &SteeringMatrix) -> Result<CorrelationSubspaceBasis> {
    let n = steering.n();
    let m = steering.m();
    let dim = 2 * n - 1;
    if m < dim {
        return Err(Error::GridTooCoarse { needed: dim, got: m });
    }
    let nn = n * n;
    let a = steering.matrix();
    let mut c = CMatrix::zeros(nn, m);
    for j in 0..m {
        let col = a.column(j);
        let mut dst = c.column_mut(j);
        for q in 0..n {
            let aq = col[q].conj();
            for p in 0..n {
                dst[n * q + p] = col[p] * aq;
            }
        }
    }

    // Left singular vectors of C: the leading eigenvectors of B = CCᴴ
    // without squaring C's condition number. Over a grid span shorter than
    // the steering period the trailing eigenvalues of B sit near 1e-14 of
    // the largest, where an eigensolver on B itself loses ~1e-3 accuracy.
    let svd = c.svd(true, false);
    let u = svd.u.ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    if order.len() < dim || !(svd.singular_values[order[dim - 1]] > 0.0) {
        return Err(Error::EigenFailure);
    }
    let mut q = CMatrix::zeros(nn, dim);
    for (dst, &src) in order.iter().take(dim).enumerate() {
        q.set_column(dst, &u.column(src));
    }
    let spectrum: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();
    Ok(CorrelationSubspaceBasis::assemble(n, q, spectrum))
}

impl CorrelationSubspaceBasis {
    fn assemble(n: usize, q: CMatrix, spectrum: Vec<f64>) -> Self {
        let projector = &q * q.adjoint();
        Self {
            n,
            q,
            projector,
            spectrum,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    /// Number of basis columns (2N−1 for a basis built from a grid).
    pub fn dim(&self) -> usize {
        self.q.ncols()
    }

    /// Eigenvalues of `B` (squared singular values of `C`), descending.
    pub fn b_spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Keeps only the first `cols` basis vectors. Exists so diagnostics can
    /// be exercised against a deliberately broken basis.
    #[doc(hidden)]
    pub fn truncated(&self, cols: usize) -> Self {
        let q = self.q.columns(0, cols.min(self.dim())).into_owned();
        Self::assemble(self.n, q, self.spectrum.clone())
    }

    fn check(&self, r: &CMatrix) -> Result<()> {
        if r.nrows() != self.n || r.ncols() != self.n {
            return Err(Error::Dimension(format!(
                "{}x{} covariance against a basis for N={}",
                r.nrows(),
                r.ncols(),
                self.n
            )));
        }
        Ok(())
    }

    /// `unvec(QQᴴ·vec(X))` through the dense N²×N² projector. About three
    /// times slower than [`Self::project`]; kept as a cross-check.
    pub fn project_dense(&self, x: &CMatrix) -> CMatrix {
        let v = &self.projector * linalg::vectorize(x);
        linalg::hermitian_part(&linalg::unvectorize(&v, self.n))
    }

    /// `unvec(QQᴴ·vec(X))` via the 2N−1 coefficients `Q(Qᴴ·vec(X))`.
    pub fn project(&self, x: &CMatrix) -> CMatrix {
        let v = linalg::vectorize(x);
        let coeff = self.q.ad_mul(&v);
        linalg::hermitian_part(&linalg::unvectorize(&(&self.q * coeff), self.n))
    }

    /// `‖(I − QQᴴ)·vec(X)‖`.
    pub fn residual(&self, x: &CMatrix) -> f64 {
        let v = linalg::vectorize(x);
        let coeff = self.q.ad_mul(&v);
        (v - &self.q * coeff).norm()
    }
}

/// Projects `R̂` (optionally minus the estimated noise floor) onto the
/// correlation subspace, then optionally clips the negative spectrum.
pub fn corrsub_suboptimal(
    r_hat: &CovarianceEstimate,
    basis: &CorrelationSubspaceBasis,
    k: usize,
    subtract_noise: bool,
    enforce_psd: bool,
) -> Result<CovarianceEstimate> {
    basis.check(r_hat.matrix())?;
    let x = if subtract_noise {
        denoised_input(r_hat, k)?
    } else {
        r_hat.matrix().clone()
    };
    let mut r = basis.project(&x);
    if enforce_psd {
        r = linalg::psd_projection(&r)?;
    }
    Ok(CovarianceEstimate::from_hermitian_part(r, CovarianceKind::CorrsubSuboptimal))
}

/// Plain projection of `R̂`: no noise subtraction and no PSD step.
pub fn corrsub_simplified(
    r_hat: &CovarianceEstimate,
    basis: &CorrelationSubspaceBasis,
) -> Result<CovarianceEstimate> {
    basis.check(r_hat.matrix())?;
    Ok(CovarianceEstimate::from_hermitian_part(
        basis.project(r_hat.matrix()),
        CovarianceKind::CorrsubSimplified,
    ))
}

fn denoised_input(r_hat: &CovarianceEstimate, k: usize) -> Result<CMatrix> {
    let eig = r_hat.eig()?;
    let sigma2 = estimate_noise_variance(&eig, k)?;
    let mut x = r_hat.matrix().clone();
    for i in 0..x.nrows() {
        x[(i, i)] -= C64::new(sigma2, 0.0);
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalOptions {
    pub subtract_noise: bool,
    pub enforce_psd: bool,
    pub max_iter: usize,
    /// Stopping tolerance relative to `‖R̂‖_F`.
    pub tol: f64,
}

impl Default for OptimalOptions {
    fn default() -> Self {
        Self {
            subtract_noise: true,
            enforce_psd: true,
            max_iter: 500,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimalSolution {
    pub estimate: CovarianceEstimate,
    pub iterations: usize,
    pub converged: bool,
    /// `‖(I − QQᴴ)·vec(Xₜ)‖` of the PSD iterate after every sweep.
    pub violation_history: Vec<f64>,
}

/// Frobenius-nearest matrix to `R̂ − σ̂²I` that is Hermitian, lies in the
/// correlation subspace and is PSD, by Dykstra's alternating projections.
///
/// Iterates until the PSD iterate moves less than `tol·‖R̂‖_F` or
/// `max_iter` sweeps; the last PSD iterate is returned either way, with
/// `converged` telling the two apart.
pub fn corrsub_optimal(
    r_hat: &CovarianceEstimate,
    basis: &CorrelationSubspaceBasis,
    k: usize,
    opts: &OptimalOptions,
) -> Result<OptimalSolution> {
    basis.check(r_hat.matrix())?;
    if opts.max_iter == 0 || !(opts.tol >= 0.0) {
        return Err(Error::InvalidArgument("max_iter must be ≥ 1 and tol ≥ 0".into()));
    }
    let x0 = if opts.subtract_noise {
        denoised_input(r_hat, k)?
    } else {
        r_hat.matrix().clone()
    };
    if !opts.enforce_psd {
        // only the subspace constraint: a single orthogonal projection
        let r = basis.project(&x0);
        return Ok(OptimalSolution {
            estimate: CovarianceEstimate::from_hermitian_part(r, CovarianceKind::CorrsubOptimal),
            iterations: 1,
            converged: true,
            violation_history: vec![0.0],
        });
    }

    let tol = opts.tol * r_hat.matrix().norm();
    let n = x0.nrows();
    let mut x = x0;
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..opts.max_iter {
        iterations += 1;
        let xp = &x + &p;
        let y = basis.project(&xp);
        p = xp - &y;
        let yq = &y + &q;
        let x_next = linalg::psd_projection(&yq)?;
        q = yq - &x_next;
        let change = (&x_next - &x).norm();
        x = x_next;
        history.push(basis.residual(&x));
        if change < tol {
            converged = true;
            break;
        }
    }
    Ok(OptimalSolution {
        estimate: CovarianceEstimate::from_hermitian_part(x, CovarianceKind::CorrsubOptimal),
        iterations,
        converged,
        violation_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{exact_covariance, make_uniform_geometry, steering_matrix, ElevationGrid, ScattererScene};

    fn setup(n: usize, m: usize) -> (AcquisitionGeometry, SteeringMatrix, CorrelationSubspaceBasis) {
        let geom = make_uniform_geometry(n, 26.0).unwrap();
        let grid = ElevationGrid::rayleigh_span(m, 26.0, 9.0).unwrap();
        let a = steering_matrix(&geom, &grid);
        let basis = build_correlation_subspace(&a).unwrap();
        (geom, a, basis)
    }

    #[test]
    fn correlation_vector_examples() {
        let geom = make_uniform_geometry(5, 26.0).unwrap();
        let c0 = correlation_vector(&geom, 0.0);
        assert!(c0.iter().all(|z| (*z - C64::new(1.0 / 25.0, 0.0)).norm() < 1e-16));
        let s = 7.3;
        let c = correlation_vector(&geom, s);
        assert!((c.norm() - 0.2).abs() < 1e-14);
        let a = geom.steering_vector(s);
        assert!((c[5 * 3 + 1] - a[1] * a[3].conj()).norm() < 1e-16);
    }

    #[test]
    fn default_basis_shape_and_rank() {
        let (_, a, basis) = setup(14, 234);
        assert_eq!((basis.q().nrows(), basis.q().ncols()), (196, 27));
        let spec = basis.b_spectrum();
        assert!(spec[27] <= 1e-8 * spec[0]);
        let gram = basis.q().adjoint() * basis.q();
        assert!((gram - CMatrix::identity(27, 27)).norm() < 1e-10);
        for j in 0..a.m() {
            let c = linalg::vectorize(&linalg::outer(&a.column(j)));
            let r = basis.residual(&linalg::unvectorize(&c, 14));
            assert!(r <= 1e-8 * c.norm(), "column {j}: {r}");
        }
    }

    #[test]
    fn more_channels_than_grid_points() {
        // N² > M: C is tall instead of wide
        let (_, a, basis) = setup(6, 30);
        assert_eq!(basis.dim(), 11);
        let gram = basis.q().adjoint() * basis.q();
        assert!((gram - CMatrix::identity(11, 11)).norm() < 1e-10);
        for j in 0..a.m() {
            let c = linalg::outer(&a.column(j));
            assert!(basis.residual(&c) <= 1e-8 * c.norm());
        }
    }

    #[test]
    fn toeplitz_matrices_lie_in_the_subspace() {
        // uniform aperture: the span is exactly the Hermitian Toeplitz matrices,
        // which the trailing basis vectors must capture despite B's 1e-13 conditioning
        let (_, _, basis) = setup(14, 234);
        let mut t = CMatrix::identity(14, 14);
        t[(0, 13)] = C64::new(0.3, -0.2);
        t[(13, 0)] = C64::new(0.3, 0.2);
        assert!(basis.residual(&t) < 1e-9 * t.norm(), "{}", basis.residual(&t));
    }

    #[test]
    fn rejects_coarse_grid() {
        let geom = make_uniform_geometry(8, 26.0).unwrap();
        let grid = ElevationGrid::rayleigh_span(14, 26.0, 9.0).unwrap();
        let a = steering_matrix(&geom, &grid);
        assert!(matches!(
            build_correlation_subspace(&a),
            Err(Error::GridTooCoarse { needed: 15, got: 14 })
        ));
    }

    #[test]
    fn identity_minus_its_floor_is_zero() {
        let (_, _, basis) = setup(8, 64);
        let id = CovarianceEstimate::new(CMatrix::identity(8, 8), CovarianceKind::Scm).unwrap();
        let r = corrsub_suboptimal(&id, &basis, 0, true, true).unwrap();
        assert!(r.matrix().norm() < 1e-12);
    }

    #[test]
    fn noise_free_covariance_is_a_fixed_point() {
        let (_, a, basis) = setup(14, 234);
        let scene = ScattererScene::new(vec![60, 111, 124], vec![1.0, 0.5, 2.0], 0.0).unwrap();
        let r = exact_covariance(&scene, &a).unwrap();
        let tol = 1e-8 * r.matrix().norm();
        let sub = corrsub_suboptimal(&r, &basis, 3, true, true).unwrap();
        assert!((sub.matrix() - r.matrix()).norm() < tol);
        let simp = corrsub_simplified(&r, &basis).unwrap();
        assert!((simp.matrix() - r.matrix()).norm() < tol);
        let opt = corrsub_optimal(&r, &basis, 3, &OptimalOptions::default()).unwrap();
        assert!(opt.converged);
        assert!((opt.estimate.matrix() - r.matrix()).norm() < tol);
    }

    #[test]
    fn simplified_is_unsubtracted_unclipped_suboptimal() {
        let (_, _, basis) = setup(6, 40);
        let m = CMatrix::from_fn(6, 6, |p, q| C64::new((p * q) as f64 * 0.1, p as f64 - q as f64));
        let r = CovarianceEstimate::new(linalg::hermitian_part(&m), CovarianceKind::Scm).unwrap();
        let a = corrsub_simplified(&r, &basis).unwrap();
        let b = corrsub_suboptimal(&r, &basis, 2, false, false).unwrap();
        assert!((a.matrix() - b.matrix()).norm() < 1e-14);
    }

    #[test]
    fn projection_routes_agree() {
        let (_, _, basis) = setup(5, 30);
        let m = CMatrix::from_fn(5, 5, |p, q| C64::new((p + 2 * q) as f64, (p * q) as f64 - 1.0));
        let h = linalg::hermitian_part(&m);
        assert!((basis.project_dense(&h) - basis.project(&h)).norm() < 1e-12);
    }
}
