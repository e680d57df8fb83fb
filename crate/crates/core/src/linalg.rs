//! Dense complex linear-algebra helpers shared by the estimators.
//!
//! Matrices are `nalgebra` column-major `DMatrix<Complex64>`, so `vec(X)`
//! is simply the backing slice.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative asymmetry accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted in descending order.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors, one per column, in the order of [`Self::values`].
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// The `k` leading eigenvectors (signal subspace).
    pub fn leading(&self, k: usize) -> CMatrix {
        self.vectors.columns(0, k.min(self.dim())).into_owned()
    }

    /// Eigenvectors `k..N` (noise subspace for model order `k`).
    pub fn trailing(&self, k: usize) -> CMatrix {
        let k = k.min(self.dim());
        self.vectors.columns(k, self.dim() - k).into_owned()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &v) in self.values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Values are returned in descending order; each eigenvector's first
/// non-negligible component is rotated to the positive real axis so that
/// repeated calls on the same input give identical bases.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigenSystem> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let asym = relative_asymmetry(m);
    if asym > HERMITIAN_TOL {
        return Err(Error::NotHermitian(asym));
    }
    eig_of_hermitian_part(m)
}

/// Same as [`hermitian_eig`] without the asymmetry check; the input is
/// symmetrized first. Used for iterates that are Hermitian up to rounding.
pub(crate) fn eig_of_hermitian_part(m: &CMatrix) -> Result<EigenSystem> {
    let n = m.nrows();
    if n == 0 {
        return Ok(EigenSystem {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let h = hermitian_part(m);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let mut col = eig.eigenvectors.column(src).into_owned();
        canonicalize_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok(EigenSystem { values, vectors })
}

fn canonicalize_phase(v: &mut CVector) {
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().find(|z| z.norm() > 1e-8 * peak) {
        let rot = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `‖M − Mᴴ‖_F / ‖M‖_F`, zero for the zero matrix.
pub fn relative_asymmetry(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / norm
}

/// Nearest positive semidefinite matrix in Frobenius norm: keep the
/// non-negative part of the spectrum.
pub fn psd_projection(m: &CMatrix) -> Result<CMatrix> {
    let eig = eig_of_hermitian_part(m)?;
    Ok(clip_spectrum(&eig))
}

pub(crate) fn clip_spectrum(eig: &EigenSystem) -> CMatrix {
    let mut scaled = eig.vectors().clone();
    for (j, &lambda) in eig.values().iter().enumerate() {
        scaled.column_mut(j).scale_mut(lambda.max(0.0));
    }
    hermitian_part(&(&scaled * eig.vectors().adjoint()))
}

pub fn trace_re(m: &CMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Column-major vectorization, `vec(X)[N·q + p] = X[p, q]` (0-based).
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Least-squares coefficients `(AᴴA)⁻¹AᴴB` for a full-column-rank `A`.
/// Returns `None` when the Gram matrix is numerically singular.
pub fn least_squares(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    let gram = a.ad_mul(a);
    let chol = gram_cholesky(&gram)?;
    Some(chol.solve(&a.ad_mul(b)))
}

pub(crate) fn gram_cholesky(
    gram: &CMatrix,
) -> Option<nalgebra::Cholesky<C64, nalgebra::Dyn>> {
    let scale = gram.diagonal().iter().map(|z| z.re).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return None;
    }
    let chol = gram.clone().cholesky()?;
    // reject near-collinear columns: smallest pivot relative to the largest diagonal
    let min_pivot = chol.l_dirty().diagonal().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    if min_pivot * min_pivot <= 1e-12 * scale {
        return None;
    }
    Some(chol)
}

/// Outer product `a aᴴ`.
pub fn outer(a: &CVector) -> CMatrix {
    a * a.adjoint()
}
