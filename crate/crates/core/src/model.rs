//! Multibaseline tomographic signal model: acquisition geometry, elevation
//! grid, scatterer scenes, steering vectors and simulated snapshot stacks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::covest::{CovarianceEstimate, CovarianceKind};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

const EXTENT_TOL: f64 = 1e-12;
const SPACING_TOL: f64 = 1e-9;

/// Spatial frequencies ξₙ (1/m) of the synthetic elevation aperture together
/// with the Rayleigh resolution they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionGeometry {
    xi: Vec<f64>,
    rho_s: f64,
}

impl AcquisitionGeometry {
    /// Builds a geometry from explicit spatial frequencies. The aperture
    /// extent `max ξ − min ξ` must equal `1/rho_s`.
    pub fn new(xi: Vec<f64>, rho_s: f64) -> Result<Self> {
        if xi.len() < 2 {
            return Err(Error::Geometry(format!("need at least 2 channels, got {}", xi.len())));
        }
        if !(rho_s > 0.0) || !rho_s.is_finite() {
            return Err(Error::Geometry(format!("rho_s must be positive, got {rho_s}")));
        }
        if xi.iter().any(|x| !x.is_finite()) || xi.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Geometry("spatial frequencies must be finite and strictly increasing".into()));
        }
        let extent = xi[xi.len() - 1] - xi[0];
        if ((extent * rho_s) - 1.0).abs() > EXTENT_TOL {
            return Err(Error::Geometry(format!(
                "aperture extent {extent:e} does not match 1/rho_s = {:e}",
                1.0 / rho_s
            )));
        }
        Ok(Self { xi, rho_s })
    }

    /// Geometry whose Rayleigh resolution is read off the aperture extent.
    pub fn from_frequencies(xi: Vec<f64>) -> Result<Self> {
        let extent = match (xi.first(), xi.last()) {
            (Some(a), Some(b)) if b > a => b - a,
            _ => return Err(Error::Geometry("spatial frequencies must be strictly increasing".into())),
        };
        Self::new(xi, 1.0 / extent)
    }

    /// Uniform aperture symmetric about zero with extent exactly `1/rho_s`.
    pub fn uniform(n: usize, rho_s: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Geometry(format!("need at least 2 channels, got {n}")));
        }
        if !(rho_s > 0.0) || !rho_s.is_finite() {
            return Err(Error::Geometry(format!("rho_s must be positive, got {rho_s}")));
        }
        let half = 0.5 / rho_s;
        let step = 1.0 / (rho_s * (n - 1) as f64);
        let mut xi: Vec<f64> = (0..n).map(|i| -half + step * i as f64).collect();
        // pin the end points so the extent is exact
        xi[0] = -half;
        xi[n - 1] = half;
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let sym = 0.5 * (xi[j] - xi[i]);
            xi[i] = -sym;
            xi[j] = sym;
        }
        if n % 2 == 1 {
            xi[n / 2] = 0.0;
        }
        Self::new(xi, rho_s)
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn rho_s(&self) -> f64 {
        self.rho_s
    }

    /// For uniformly spaced frequencies, the elevation shift `1/(N·Δξ)` at
    /// which two steering vectors become exactly orthogonal. `None` for
    /// irregular apertures.
    pub fn orthogonality_cell(&self) -> Option<f64> {
        let n = self.n();
        let step = (self.xi[n - 1] - self.xi[0]) / (n - 1) as f64;
        let uniform = self
            .xi
            .windows(2)
            .all(|w| ((w[1] - w[0]) - step).abs() <= SPACING_TOL * step);
        uniform.then(|| 1.0 / (n as f64 * step))
    }

    pub fn steering_vector(&self, s: f64) -> CVector {
        steering_vector(self, s)
    }
}

/// Uniform symmetric aperture with `n` channels and Rayleigh resolution `rho_s`.
pub fn make_uniform_geometry(n: usize, rho_s: f64) -> Result<AcquisitionGeometry> {
    AcquisitionGeometry::uniform(n, rho_s)
}

/// `[a(s)]ₙ = (1/N)·exp(j·2π·ξₙ·s)`.
pub fn steering_vector(geometry: &AcquisitionGeometry, s: f64) -> CVector {
    let scale = 1.0 / geometry.n() as f64;
    CVector::from_iterator(
        geometry.n(),
        geometry
            .xi
            .iter()
            .map(|&xi| C64::from_polar(scale, 2.0 * PI * xi * s)),
    )
}

/// Uniformly spaced elevation sampling points (meters).
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationGrid {
    points: Vec<f64>,
}

impl ElevationGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("grid is empty".into()));
        }
        if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Grid("grid points must be finite and strictly increasing".into()));
        }
        if points.len() > 2 {
            let step = (points[points.len() - 1] - points[0]) / (points.len() - 1) as f64;
            if points.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > SPACING_TOL * step) {
                return Err(Error::Grid("grid spacing is not uniform".into()));
            }
        }
        Ok(Self { points })
    }

    /// `m` points `sⱼ = (j − ⌊m/2⌋)·spacing`, i.e. covering `[−(m/2)δ, (m/2)δ)`.
    pub fn centered(m: usize, spacing: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Grid(format!("need at least 2 grid points, got {m}")));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::Grid(format!("spacing must be positive, got {spacing}")));
        }
        let mid = (m / 2) as f64;
        Self::new((0..m).map(|j| (j as f64 - mid) * spacing).collect())
    }

    /// Centered grid of `m` points spanning `cells` Rayleigh resolution cells.
    pub fn rayleigh_span(m: usize, rho_s: f64, cells: f64) -> Result<Self> {
        Self::centered(m, cells * rho_s / m as f64)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        if self.points.len() < 2 {
            return 0.0;
        }
        (self.points[self.points.len() - 1] - self.points[0]) / (self.points.len() - 1) as f64
    }

    /// Index of the grid point nearest to `s`.
    pub fn nearest(&self, s: f64) -> usize {
        let mut best = 0;
        for (i, p) in self.points.iter().enumerate() {
            if (p - s).abs() < (self.points[best] - s).abs() {
                best = i;
            }
        }
        best
    }
}

/// Steering vectors for every grid point (N×M), with the grid kept alongside.
#[derive(Debug, Clone)]
pub struct SteeringMatrix {
    columns: CMatrix,
    elevations: Vec<f64>,
}

impl SteeringMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.columns
    }

    pub fn n(&self) -> usize {
        self.columns.nrows()
    }

    pub fn m(&self) -> usize {
        self.columns.ncols()
    }

    pub fn column(&self, m: usize) -> CVector {
        self.columns.column(m).into_owned()
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    /// Columns at the given grid indices, in order.
    pub fn select(&self, indices: &[usize]) -> CMatrix {
        self.columns.select_columns(indices)
    }
}

pub fn steering_matrix(geometry: &AcquisitionGeometry, grid: &ElevationGrid) -> SteeringMatrix {
    let mut columns = CMatrix::zeros(geometry.n(), grid.len());
    for (j, &s) in grid.points().iter().enumerate() {
        columns.set_column(j, &steering_vector(geometry, s));
    }
    SteeringMatrix {
        columns,
        elevations: grid.points().to_vec(),
    }
}

/// Ground-truth point scatterers on the grid plus white noise power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScattererScene {
    indices: Vec<usize>,
    powers: Vec<f64>,
    noise_power: f64,
}

impl ScattererScene {
    pub fn new(indices: Vec<usize>, powers: Vec<f64>, noise_power: f64) -> Result<Self> {
        if indices.len() != powers.len() {
            return Err(Error::Scene(format!(
                "{} indices but {} powers",
                indices.len(),
                powers.len()
            )));
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Scene("scatterer indices must be distinct".into()));
        }
        if powers.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(Error::Scene("scatterer powers must be positive".into()));
        }
        if !(noise_power >= 0.0) || !noise_power.is_finite() {
            return Err(Error::Scene(format!("noise power must be non-negative, got {noise_power}")));
        }
        Ok(Self {
            indices,
            powers,
            noise_power,
        })
    }

    /// Two equal-power scatterers centered on the grid midpoint, separated by
    /// `alpha` Rayleigh cells rounded to whole grid steps.
    pub fn pair(grid: &ElevationGrid, rho_s: f64, alpha: f64, power: f64, noise_power: f64) -> Result<Self> {
        let indices = pair_indices(grid, rho_s, alpha)?;
        Self::new(indices.to_vec(), vec![power; 2], noise_power)
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn elevations(&self, grid: &ElevationGrid) -> Vec<f64> {
        self.indices.iter().map(|&i| grid.points()[i]).collect()
    }

    pub(crate) fn check_grid(&self, m: usize) -> Result<()> {
        match self.indices.iter().find(|&&i| i >= m) {
            Some(i) => Err(Error::Scene(format!("index {i} outside a grid of {m} points"))),
            None => Ok(()),
        }
    }
}

/// Grid indices of a centered pair separated by `alpha·rho_s`.
pub fn pair_indices(grid: &ElevationGrid, rho_s: f64, alpha: f64) -> Result<[usize; 2]> {
    if !(alpha > 0.0) {
        return Err(Error::Scene(format!("alpha must be positive, got {alpha}")));
    }
    let steps = (alpha * rho_s / grid.spacing()).round().max(1.0) as usize;
    let m = grid.len();
    let mid = m / 2;
    if steps >= m {
        return Err(Error::Scene(format!("separation of {steps} steps does not fit {m} grid points")));
    }
    let first = mid.saturating_sub(steps / 2).min(m - 1 - steps);
    Ok([first, first + steps])
}

/// `R = Σᵢ σ²ᵢ·a(sᵢ)a(sᵢ)ᴴ + σ²_w·I`.
pub fn exact_covariance(scene: &ScattererScene, steering: &SteeringMatrix) -> Result<CovarianceEstimate> {
    scene.check_grid(steering.m())?;
    let n = steering.n();
    let mut r = CMatrix::identity(n, n).scale(scene.noise_power);
    for (&m, &p) in scene.indices.iter().zip(&scene.powers) {
        let a = steering.columns.column(m);
        r += (&a * a.adjoint()).scale(p);
    }
    Ok(CovarianceEstimate::from_hermitian_part(r, CovarianceKind::Exact))
}

/// Statistics of the scatterer reflectivities γᵢ(l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReflectivityModel {
    /// i.i.d. circular complex Gaussian with variance σ²ᵢ (speckle).
    #[default]
    Gaussian,
    /// Constant modulus `√σ²ᵢ` with phase `2π·i·l/L` for target `i` in look
    /// `l`. The phase sequences are orthogonal across targets (for k ≤ L), so
    /// the sample covariance of a noiseless stack equals the exact covariance.
    Deterministic,
}

/// N×L matrix of looks `g(l)`.
#[derive(Debug, Clone)]
pub struct SnapshotStack {
    data: CMatrix,
    seed: u64,
}

impl SnapshotStack {
    /// Wraps external data; `seed` is 0 for non-simulated stacks.
    pub fn new(data: CMatrix, seed: u64) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::Dimension("snapshot stack must be at least 1x1".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("snapshot stack has non-finite entries".into()));
        }
        Ok(Self { data, seed })
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn channels(&self) -> usize {
        self.data.nrows()
    }

    pub fn looks(&self) -> usize {
        self.data.ncols()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stack multiplied by a real factor.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            data: self.data.scale(c),
            seed: self.seed,
        }
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R, variance: f64) -> C64 {
    let sd = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(sd * re, sd * im)
}

/// Draws `looks` snapshots `g(l) = Σᵢ γᵢ(l)·a(sᵢ) + w(l)`; bit-identical for equal seeds.
pub fn simulate_snapshots(
    scene: &ScattererScene,
    steering: &SteeringMatrix,
    looks: usize,
    seed: u64,
    model: ReflectivityModel,
) -> Result<SnapshotStack> {
    if looks < 1 {
        return Err(Error::InvalidArgument("number of looks must be at least 1".into()));
    }
    scene.check_grid(steering.m())?;
    let n = steering.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = CMatrix::zeros(n, looks);
    for l in 0..looks {
        let mut col = CVector::zeros(n);
        for (i, (&m, &p)) in scene.indices.iter().zip(&scene.powers).enumerate() {
            let gamma = match model {
                ReflectivityModel::Gaussian => complex_gaussian(&mut rng, p),
                ReflectivityModel::Deterministic => {
                    C64::from_polar(p.sqrt(), 2.0 * PI * ((i * l) % looks) as f64 / looks as f64)
                }
            };
            col.axpy(gamma, &steering.columns.column(m), C64::new(1.0, 0.0));
        }
        if scene.noise_power > 0.0 {
            for z in col.iter_mut() {
                *z += complex_gaussian(&mut rng, scene.noise_power);
            }
        }
        data.set_column(l, &col);
    }
    SnapshotStack::new(data, seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Counter-based seed for trial `trial` of sweep point `sweep_index`.
pub fn trial_seed(master: u64, sweep_index: u64, trial: u64) -> u64 {
    let s = splitmix64(master);
    let s = splitmix64(s ^ sweep_index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    splitmix64(s ^ trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    fn default_setup() -> (AcquisitionGeometry, ElevationGrid, SteeringMatrix) {
        let geom = make_uniform_geometry(14, 26.0).unwrap();
        let grid = ElevationGrid::rayleigh_span(234, 26.0, 9.0).unwrap();
        let a = steering_matrix(&geom, &grid);
        (geom, grid, a)
    }

    #[test]
    fn uniform_geometry_examples() {
        let g = make_uniform_geometry(2, 1.0).unwrap();
        assert_eq!(g.xi(), &[-0.5, 0.5]);
        let g = make_uniform_geometry(3, 2.0).unwrap();
        assert_eq!(g.xi(), &[-0.25, 0.0, 0.25]);
        let g = make_uniform_geometry(14, 26.0).unwrap();
        let extent = g.xi()[13] - g.xi()[0];
        assert!((extent - 1.0 / 26.0).abs() < 1e-15);
        assert!((extent - 0.038_461_538_461_538_46).abs() < 1e-15);
        assert!(g.xi().iter().zip(g.xi().iter().rev()).all(|(a, b)| (a + b).abs() < 1e-18));
    }

    #[test]
    fn uniform_geometry_rejects_bad_input() {
        assert!(make_uniform_geometry(1, 1.0).is_err());
        assert!(make_uniform_geometry(4, 0.0).is_err());
        assert!(make_uniform_geometry(4, -3.0).is_err());
    }

    #[test]
    fn explicit_geometry_checks_extent() {
        assert!(AcquisitionGeometry::new(vec![0.0, 0.5, 1.0], 1.0).is_ok());
        assert!(AcquisitionGeometry::new(vec![0.0, 0.5, 1.0], 2.0).is_err());
        assert!(AcquisitionGeometry::new(vec![0.0, 0.0, 1.0], 1.0).is_err());
        let g = AcquisitionGeometry::from_frequencies(vec![-0.1, 0.05, 0.3]).unwrap();
        assert!((g.rho_s() - 2.5).abs() < 1e-12);
        assert!(g.orthogonality_cell().is_none());
    }

    #[test]
    fn steering_vector_at_zero_is_flat() {
        let (geom, _, _) = default_setup();
        let a = steering_vector(&geom, 0.0);
        assert!(a.iter().all(|z| (z - C64::new(1.0 / 14.0, 0.0)).norm() < 1e-16));
    }

    #[test]
    fn steering_inner_product_matches_direct_sum() {
        let geom = make_uniform_geometry(14, 26.0).unwrap();
        let a0 = steering_vector(&geom, 0.0);
        for q in 1..4 {
            let s = 26.0 * q as f64;
            let aq = steering_vector(&geom, s);
            let got = (aq.adjoint() * &a0)[(0, 0)];
            // brute force: (1/N²)·Σ exp(−j2πξₙs)
            let mut want = C64::new(0.0, 0.0);
            for n in 0..14 {
                let xi = -0.5 / 26.0 + n as f64 / (26.0 * 13.0);
                want += C64::from_polar(1.0 / 196.0, -2.0 * PI * xi * s);
            }
            assert!((got - want).norm() < 1e-14, "q={q}: {got} vs {want}");
        }
        // one Rayleigh cell: Dirichlet kernel value −1/N, normalized by ‖a‖² = 1/N
        let a1 = steering_vector(&geom, 26.0);
        let ip = (a1.adjoint() * &a0)[(0, 0)] * 14.0;
        assert!((ip.re + 1.0 / 14.0).abs() < 1e-13 && ip.im.abs() < 1e-13);
    }

    #[test]
    fn orthogonality_cell_gives_orthogonal_columns() {
        let geom = make_uniform_geometry(14, 26.0).unwrap();
        let cell = geom.orthogonality_cell().unwrap();
        assert!((cell - 26.0 * 13.0 / 14.0).abs() < 1e-9);
        let ip = (steering_vector(&geom, 3.0 * cell).adjoint() * steering_vector(&geom, 0.0))[(0, 0)];
        assert!(ip.norm() < 1e-15);
    }

    #[test]
    fn steering_matrix_shape_and_norms() {
        let (_, grid, a) = default_setup();
        assert_eq!((a.n(), a.m()), (14, 234));
        assert!((grid.spacing() - 1.0).abs() < 1e-12);
        for j in 0..a.m() {
            assert!((a.column(j).norm_squared() - 1.0 / 14.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_point_grid() {
        let geom = make_uniform_geometry(5, 3.0).unwrap();
        let grid = ElevationGrid::new(vec![0.0]).unwrap();
        let a = steering_matrix(&geom, &grid);
        assert_eq!(a.m(), 1);
        assert!(a.matrix().iter().all(|z| (z.re - 0.2).abs() < 1e-16 && z.im == 0.0));
    }

    #[test]
    fn exact_covariance_examples() {
        let (_, _, a) = default_setup();
        let r = exact_covariance(&ScattererScene::new(vec![], vec![], 1.0).unwrap(), &a).unwrap();
        assert_eq!(r.matrix(), &CMatrix::identity(14, 14));

        let r = exact_covariance(&ScattererScene::new(vec![100], vec![1.0], 0.0).unwrap(), &a).unwrap();
        assert!((crate::linalg::trace_re(r.matrix()) - 1.0 / 14.0).abs() < 1e-15);

        let r = exact_covariance(&ScattererScene::new(vec![100, 130], vec![1.0, 2.0], 0.0).unwrap(), &a).unwrap();
        let eig = hermitian_eig(r.matrix()).unwrap();
        let top = eig.values()[0];
        assert!(eig.values()[1] > 1e-6 * top);
        assert!(eig.values()[2..].iter().all(|v| v.abs() < 1e-10 * top));
    }

    #[test]
    fn scene_validation() {
        assert!(ScattererScene::new(vec![1, 1], vec![1.0, 1.0], 0.0).is_err());
        assert!(ScattererScene::new(vec![1], vec![0.0], 0.0).is_err());
        assert!(ScattererScene::new(vec![1], vec![1.0], -1.0).is_err());
        let (_, _, a) = default_setup();
        let s = ScattererScene::new(vec![500], vec![1.0], 0.0).unwrap();
        assert!(exact_covariance(&s, &a).is_err());
    }

    #[test]
    fn pair_is_centered_with_rounded_separation() {
        let grid = ElevationGrid::rayleigh_span(234, 26.0, 9.0).unwrap();
        assert_eq!(pair_indices(&grid, 26.0, 0.5).unwrap(), [111, 124]);
        assert_eq!(pair_indices(&grid, 26.0, 0.3).unwrap(), [113, 121]);
    }

    #[test]
    fn simulation_examples() {
        let (_, _, a) = default_setup();
        let empty = ScattererScene::new(vec![], vec![], 0.0).unwrap();
        let g = simulate_snapshots(&empty, &a, 4, 1, ReflectivityModel::Gaussian).unwrap();
        assert!(g.data().iter().all(|z| z.norm() == 0.0));

        let one = ScattererScene::new(vec![40], vec![1.0], 0.0).unwrap();
        let g = simulate_snapshots(&one, &a, 3, 1, ReflectivityModel::Deterministic).unwrap();
        for l in 0..3 {
            assert!((g.data().column(l) - a.column(40)).norm() < 1e-16);
        }
        assert!(simulate_snapshots(&one, &a, 0, 1, ReflectivityModel::Gaussian).is_err());
    }

    #[test]
    fn deterministic_stack_reproduces_exact_covariance() {
        let (_, _, a) = default_setup();
        let s = ScattererScene::new(vec![90, 100, 150], vec![1.0, 0.4, 2.0], 0.0).unwrap();
        let g = simulate_snapshots(&s, &a, 25, 5, ReflectivityModel::Deterministic).unwrap();
        let scm = crate::covest::sample_covariance(&g);
        let exact = exact_covariance(&s, &a).unwrap();
        assert!((scm.matrix() - exact.matrix()).norm() < 1e-14);
    }

    #[test]
    fn simulation_is_seeded() {
        let (_, _, a) = default_setup();
        let s = ScattererScene::new(vec![100, 113], vec![1.0, 1.0], 0.3).unwrap();
        let g1 = simulate_snapshots(&s, &a, 25, 7, ReflectivityModel::Gaussian).unwrap();
        let g2 = simulate_snapshots(&s, &a, 25, 7, ReflectivityModel::Gaussian).unwrap();
        let g3 = simulate_snapshots(&s, &a, 25, 8, ReflectivityModel::Gaussian).unwrap();
        assert_eq!(g1.data(), g2.data());
        assert_ne!(g1.data(), g3.data());
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..4 {
            for t in 0..200 {
                assert!(seen.insert(trial_seed(11, s, t)));
            }
        }
    }
}
