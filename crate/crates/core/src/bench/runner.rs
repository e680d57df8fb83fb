//! Monte Carlo execution: per-point setup, seeded trials, ordered aggregation.

use std::time::Instant;

use super::config::{ExperimentConfig, MethodSpec, SweepKind};
use super::output::{ResultRow, SpectrumDump};
use crate::covest::{build_correlation_subspace, sample_covariance, subspace_distance, CorrelationSubspaceBasis, CovarianceEstimate};
use crate::detect::{estimate_model_order, DetectionInput, DetectionResult};
use crate::error::{Error, Result};
use crate::metrics::{crlb_double, crlb_single, match_estimates, TrialOutcome};
use crate::model::{
    exact_covariance, simulate_snapshots, steering_matrix, trial_seed, AcquisitionGeometry, ElevationGrid,
    ScattererScene, SnapshotStack, SteeringMatrix,
};

/// Execution knobs that must not change results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses every core. Ignored without the
    /// `parallel` feature and when timing is on (timed runs are serial).
    pub workers: Option<usize>,
}

/// Everything shared by the trials of one sweep point.
#[derive(Debug, Clone)]
pub struct PointSetup {
    pub sweep_value: Option<f64>,
    pub geometry: AcquisitionGeometry,
    pub grid: ElevationGrid,
    pub steering: SteeringMatrix,
    /// Built when some method post-processes the covariance.
    pub basis: Option<CorrelationSubspaceBasis>,
    pub scene: ScattererScene,
    pub truth: CovarianceEstimate,
    pub looks: usize,
    pub snr_db: Option<f64>,
}

impl PointSetup {
    pub fn new(cfg: &ExperimentConfig, sweep_value: Option<f64>) -> Result<Self> {
        let mut n = cfg.geometry.n;
        let mut m = cfg.grid.m;
        let mut looks = cfg.looks;
        let mut snr_db = cfg.scene.snr_db;
        let mut alpha = cfg.scene.alpha;
        if let Some(v) = sweep_value {
            match cfg.sweep {
                SweepKind::None => {}
                SweepKind::Snr => snr_db = Some(v),
                SweepKind::Alpha => alpha = v,
                SweepKind::GridSize => m = v as usize,
                SweepKind::Antennas => n = v as usize,
                SweepKind::Looks => looks = v as usize,
            }
        }
        let rho_s = cfg.geometry.rho_s;
        let geometry = match &cfg.geometry.xi {
            Some(xi) => AcquisitionGeometry::new(xi.clone(), rho_s)?,
            None => AcquisitionGeometry::uniform(n, rho_s)?,
        };
        let spacing = cfg.grid.spacing.unwrap_or(cfg.grid.span_cells * rho_s / m as f64);
        let grid = ElevationGrid::centered(m, spacing)?;
        let steering = steering_matrix(&geometry, &grid);

        let k = cfg.scene.k;
        let indices = match &cfg.scene.indices {
            Some(idx) => idx.clone(),
            None => place_targets(m, k, alpha * rho_s / spacing)?,
        };
        let powers = cfg.scene.powers.clone().unwrap_or_else(|| vec![cfg.scene.power; k]);
        let mean_power = powers.iter().sum::<f64>() / powers.len() as f64;
        let noise = match snr_db {
            Some(db) => cfg
                .scene
                .snr_convention
                .noise_power(mean_power, 10f64.powf(db / 10.0), geometry.n()),
            None => 0.0,
        };
        let scene = ScattererScene::new(indices, powers, noise)?;
        let truth = exact_covariance(&scene, &steering)?;
        let basis = if cfg.methods.iter().any(|m| m.estimator().needs_basis()) {
            Some(build_correlation_subspace(&steering)?)
        } else {
            None
        };
        Ok(Self {
            sweep_value,
            geometry,
            grid,
            steering,
            basis,
            scene,
            truth,
            looks,
            snr_db,
        })
    }

    pub fn true_elevations(&self) -> Vec<f64> {
        self.scene.elevations(&self.grid)
    }

    /// `√CRLB/ρ_s` for the scene, when defined (noisy scenes with k ≤ 2).
    pub fn crlb_normalized(&self) -> Option<f64> {
        let snr = 10f64.powf(self.snr_db? / 10.0);
        let rho = self.geometry.rho_s();
        let (l, n) = (self.looks as f64, self.geometry.n() as f64);
        let bound = match self.scene.k() {
            1 => crlb_single(rho, l, n, snr).ok()?,
            2 => {
                let s = self.true_elevations();
                crlb_double(rho, l, n, snr, (s[1] - s[0]).abs() / rho).ok()?
            }
            _ => return None,
        };
        Some(bound.sqrt() / rho)
    }

    pub fn simulate(&self, cfg: &ExperimentConfig, seed: u64) -> Result<SnapshotStack> {
        simulate_snapshots(&self.scene, &self.steering, self.looks, seed, cfg.scene.reflectivity)
    }
}

/// `k` targets `steps` apart, centered on the grid midpoint.
fn place_targets(m: usize, k: usize, steps: f64) -> Result<Vec<usize>> {
    if k == 1 {
        return Ok(vec![m / 2]);
    }
    let steps = steps.round().max(1.0) as usize;
    let extent = steps * (k - 1);
    if extent >= m {
        return Err(Error::Scene(format!(
            "{k} targets {steps} steps apart do not fit {m} grid points"
        )));
    }
    let first = (m / 2).saturating_sub(extent / 2).min(m - 1 - extent);
    Ok((0..k).map(|i| first + i * steps).collect())
}

/// What one method produced on one trial.
#[derive(Debug, Clone, Default)]
pub struct MethodTrial {
    pub outcome: Option<TrialOutcome>,
    pub error: Option<String>,
    pub runtime_ns: Option<u64>,
    pub subspace_distance: Option<f64>,
    pub nonconverged: bool,
}

/// Runs every method on one simulated stack.
pub fn run_trial(cfg: &ExperimentConfig, point: &PointSetup, seed: u64) -> Result<Vec<MethodTrial>> {
    let stack = point.simulate(cfg, seed)?;
    let scm = sample_covariance(&stack);
    let k_true = point.scene.k();
    let k = match cfg.model_order.criterion() {
        None => Ok(k_true),
        Some(c) => scm
            .eig()
            .and_then(|e| estimate_model_order(&e, point.looks, c))
            .and_then(|r| match r.k_hat {
                0 => Err(Error::ModelOrder { k: 0, n: point.geometry.n() }),
                k => Ok(k),
            }),
    };
    let truth = point.true_elevations();
    let gate = cfg.gate.gate(point.geometry.rho_s());
    Ok(cfg
        .methods
        .iter()
        .map(|method| {
            let k = match &k {
                Ok(k) => *k,
                Err(e) => {
                    return MethodTrial {
                        error: Some(e.to_string()),
                        ..Default::default()
                    }
                }
            };
            // the clock is only read when asked for (it panics on bare wasm)
            let started = cfg.timing.then(Instant::now);
            let result = run_method(method, point, &stack, &scm, k);
            let elapsed = started.map(|t| t.elapsed().as_nanos() as u64);
            match result {
                Err(e) => MethodTrial {
                    error: Some(e.to_string()),
                    ..Default::default()
                },
                Ok((cov, det)) => {
                    let outcome = det.as_ref().map(|d| {
                        match_estimates(&d.elevations, &truth, gate).unwrap_or_else(|_| TrialOutcome {
                            // wrong model order: a miss, not an estimator failure
                            true_elevations: truth.clone(),
                            estimated_elevations: d.elevations.clone(),
                            detected: false,
                        })
                    });
                    let sd = if cfg.subspace_distance {
                        subspace_distance(&point.truth, &cov, k_true, cfg.subspace_norm).ok()
                    } else {
                        None
                    };
                    MethodTrial {
                        outcome,
                        error: None,
                        runtime_ns: elapsed,
                        subspace_distance: sd,
                        nonconverged: det.map_or(false, |d| !d.converged),
                    }
                }
            }
        })
        .collect())
}

fn run_method(
    method: &MethodSpec,
    point: &PointSetup,
    stack: &SnapshotStack,
    scm: &CovarianceEstimate,
    k: usize,
) -> Result<(CovarianceEstimate, Option<DetectionResult>)> {
    let needs_cov = method.detector.map_or(true, |d| d.uses_covariance());
    let cov = if needs_cov {
        method.estimator().apply(scm, point.basis.as_ref(), k)?
    } else {
        scm.clone()
    };
    let det = match method.detector {
        None => None,
        Some(d) => {
            let input = DetectionInput {
                stack,
                covariance: &cov,
                steering: &point.steering,
                relax: method.options.relax,
            };
            Some(d.run(&input, k)?)
        }
    };
    Ok((cov, det))
}

/// Runs the whole sweep and returns one row per (sweep value, method).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    run_experiment_with(cfg, &RunOptions::default())
}

pub fn run_experiment_with(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for (sweep_index, value) in cfg.sweep_points() {
        let point = PointSetup::new(cfg, value)?;
        let trials = run_trials(cfg, &point, sweep_index as u64, opts)?;
        rows.extend(aggregate(cfg, &point, &trials));
    }
    Ok(rows)
}

fn run_trials(
    cfg: &ExperimentConfig,
    point: &PointSetup,
    sweep_index: u64,
    opts: &RunOptions,
) -> Result<Vec<Vec<MethodTrial>>> {
    let one = |t: usize| run_trial(cfg, point, trial_seed(cfg.master_seed, sweep_index, t as u64));
    #[cfg(feature = "parallel")]
    {
        let workers = if cfg.timing { Some(1) } else { opts.workers };
        if workers != Some(1) {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.unwrap_or(0))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            // indexed collect keeps trial order, so aggregation is order-stable
            return pool.install(|| (0..cfg.trials).into_par_iter().map(one).collect());
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = opts;
    (0..cfg.trials).map(one).collect()
}

fn aggregate(cfg: &ExperimentConfig, point: &PointSetup, trials: &[Vec<MethodTrial>]) -> Vec<ResultRow> {
    let rho = point.geometry.rho_s();
    let crlb = point.crlb_normalized();
    cfg.methods
        .iter()
        .enumerate()
        .map(|(j, method)| {
            let per: Vec<&MethodTrial> = trials.iter().map(|t| &t[j]).collect();
            let errors = per.iter().filter(|t| t.error.is_some()).count();
            let detected: Vec<&TrialOutcome> = per
                .iter()
                .filter_map(|t| t.outcome.as_ref())
                .filter(|o| o.detected)
                .collect();
            let mse_sum: f64 = detected.iter().map(|o| o.mse()).sum();
            let rmse_normalized =
                (!detected.is_empty()).then(|| (mse_sum / detected.len() as f64).sqrt() / rho);
            let sds: Vec<f64> = per.iter().filter_map(|t| t.subspace_distance).collect();
            let mut runtimes: Vec<u64> = per.iter().filter_map(|t| t.runtime_ns).collect();
            runtimes.sort_unstable();
            let mean_runtime = (!runtimes.is_empty())
                .then(|| runtimes.iter().map(|&r| r as f64).sum::<f64>() / runtimes.len() as f64);
            ResultRow {
                sweep_value: point.sweep_value,
                method: method.detector_name().to_string(),
                covariance: method.covariance_label(),
                rmse_normalized,
                detection_rate: method
                    .detector
                    .map(|_| detected.len() as f64 / cfg.trials as f64),
                mean_subspace_distance: (!sds.is_empty()).then(|| sds.iter().sum::<f64>() / sds.len() as f64),
                mean_runtime_ns: mean_runtime,
                trials_detected: detected.len(),
                trials: cfg.trials,
                errors,
                nonconverged: per.iter().filter(|t| t.nonconverged).count(),
                crlb_normalized: method.detector.and(crlb),
                median_runtime_ns: median(&runtimes),
            }
        })
        .collect()
}

fn median(sorted: &[u64]) -> Option<f64> {
    match sorted.len() {
        0 => None,
        n if n % 2 == 1 => Some(sorted[n / 2] as f64),
        n => Some(0.5 * (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64)),
    }
}

/// Runs one trial of `method` at the first sweep point and keeps its
/// per-iteration pseudo-spectra.
pub fn spectrum_dump(cfg: &ExperimentConfig, method: &MethodSpec, seed: u64) -> Result<SpectrumDump> {
    cfg.validate()?;
    let detector = method
        .detector
        .ok_or_else(|| Error::config("method", "a spectrum needs a detector"))?;
    let value = cfg.sweep_points()[0].1;
    let mut single = cfg.clone();
    single.methods = vec![method.clone()];
    let point = PointSetup::new(&single, value)?;
    let stack = point.simulate(cfg, seed)?;
    let scm = sample_covariance(&stack);
    let (_, det) = run_method(method, &point, &stack, &scm, point.scene.k())?;
    let det = det.expect("detector present");
    let spectra = det
        .spectra
        .ok_or_else(|| Error::InvalidArgument(format!("{} produces no spectrum", detector.as_str())))?;
    Ok(SpectrumDump {
        method: detector.as_str().to_string(),
        covariance: method.covariance_label(),
        seed,
        true_elevations: point.true_elevations(),
        estimated_elevations: det.elevations,
        elevations: point.grid.points().to_vec(),
        spectra,
    })
}
