//! Runtime scaling sweeps over the grid size or the number of channels.

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SweepKind};
use super::output::ResultRow;
use super::runner::{run_experiment_with, RunOptions};
use crate::error::{Error, Result};

/// Least-squares slope of `ln t` against `ln x` for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub method: String,
    pub covariance: String,
    pub slope: f64,
    /// Median runtimes (ns) per sweep value, in sweep order.
    pub medians: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub sweep: SweepKind,
    pub sweep_values: Vec<f64>,
    pub rows: Vec<ResultRow>,
    pub slopes: Vec<SlopeFit>,
}

pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Times every method serially at each sweep value and fits the scaling
/// exponent of the median runtime.
pub fn run_timing_sweep(cfg: &ExperimentConfig) -> Result<TimingReport> {
    let values = &cfg.sweep_values;
    match cfg.sweep {
        SweepKind::GridSize | SweepKind::Antennas => {}
        _ => return Err(Error::config("sweep", "timing sweeps need grid_size or antennas")),
    }
    if values.len() < 4 {
        return Err(Error::config("sweep_values", "timing sweeps need at least 4 points"));
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, 0f64), |(a, b), &v| (a.min(v), b.max(v)));
    if cfg.sweep == SweepKind::GridSize && hi < 10.0 * lo {
        return Err(Error::config("sweep_values", "grid sizes must span at least one decade"));
    }
    let mut timed = cfg.clone();
    timed.timing = true;
    let rows = run_experiment_with(&timed, &RunOptions { workers: Some(1) })?;
    let slopes = cfg
        .methods
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let medians: Vec<f64> = rows
                .iter()
                .skip(j)
                .step_by(cfg.methods.len())
                .map(|r| r.median_runtime_ns.unwrap_or(f64::NAN))
                .collect();
            SlopeFit {
                method: m.detector_name().to_string(),
                covariance: m.covariance_label(),
                slope: loglog_slope(values, &medians).unwrap_or(f64::NAN),
                medians,
            }
        })
        .collect();
    Ok(TimingReport {
        sweep: cfg.sweep,
        sweep_values: values.clone(),
        rows,
        slopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::config::{CovarianceChoice, MethodSpec};
    use crate::detect::DetectorKind;

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.7)).collect();
        assert!((loglog_slope(&x, &y).unwrap() - 1.7).abs() < 1e-12);
        assert!(loglog_slope(&[1.0, 1.0], &[1.0, 2.0]).is_none());
        assert!(loglog_slope(&[1.0, 2.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn rejects_bad_sweeps() {
        let mut cfg = ExperimentConfig::default();
        assert!(run_timing_sweep(&cfg).is_err());
        cfg.sweep = SweepKind::GridSize;
        cfg.sweep_values = vec![100.0, 200.0, 400.0, 800.0];
        assert!(run_timing_sweep(&cfg).is_err());
    }

    #[test]
    fn small_sweep_reports_every_method() {
        let cfg = ExperimentConfig {
            sweep: SweepKind::GridSize,
            sweep_values: vec![40.0, 80.0, 160.0, 400.0],
            trials: 2,
            methods: vec![
                MethodSpec::new(DetectorKind::RapMusic, CovarianceChoice::Scm),
                MethodSpec::new(DetectorKind::Sglrtc, CovarianceChoice::Scm),
            ],
            ..Default::default()
        };
        let rep = run_timing_sweep(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 8);
        assert_eq!(rep.slopes.len(), 2);
        assert!(rep.slopes.iter().all(|s| s.slope.is_finite() && s.medians.len() == 4));
    }
}
