//! Result tables: CSV and JSON writers, spectrum dumps.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use crate::error::{Error, Result};
use crate::fmt::fmt_g;

/// One aggregated (sweep value, method) cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_value: Option<f64>,
    pub method: String,
    pub covariance: String,
    /// RMSE over detected trials divided by `ρ_s`.
    pub rmse_normalized: Option<f64>,
    pub detection_rate: Option<f64>,
    pub mean_subspace_distance: Option<f64>,
    pub mean_runtime_ns: Option<f64>,
    pub trials_detected: usize,
    pub trials: usize,
    pub errors: usize,
    /// Trials where an iterative detector hit its cycle limit.
    #[serde(default)]
    pub nonconverged: usize,
    pub crlb_normalized: Option<f64>,
    pub median_runtime_ns: Option<f64>,
}

const COLUMNS: [&str; 13] = [
    "sweep_value",
    "method",
    "covariance",
    "rmse_normalized",
    "detection_rate",
    "mean_subspace_distance",
    "mean_runtime_ns",
    "trials_detected",
    "trials",
    "errors",
    "nonconverged",
    "crlb_normalized",
    "median_runtime_ns",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| fmt_g(x, 10)).unwrap_or_default()
}

/// CSV in field order with `%.10g` numbers; missing values (including
/// runtimes of untimed runs) are empty fields.
pub fn format_csv(rows: &[ResultRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // writing into a Vec cannot fail
    w.write_record(COLUMNS).expect("in-memory csv");
    for r in rows {
        w.write_record([
            opt(r.sweep_value),
            r.method.clone(),
            r.covariance.clone(),
            opt(r.rmse_normalized),
            opt(r.detection_rate),
            opt(r.mean_subspace_distance),
            opt(r.mean_runtime_ns),
            r.trials_detected.to_string(),
            r.trials.to_string(),
            r.errors.to_string(),
            r.nonconverged.to_string(),
            opt(r.crlb_normalized),
            opt(r.median_runtime_ns),
        ])
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
}

pub fn format_json(rows: &[ResultRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn format_results(rows: &[ResultRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => format_csv(rows),
        OutputFormat::Json => format_json(rows),
    }
}

pub fn write_results(rows: &[ResultRow], path: &Path, format: OutputFormat) -> Result<()> {
    write_text(path, &format_results(rows, format))
}

pub fn read_results_json(path: &Path) -> Result<Vec<ResultRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Pseudo-spectra of one detector run, ready for plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDump {
    pub method: String,
    pub covariance: String,
    pub seed: u64,
    pub true_elevations: Vec<f64>,
    pub estimated_elevations: Vec<f64>,
    pub elevations: Vec<f64>,
    /// One spectrum per detector iteration.
    pub spectra: Vec<Vec<f64>>,
}

impl SpectrumDump {
    /// Long-format CSV `elevation_m,value,iteration` preceded by `#` lines
    /// carrying the true and estimated elevations.
    pub fn to_csv(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| fmt_g(*x, 10)).collect::<Vec<_>>().join(" ");
        let mut out = format!(
            "# method {} covariance {} seed {}\n# true_elevations_m {}\n# estimated_elevations_m {}\n",
            self.method,
            self.covariance,
            self.seed,
            join(&self.true_elevations),
            join(&self.estimated_elevations)
        );
        out.push_str("elevation_m,value,iteration\n");
        for (it, spec) in self.spectra.iter().enumerate() {
            for (s, v) in self.elevations.iter().zip(spec) {
                out.push_str(&format!("{},{},{it}\n", fmt_g(*s, 10), fmt_g(*v, 10)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: Option<f64>, timed: bool) -> ResultRow {
        ResultRow {
            sweep_value: v,
            method: "rcc".into(),
            covariance: "scm".into(),
            rmse_normalized: Some(0.123456789012),
            detection_rate: Some(0.5),
            mean_subspace_distance: None,
            mean_runtime_ns: timed.then_some(1500.0),
            trials_detected: 5,
            trials: 10,
            errors: 0,
            nonconverged: 0,
            crlb_normalized: None,
            median_runtime_ns: timed.then_some(1400.0),
        }
    }

    #[test]
    fn csv_layout() {
        let csv = format_csv(&[row(Some(6.0), false), row(None, true)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], COLUMNS.join(","));
        assert!(lines.iter().all(|l| l.split(',').count() == 13));
        assert_eq!(lines[1], "6,rcc,scm,0.123456789,0.5,,,5,10,0,0,,");
        assert_eq!(lines[2], ",rcc,scm,0.123456789,0.5,,1500,5,10,0,0,,1400");
        assert_eq!(format_csv(&[]).lines().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.json");
        let rows = vec![row(Some(1.0), true), row(None, false)];
        write_results(&rows, &path, OutputFormat::Json).unwrap();
        assert_eq!(read_results_json(&path).unwrap(), rows);
    }

    #[test]
    fn spectrum_csv() {
        let d = SpectrumDump {
            method: "rap".into(),
            covariance: "scm".into(),
            seed: 4,
            true_elevations: vec![-6.5, 6.5],
            estimated_elevations: vec![-6.0, 7.0],
            elevations: vec![0.0, 1.0],
            spectra: vec![vec![1.0, 2.0], vec![3.0, 4.0]],
        };
        let csv = d.to_csv();
        assert!(csv.contains("# true_elevations_m -6.5 6.5\n"));
        assert!(csv.ends_with("1,4,1\n"));
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 5);
    }
}
