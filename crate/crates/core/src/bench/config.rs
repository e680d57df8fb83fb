//! Experiment configuration: JSON documents with per-field defaults, dotted
//! overrides and validation with field paths.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::covest::{CovarianceEstimator, OptimalOptions, SubspaceNorm};
use crate::detect::{Criterion, DetectorKind, RelaxOptions};
use crate::error::{Error, Result};
use crate::metrics::DetectionGate;
use crate::model::ReflectivityModel;

/// Environment variable overriding `master_seed`.
pub const SEED_ENV: &str = "TOMO_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub geometry: GeometryConfig,
    pub grid: GridConfig,
    pub scene: SceneConfig,
    pub looks: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub methods: Vec<MethodSpec>,
    pub sweep: SweepKind,
    pub sweep_values: Vec<f64>,
    pub model_order: ModelOrderMode,
    pub gate: GateConfig,
    /// Compute the subspace distance of each covariance estimate to the truth.
    pub subspace_distance: bool,
    pub subspace_norm: SubspaceNorm,
    /// Fill the runtime columns. Off by default: wall-clock times would make
    /// otherwise identical runs differ.
    pub timing: bool,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            geometry: GeometryConfig::default(),
            grid: GridConfig::default(),
            scene: SceneConfig::default(),
            looks: 25,
            trials: 500,
            master_seed: 1,
            methods: default_methods(),
            sweep: SweepKind::None,
            sweep_values: Vec::new(),
            model_order: ModelOrderMode::Known,
            gate: GateConfig::Rayleigh,
            subspace_distance: false,
            subspace_norm: SubspaceNorm::Frobenius,
            timing: false,
            output: OutputConfig::default(),
        }
    }
}

fn default_methods() -> Vec<MethodSpec> {
    vec![
        MethodSpec::new(DetectorKind::Nls, CovarianceChoice::Scm),
        MethodSpec::new(DetectorKind::RccMusic, CovarianceChoice::CorrsubSuboptimal),
        MethodSpec::new(DetectorKind::RccMusic, CovarianceChoice::Scm),
        MethodSpec::new(DetectorKind::RapMusic, CovarianceChoice::Scm),
        MethodSpec::new(DetectorKind::Sglrtc, CovarianceChoice::Scm),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    /// Number of channels N (ignored when `xi` is given).
    pub n: usize,
    /// Rayleigh resolution in meters.
    pub rho_s: f64,
    /// Explicit spatial frequencies; must span exactly `1/rho_s`.
    pub xi: Option<Vec<f64>>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            n: 14,
            rho_s: 26.0,
            xi: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Number of grid points M.
    pub m: usize,
    /// Spacing in meters; defaults to `span_cells·rho_s/M`.
    pub spacing: Option<f64>,
    /// Grid extent in Rayleigh cells when `spacing` is not given.
    pub span_cells: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            m: 234,
            spacing: None,
            span_cells: 9.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub k: usize,
    /// Target separation in Rayleigh cells, used when `indices` is absent.
    pub alpha: f64,
    /// Explicit 0-based grid indices.
    pub indices: Option<Vec<usize>>,
    /// Per-target powers; every target gets `power` when absent.
    pub powers: Option<Vec<f64>>,
    pub power: f64,
    /// Signal-to-noise ratio in dB relative to the mean target power;
    /// `null` simulates noiseless data.
    pub snr_db: Option<f64>,
    pub snr_convention: SnrConvention,
    pub reflectivity: ReflectivityModel,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            k: 2,
            alpha: 0.5,
            indices: None,
            powers: None,
            power: 1.0,
            snr_db: Some(10.0),
            snr_convention: SnrConvention::SteeringEnergy,
            reflectivity: ReflectivityModel::Gaussian,
        }
    }
}

/// How a nominal SNR maps to the noise power `σ²_w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrConvention {
    /// `σ²_w = σ²_s·‖a‖²/SNR = σ²_s/(N·SNR)`: SNR of the matched-filter
    /// output, i.e. `σ²_s/σ²_w` for a unit-norm steering vector.
    #[default]
    SteeringEnergy,
    /// `σ²_w = σ²_s/SNR` taken literally with the `1/N`-scaled steering vector.
    Raw,
}

impl SnrConvention {
    pub fn noise_power(&self, signal_power: f64, snr_linear: f64, n: usize) -> f64 {
        match self {
            SnrConvention::SteeringEnergy => signal_power / (n as f64 * snr_linear),
            SnrConvention::Raw => signal_power / snr_linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    #[default]
    None,
    Snr,
    Alpha,
    GridSize,
    Antennas,
    Looks,
}

impl SweepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepKind::None => "none",
            SweepKind::Snr => "snr",
            SweepKind::Alpha => "alpha",
            SweepKind::GridSize => "grid_size",
            SweepKind::Antennas => "antennas",
            SweepKind::Looks => "looks",
        }
    }

    fn integral(&self) -> bool {
        matches!(self, SweepKind::GridSize | SweepKind::Antennas | SweepKind::Looks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelOrderMode {
    /// Use the true number of targets.
    #[default]
    Known,
    Aic,
    Mdl,
}

impl ModelOrderMode {
    pub fn criterion(&self) -> Option<Criterion> {
        match self {
            ModelOrderMode::Known => None,
            ModelOrderMode::Aic => Some(Criterion::Aic),
            ModelOrderMode::Mdl => Some(Criterion::Mdl),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateConfig {
    /// Errors below one Rayleigh cell.
    #[default]
    Rayleigh,
    /// Errors below half the true target separation.
    HalfSeparation,
    /// Errors below a fixed distance in meters.
    Absolute(f64),
}

impl GateConfig {
    pub fn gate(&self, rho_s: f64) -> DetectionGate {
        match *self {
            GateConfig::Rayleigh => DetectionGate::rayleigh(rho_s),
            GateConfig::HalfSeparation => DetectionGate::HalfSeparation,
            GateConfig::Absolute(limit) => DetectionGate::Absolute { limit },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceChoice {
    #[default]
    Scm,
    CorrsubSuboptimal,
    CorrsubSimplified,
    CorrsubOptimal,
}

impl CovarianceChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            CovarianceChoice::Scm => "scm",
            CovarianceChoice::CorrsubSuboptimal => "corrsub_suboptimal",
            CovarianceChoice::CorrsubSimplified => "corrsub_simplified",
            CovarianceChoice::CorrsubOptimal => "corrsub_optimal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodOptions {
    /// Remove the estimated noise floor before projecting.
    pub subtract_noise: bool,
    /// Restrict the estimate to the PSD cone.
    pub enforce_psd: bool,
    pub max_iter: usize,
    pub tol: f64,
    pub relax: RelaxOptions,
}

impl Default for MethodOptions {
    fn default() -> Self {
        let opt = OptimalOptions::default();
        Self {
            subtract_noise: opt.subtract_noise,
            enforce_psd: opt.enforce_psd,
            max_iter: opt.max_iter,
            tol: opt.tol,
            relax: RelaxOptions::default(),
        }
    }
}

/// One detector/covariance pairing to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodSpec {
    /// `"none"` evaluates the covariance estimate only.
    #[serde(serialize_with = "ser_detector", deserialize_with = "de_detector")]
    pub detector: Option<DetectorKind>,
    pub covariance: CovarianceChoice,
    pub options: MethodOptions,
}

impl Default for MethodSpec {
    fn default() -> Self {
        Self::new(DetectorKind::RccMusic, CovarianceChoice::Scm)
    }
}

fn ser_detector<S: Serializer>(d: &Option<DetectorKind>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(d.map_or("none", |d| d.as_str()))
}

fn de_detector<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<DetectorKind>, D::Error> {
    let name = String::deserialize(d)?;
    if name == "none" {
        return Ok(None);
    }
    DetectorKind::parse(&name).map(Some).ok_or_else(|| {
        let known: Vec<&str> = DetectorKind::ALL.iter().map(|d| d.as_str()).collect();
        serde::de::Error::custom(format!("unknown detector `{name}`, expected none or one of {}", known.join(", ")))
    })
}

impl MethodSpec {
    pub fn new(detector: DetectorKind, covariance: CovarianceChoice) -> Self {
        Self {
            detector: Some(detector),
            covariance,
            options: MethodOptions::default(),
        }
    }

    pub fn covariance_only(covariance: CovarianceChoice) -> Self {
        Self {
            detector: None,
            covariance,
            options: MethodOptions::default(),
        }
    }

    pub fn with_noise_subtraction(mut self, on: bool) -> Self {
        self.options.subtract_noise = on;
        self
    }

    pub fn with_psd(mut self, on: bool) -> Self {
        self.options.enforce_psd = on;
        self
    }

    pub fn detector_name(&self) -> &'static str {
        self.detector.map_or("none", |d| d.as_str())
    }

    /// Covariance column label; variants that switch off noise subtraction
    /// or the PSD step get `_noncanceled` / `_nopsd` suffixes.
    pub fn covariance_label(&self) -> String {
        let mut label = self.covariance.as_str().to_string();
        if matches!(
            self.covariance,
            CovarianceChoice::CorrsubSuboptimal | CovarianceChoice::CorrsubOptimal
        ) {
            if !self.options.subtract_noise {
                label.push_str("_noncanceled");
            }
            if !self.options.enforce_psd {
                label.push_str("_nopsd");
            }
        }
        label
    }

    pub fn estimator(&self) -> CovarianceEstimator {
        let o = &self.options;
        match self.covariance {
            CovarianceChoice::Scm => CovarianceEstimator::Scm,
            CovarianceChoice::CorrsubSuboptimal => CovarianceEstimator::Suboptimal {
                subtract_noise: o.subtract_noise,
                enforce_psd: o.enforce_psd,
            },
            CovarianceChoice::CorrsubSimplified => CovarianceEstimator::Simplified,
            CovarianceChoice::CorrsubOptimal => CovarianceEstimator::Optimal(OptimalOptions {
                subtract_noise: o.subtract_noise,
                enforce_psd: o.enforce_psd,
                max_iter: o.max_iter,
                tol: o.tol,
            }),
        }
    }
}

impl ExperimentConfig {
    /// Reads a JSON config; missing fields take their defaults.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_value(value)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::config("<root>", e.to_string()))?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let cfg: Self = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
        })?;
        Ok(cfg)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// Applies `key=value` overrides with dotted paths (`scene.alpha=0.3`,
    /// `methods.0.detector=nls`); later entries win. Values are parsed as
    /// JSON when possible and taken as strings otherwise.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        let mut value = self.to_value();
        for raw in overrides {
            let raw = raw.as_ref().trim_start_matches("--");
            let (key, val) = raw
                .split_once('=')
                .ok_or_else(|| Error::config(raw, "override must look like key=value"))?;
            let parsed: Value = serde_json::from_str(val).unwrap_or_else(|_| Value::String(val.to_string()));
            set_path(&mut value, key, parsed)?;
        }
        Self::from_value(value)
    }

    /// Applies `TOMO_SEED` when set.
    pub fn with_env_seed(mut self) -> Result<Self> {
        if let Ok(seed) = std::env::var(SEED_ENV) {
            self.master_seed = seed
                .trim()
                .parse()
                .map_err(|_| Error::config("master_seed", format!("{SEED_ENV}={seed:?} is not an unsigned integer")))?;
        }
        Ok(self)
    }

    /// Every problem found, each tagged with its field path.
    pub fn problems(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut bad = |path: &str, msg: String| out.push((path.to_string(), msg));
        if self.trials < 1 {
            bad("trials", "must be at least 1".into());
        }
        if self.looks < 1 {
            bad("looks", "must be at least 1".into());
        }
        if !(self.geometry.rho_s > 0.0) || !self.geometry.rho_s.is_finite() {
            bad("geometry.rho_s", "must be positive".into());
        }
        match &self.geometry.xi {
            Some(xi) if xi.len() < 2 => bad("geometry.xi", "needs at least 2 frequencies".into()),
            None if self.geometry.n < 2 => bad("geometry.n", "must be at least 2".into()),
            _ => {}
        }
        if self.grid.m < 2 {
            bad("grid.m", "must be at least 2".into());
        }
        if let Some(d) = self.grid.spacing {
            if !(d > 0.0) || !d.is_finite() {
                bad("grid.spacing", "must be positive".into());
            }
        } else if !(self.grid.span_cells > 0.0) {
            bad("grid.span_cells", "must be positive".into());
        }
        let sc = &self.scene;
        if sc.k < 1 {
            bad("scene.k", "must be at least 1".into());
        }
        if !(sc.power > 0.0) {
            bad("scene.power", "must be positive".into());
        }
        if let Some(idx) = &sc.indices {
            if idx.len() != sc.k {
                bad("scene.indices", format!("has {} entries for k = {}", idx.len(), sc.k));
            }
            if self.sweep == SweepKind::Alpha {
                bad("scene.indices", "explicit indices cannot be combined with an alpha sweep".into());
            }
        } else if !(sc.alpha > 0.0) {
            bad("scene.alpha", "must be positive".into());
        }
        if let Some(p) = &sc.powers {
            if p.len() != sc.k {
                bad("scene.powers", format!("has {} entries for k = {}", p.len(), sc.k));
            }
            if p.iter().any(|v| !(*v > 0.0)) {
                bad("scene.powers", "must all be positive".into());
            }
        }
        if let Some(s) = sc.snr_db {
            if !s.is_finite() {
                bad("scene.snr_db", "must be finite (use null for noiseless data)".into());
            }
        }
        if self.sweep != SweepKind::None {
            if self.sweep_values.is_empty() {
                bad("sweep_values", format!("must be non-empty for sweep `{}`", self.sweep.as_str()));
            }
            for (i, v) in self.sweep_values.iter().enumerate() {
                let ok = v.is_finite()
                    && match self.sweep {
                        SweepKind::Snr => true,
                        SweepKind::Alpha => *v > 0.0,
                        _ => *v >= 1.0 && v.fract() == 0.0,
                    };
                if !ok {
                    let want = if self.sweep.integral() { "a positive integer" } else { "a valid value" };
                    bad(&format!("sweep_values.{i}"), format!("{v} is not {want}"));
                }
            }
        }
        if self.methods.is_empty() {
            bad("methods", "at least one method is required".into());
        }
        for (i, m) in self.methods.iter().enumerate() {
            let path = format!("methods.{i}");
            match m.detector {
                None if !self.subspace_distance => bad(
                    &format!("{path}.detector"),
                    "`none` only makes sense with subspace_distance = true".into(),
                ),
                Some(d) if !d.uses_covariance() && m.covariance != CovarianceChoice::Scm => bad(
                    &format!("{path}.covariance"),
                    format!("{} works on the snapshots; only `scm` applies", d.as_str()),
                ),
                Some(DetectorKind::Nls) if sc.k > 2 => {
                    bad(&format!("{path}.detector"), "nls supports k ≤ 2".into())
                }
                _ => {}
            }
            if m.options.max_iter < 1 {
                bad(&format!("{path}.options.max_iter"), "must be at least 1".into());
            }
            if !(m.options.tol >= 0.0) {
                bad(&format!("{path}.options.tol"), "must be non-negative".into());
            }
            if m.options.relax.max_iter < 1 {
                bad(&format!("{path}.options.relax.max_iter"), "must be at least 1".into());
            }
        }
        if let GateConfig::Absolute(limit) = self.gate {
            if !(limit > 0.0) {
                bad("gate.absolute", "must be positive".into());
            }
        }
        out
    }

    /// Errors with the first problem, naming its field.
    pub fn validate(&self) -> Result<()> {
        match self.problems().into_iter().next() {
            Some((path, message)) => Err(Error::config(path, message)),
            None => Ok(()),
        }
    }

    /// Sweep points as `(sweep index, value)`; a single unnamed point when
    /// nothing is swept.
    pub fn sweep_points(&self) -> Vec<(usize, Option<f64>)> {
        if self.sweep == SweepKind::None {
            vec![(0, None)]
        } else {
            self.sweep_values.iter().copied().enumerate().map(|(i, v)| (i, Some(v))).collect()
        }
    }
}

fn set_path(root: &mut Value, key: &str, new: Value) -> Result<()> {
    let segments: Vec<&str> = key.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(Error::config(key, "empty path segment"));
    }
    let mut cur = root;
    for (depth, seg) in segments.iter().enumerate() {
        let so_far = segments[..=depth].join(".");
        let last = depth + 1 == segments.len();
        cur = match cur {
            Value::Object(map) => {
                if !map.contains_key(*seg) {
                    return Err(Error::config(&so_far, format!("unknown config field `{so_far}`")));
                }
                let slot = map.get_mut(*seg).expect("checked above");
                if last {
                    *slot = new;
                    return Ok(());
                }
                slot
            }
            Value::Array(items) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| Error::config(&so_far, format!("`{seg}` is not a list index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(i)
                    .ok_or_else(|| Error::config(&so_far, format!("index {i} out of range (length {len})")))?;
                if last {
                    *slot = new;
                    return Ok(());
                }
                slot
            }
            _ => {
                return Err(Error::config(&so_far, format!("unknown config field `{so_far}`")));
            }
        };
    }
    unreachable!("loop returns on the last segment")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_all_defaults() {
        let cfg = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!((cfg.geometry.n, cfg.looks, cfg.grid.m, cfg.trials, cfg.scene.k), (14, 25, 234, 500, 2));
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn round_trips_through_json() {
        let mut cfg = ExperimentConfig::default();
        cfg.gate = GateConfig::Absolute(3.5);
        cfg.methods.push(MethodSpec::covariance_only(CovarianceChoice::CorrsubOptimal).with_psd(false));
        cfg.subspace_distance = true;
        let back = ExperimentConfig::from_value(cfg.to_value()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_fields_are_named() {
        let err = ExperimentConfig::from_json(r#"{"scene": {"alpah": 1}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("alpah"), "{msg}");
        let err = ExperimentConfig::default().with_overrides(&["scene.alph=0.3"]).unwrap_err();
        assert!(err.to_string().contains("scene.alph"), "{err}");
        let err = ExperimentConfig::from_json(r#"{"methods": [{"detector": "musik"}]}"#).unwrap_err();
        assert!(err.to_string().contains("methods[0].detector"), "{err}");
    }

    #[test]
    fn overrides_last_wins() {
        let cfg = ExperimentConfig::default()
            .with_overrides(&["scene.alpha=0.3", "--trials=10", "scene.alpha=0.7", "methods.1.detector=nls"])
            .unwrap();
        assert_eq!(cfg.scene.alpha, 0.7);
        assert_eq!(cfg.trials, 10);
        assert_eq!(cfg.methods[1].detector, Some(DetectorKind::Nls));
        let cfg = cfg.with_overrides(&["output.path=out/x.csv", "scene.snr_db=null"]).unwrap();
        assert_eq!(cfg.output.path.as_deref(), Some(Path::new("out/x.csv")));
        assert_eq!(cfg.scene.snr_db, None);
        assert!(cfg.with_overrides(&["methods.9.detector=nls"]).is_err());
        assert!(cfg.with_overrides(&["trials"]).is_err());
    }

    #[test]
    fn validation_names_fields() {
        let mut cfg = ExperimentConfig {
            sweep: SweepKind::Snr,
            ..Default::default()
        };
        assert_eq!(cfg.problems()[0].0, "sweep_values");
        cfg.sweep_values = vec![0.0];
        cfg.methods[0].covariance = CovarianceChoice::CorrsubOptimal;
        assert_eq!(cfg.problems()[0].0, "methods.0.covariance");
        cfg.methods = vec![MethodSpec::covariance_only(CovarianceChoice::Scm)];
        assert_eq!(cfg.problems()[0].0, "methods.0.detector");
        cfg.trials = 0;
        assert_eq!(cfg.problems()[0].0, "trials");
    }

    #[test]
    fn covariance_labels() {
        let m = MethodSpec::covariance_only(CovarianceChoice::CorrsubSuboptimal).with_noise_subtraction(false);
        assert_eq!(m.covariance_label(), "corrsub_suboptimal_noncanceled");
        let m = MethodSpec::covariance_only(CovarianceChoice::CorrsubOptimal).with_psd(false);
        assert_eq!(m.covariance_label(), "corrsub_optimal_nopsd");
        assert_eq!(MethodSpec::default().covariance_label(), "scm");
    }

    #[test]
    fn snr_conventions() {
        assert!((SnrConvention::SteeringEnergy.noise_power(1.0, 10.0, 14) - 1.0 / 140.0).abs() < 1e-15);
        assert_eq!(SnrConvention::Raw.noise_power(2.0, 4.0, 14), 0.5);
    }
}
