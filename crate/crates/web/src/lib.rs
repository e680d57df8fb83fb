//! Browser bindings. Each export takes plain numbers and returns a JSON
//! string; `www/app.js` draws it on a canvas.

use serde::Serialize;
use tomo_core::bench::{
    run_experiment, spectrum_dump, CovarianceChoice, ExperimentConfig, MethodSpec, ResultRow, SpectrumDump,
    SweepKind,
};
use tomo_core::detect::DetectorKind;
use tomo_core::metrics::{crlb_double, crlb_single, zeta};
use tomo_core::model::trial_seed;
use wasm_bindgen::prelude::*;

fn covariance(name: &str) -> Result<CovarianceChoice, String> {
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| format!("unknown covariance `{name}`"))
}

fn scene_config(snr_db: f64, alpha: f64, looks: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        name: "web".into(),
        looks,
        master_seed: seed,
        ..Default::default()
    };
    cfg.scene.snr_db = Some(snr_db);
    cfg.scene.alpha = alpha;
    cfg
}

/// Classical, RAP and RCC pseudo-spectra of one simulated stack.
pub fn spectra_json(snr_db: f64, alpha: f64, looks: usize, cov: &str, seed: u64) -> Result<String, String> {
    let cfg = scene_config(snr_db, alpha, looks, seed);
    cfg.validate().map_err(|e| e.to_string())?;
    let choice = covariance(cov)?;
    let stack_seed = trial_seed(seed, 0, 0);
    let dumps: Vec<SpectrumDump> = [DetectorKind::ClassicalMusic, DetectorKind::RapMusic, DetectorKind::RccMusic]
        .into_iter()
        .map(|d| spectrum_dump(&cfg, &MethodSpec::new(d, choice), stack_seed))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&dumps).unwrap())
}

/// Mean subspace distance vs looks for the SCM and both denoisers.
pub fn subspace_json(snr_db: f64, alpha: f64, trials: usize, seed: u64) -> Result<String, String> {
    let mut cfg = scene_config(snr_db, alpha, 25, seed);
    cfg.trials = trials;
    cfg.sweep = SweepKind::Looks;
    cfg.sweep_values = vec![10.0, 20.0, 40.0, 60.0, 80.0, 100.0];
    cfg.subspace_distance = true;
    cfg.methods = vec![
        MethodSpec::covariance_only(CovarianceChoice::Scm),
        MethodSpec::covariance_only(CovarianceChoice::CorrsubSuboptimal),
        MethodSpec::covariance_only(CovarianceChoice::CorrsubOptimal),
    ];
    cfg.validate().map_err(|e| e.to_string())?;
    let rows: Vec<ResultRow> = run_experiment(&cfg).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&rows).unwrap())
}

#[derive(Serialize)]
struct BoundPoint {
    alpha: f64,
    zeta: f64,
    /// `√CRLB/ρ_s`, one scatterer.
    single: f64,
    /// `√CRLB/ρ_s`, each of two scatterers `α` cells apart.
    double: f64,
}

/// Localization bounds vs separation.
pub fn bounds_json(snr_db: f64, looks: f64, channels: f64) -> Result<String, String> {
    let snr = 10f64.powf(snr_db / 10.0);
    let rho = 1.0;
    let single = crlb_single(rho, looks, channels, snr).map_err(|e| e.to_string())?.sqrt();
    let points = (1..=60)
        .map(|i| {
            let alpha = 0.05 * i as f64;
            Ok(BoundPoint {
                alpha,
                zeta: zeta(alpha)?,
                single,
                double: crlb_double(rho, looks, channels, snr, alpha)?.sqrt(),
            })
        })
        .collect::<tomo_core::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&points).unwrap())
}

#[wasm_bindgen]
pub fn spectra(snr_db: f64, alpha: f64, looks: usize, covariance: &str, seed: u32) -> Result<String, JsError> {
    spectra_json(snr_db, alpha, looks, covariance, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn subspace_curve(snr_db: f64, alpha: f64, trials: usize, seed: u32) -> Result<String, JsError> {
    subspace_json(snr_db, alpha, trials, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bound_curve(snr_db: f64, looks: f64, channels: f64) -> Result<String, JsError> {
    bounds_json(snr_db, looks, channels).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectra_payload() {
        let v: serde_json::Value = serde_json::from_str(&spectra_json(14.0, 0.5, 25, "scm", 1).unwrap()).unwrap();
        let dumps = v.as_array().unwrap();
        assert_eq!(dumps.len(), 3);
        assert_eq!(dumps[0]["method"], "classical_music");
        // sequential methods: one spectrum per found scatterer
        assert_eq!(dumps[2]["spectra"].as_array().unwrap().len(), 2);
        assert_eq!(dumps[2]["elevations"].as_array().unwrap().len(), 234);
        assert!(spectra_json(14.0, 0.5, 25, "median", 1).is_err());
        assert!(spectra_json(14.0, -1.0, 25, "scm", 1).is_err());
    }

    #[test]
    fn subspace_payload() {
        let rows: Vec<ResultRow> = serde_json::from_str(&subspace_json(-6.0, 1.0, 3, 5).unwrap()).unwrap();
        assert_eq!(rows.len(), 18);
        assert!(rows.iter().all(|r| r.mean_subspace_distance.is_some()));
    }

    #[test]
    fn bound_payload() {
        let v: serde_json::Value = serde_json::from_str(&bounds_json(10.0, 25.0, 14.0).unwrap()).unwrap();
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 60);
        let last = &pts[59];
        assert_eq!(last["zeta"], 1.0);
        assert_eq!(last["double"], last["single"]);
        assert!(bounds_json(10.0, 0.0, 14.0).is_err());
    }
}
