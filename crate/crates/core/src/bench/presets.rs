//! Named experiment configurations for the standard figure sweeps.

use super::config::{CovarianceChoice as Cov, ExperimentConfig, GateConfig, MethodSpec, SweepKind};
use crate::detect::DetectorKind as D;

pub const PRESET_NAMES: [&str; 9] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig7_antennas", "fig8", "fig9",
];

/// One-line description of each preset, for listings.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" => "classical MUSIC two-peak resolution, SCM vs correlation subspace (0 dB, alpha 0.7)",
        "fig3" => "RAP vs RCC spectra and errors (14 dB, alpha 0.5)",
        "fig4" => "RAP vs RCC on a tight pair (8 dB, alpha 0.3)",
        "fig5" => "RMSE vs SNR, 6-20 dB, alpha 0.5",
        "fig6" => "RMSE vs separation, alpha 0.3-1.2, 9 dB",
        "fig7" => "runtime vs grid size M",
        "fig7_antennas" => "runtime vs number of channels N",
        "fig8" => "subspace distance vs looks, with and without noise cancellation (-6 dB)",
        "fig9" => "subspace distance vs looks, with and without the PSD constraint (-6 dB)",
        _ => return None,
    })
}

fn range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    // computed from integers so 0.3 + 0.1·i prints as 0.4, 0.5, …
    (0..=n).map(|i| ((start + step * i as f64) * 1e9).round() / 1e9).collect()
}

fn base(name: &str) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        ..Default::default()
    }
}

fn sequential_pair() -> Vec<MethodSpec> {
    vec![
        MethodSpec::new(D::RapMusic, Cov::Scm),
        MethodSpec::new(D::RccMusic, Cov::Scm),
        MethodSpec::new(D::RccMusic, Cov::CorrsubSuboptimal),
    ]
}

fn subspace_study(name: &str, methods: Vec<MethodSpec>) -> ExperimentConfig {
    let mut c = base(name);
    c.scene.snr_db = Some(-6.0);
    c.scene.alpha = 1.0;
    c.trials = 300;
    c.sweep = SweepKind::Looks;
    c.sweep_values = range(10.0, 100.0, 10.0);
    c.subspace_distance = true;
    c.methods = methods;
    c
}

pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let c = match name {
        "fig2" => {
            let mut c = base(name);
            c.scene.snr_db = Some(0.0);
            c.scene.alpha = 0.7;
            c.trials = 200;
            // resolved = each peak nearer its own target than the other one
            c.gate = GateConfig::HalfSeparation;
            c.methods = vec![
                MethodSpec::new(D::ClassicalMusic, Cov::Scm),
                MethodSpec::new(D::ClassicalMusic, Cov::CorrsubSuboptimal),
            ];
            c
        }
        "fig3" | "fig4" => {
            let mut c = base(name);
            let (snr, alpha) = if name == "fig3" { (14.0, 0.5) } else { (8.0, 0.3) };
            c.scene.snr_db = Some(snr);
            c.scene.alpha = alpha;
            c.trials = 200;
            c.methods = sequential_pair();
            c
        }
        "fig5" => {
            let mut c = base(name);
            c.sweep = SweepKind::Snr;
            c.sweep_values = range(6.0, 20.0, 2.0);
            c.methods.push(MethodSpec::new(D::Relax, Cov::Scm));
            c
        }
        "fig6" => {
            let mut c = base(name);
            c.scene.snr_db = Some(9.0);
            c.sweep = SweepKind::Alpha;
            c.sweep_values = range(0.3, 1.2, 0.1);
            c.methods = vec![
                MethodSpec::new(D::RccMusic, Cov::CorrsubSuboptimal),
                MethodSpec::new(D::RccMusic, Cov::Scm),
                MethodSpec::new(D::RapMusic, Cov::Scm),
                MethodSpec::new(D::RapMusic, Cov::CorrsubSuboptimal),
                MethodSpec::new(D::Sglrtc, Cov::Scm),
            ];
            c
        }
        "fig7" => {
            let mut c = base(name);
            c.sweep = SweepKind::GridSize;
            c.sweep_values = vec![2000.0, 4000.0, 8000.0, 16000.0, 32000.0];
            c.trials = 9;
            c.timing = true;
            c.methods = vec![
                MethodSpec::new(D::Nls, Cov::Scm),
                MethodSpec::new(D::ClassicalMusic, Cov::Scm),
                MethodSpec::new(D::RapMusic, Cov::Scm),
                MethodSpec::new(D::RccMusic, Cov::Scm),
                MethodSpec::new(D::RccMusic, Cov::CorrsubSuboptimal),
                MethodSpec::new(D::Sglrtc, Cov::Scm),
                MethodSpec::new(D::Relax, Cov::Scm),
            ];
            c
        }
        "fig7_antennas" => {
            let mut c = base(name);
            c.sweep = SweepKind::Antennas;
            c.sweep_values = range(8.0, 32.0, 4.0);
            c.trials = 50;
            c.timing = true;
            // keeps the grid inside one steering period for N = 8
            c.grid.span_cells = 6.0;
            c.methods = vec![
                MethodSpec::new(D::RapMusic, Cov::Scm),
                MethodSpec::new(D::RapMusic, Cov::CorrsubSuboptimal),
                MethodSpec::new(D::RccMusic, Cov::Scm),
                MethodSpec::new(D::RccMusic, Cov::CorrsubSuboptimal),
            ];
            c
        }
        "fig8" => subspace_study(
            name,
            vec![
                MethodSpec::covariance_only(Cov::Scm),
                MethodSpec::covariance_only(Cov::CorrsubSuboptimal),
                MethodSpec::covariance_only(Cov::CorrsubSuboptimal).with_noise_subtraction(false),
                MethodSpec::covariance_only(Cov::CorrsubOptimal),
                MethodSpec::covariance_only(Cov::CorrsubOptimal).with_noise_subtraction(false),
            ],
        ),
        "fig9" => subspace_study(
            name,
            vec![
                MethodSpec::covariance_only(Cov::Scm),
                MethodSpec::covariance_only(Cov::CorrsubOptimal),
                MethodSpec::covariance_only(Cov::CorrsubOptimal).with_psd(false),
                MethodSpec::covariance_only(Cov::CorrsubSuboptimal),
                MethodSpec::covariance_only(Cov::CorrsubSuboptimal).with_psd(false),
            ],
        ),
        _ => return None,
    };
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            assert!(c.validate().is_ok(), "{name}: {:?}", c.problems());
            assert_eq!(c.name, name);
            assert!(describe(name).is_some());
            let back = ExperimentConfig::from_value(c.to_value()).unwrap();
            assert_eq!(back, c);
        }
        assert!(preset("fig1").is_none());
    }

    #[test]
    fn sweep_values() {
        assert_eq!(preset("fig5").unwrap().sweep_values, vec![6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0]);
        let a = preset("fig6").unwrap().sweep_values;
        assert_eq!(a.len(), 10);
        assert_eq!(a[1], 0.4);
        assert_eq!(a[9], 1.2);
    }
}
