//! Randomized invariants across modules.

use proptest::prelude::*;

use crate::bench::{format_csv, format_json, ResultRow};
use crate::covest::{build_correlation_subspace, sample_covariance, subspace_distance, CovarianceEstimate, CovarianceKind, SubspaceNorm};
use crate::detect::{DetectionInput, DetectorKind, RelaxOptions};
use crate::linalg::{self, CMatrix, C64};
use crate::metrics::{crlb_double, crlb_single, match_estimates, zeta, DetectionGate};
use crate::model::{
    make_uniform_geometry, simulate_snapshots, steering_matrix, steering_vector, ElevationGrid, ReflectivityModel,
    ScattererScene,
};

fn hermitian(n: usize, entries: &[(f64, f64)]) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |p, q| {
        let (re, im) = entries[p * n + q];
        C64::new(re, im)
    });
    linalg::hermitian_part(&m)
}

fn hermitian_strategy(max_n: usize) -> impl Strategy<Value = CMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |e| hermitian(n, &e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(h in hermitian_strategy(9)) {
        let eig = linalg::hermitian_eig(&h).unwrap();
        prop_assert!((eig.reconstruct() - &h).norm() < 1e-10 * (1.0 + h.norm()));
        prop_assert!(eig.values().windows(2).all(|w| w[0] >= w[1]));
        let v = eig.vectors();
        let gram = v.adjoint() * v;
        prop_assert!((gram - CMatrix::identity(h.nrows(), h.nrows())).norm() < 1e-10);
    }

    #[test]
    fn psd_projection_is_nearest_and_psd(h in hermitian_strategy(8)) {
        let p = linalg::psd_projection(&h).unwrap();
        let eig = linalg::hermitian_eig(&p).unwrap();
        prop_assert!(*eig.values().last().unwrap() > -1e-12);
        // distance equals the norm of the clipped negative spectrum
        let neg: f64 = linalg::hermitian_eig(&h).unwrap().values().iter().map(|l| l.min(0.0).powi(2)).sum();
        prop_assert!(((p - &h).norm() - neg.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn steering_energy_is_one_over_n(n in 2usize..40, s in -500.0..500.0f64) {
        let geom = make_uniform_geometry(n, 26.0).unwrap();
        let a = steering_vector(&geom, s);
        prop_assert!((a.norm_squared() - 1.0 / n as f64).abs() < 1e-14);
    }

    #[test]
    fn corrsub_projection_is_idempotent_and_hermitian(entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 64)) {
        let geom = make_uniform_geometry(8, 26.0).unwrap();
        let a = steering_matrix(&geom, &ElevationGrid::rayleigh_span(120, 26.0, 9.0).unwrap());
        let basis = build_correlation_subspace(&a).unwrap();
        let x = hermitian(8, &entries);
        let p = basis.project(&x);
        prop_assert!((basis.project(&p) - &p).norm() < 1e-10);
        prop_assert!((p.adjoint() - &p).norm() < 1e-12);
        prop_assert!(basis.residual(&p) < 1e-10);
    }

    #[test]
    fn detectors_ignore_stack_scale(seed in any::<u64>(), c in 0.01..100.0f64, first in 20usize..120) {
        let geom = make_uniform_geometry(14, 26.0).unwrap();
        let a = steering_matrix(&geom, &ElevationGrid::rayleigh_span(234, 26.0, 9.0).unwrap());
        let scene = ScattererScene::new(vec![first, first + 30], vec![1.0, 0.8], 0.01).unwrap();
        let stack = simulate_snapshots(&scene, &a, 25, seed, ReflectivityModel::Gaussian).unwrap();
        let scaled = stack.scaled(c);
        let (r, rs) = (sample_covariance(&stack), sample_covariance(&scaled));
        for d in DetectorKind::ALL.into_iter().filter(|d| *d != DetectorKind::Nls) {
            let run = |st, cov| {
                let input = DetectionInput { stack: st, covariance: cov, steering: &a, relax: RelaxOptions::default() };
                d.run(&input, 2).unwrap().omega
            };
            prop_assert_eq!(run(&stack, &r), run(&scaled, &rs), "{}", d.as_str());
        }
    }

    #[test]
    fn matching_ignores_estimate_order(
        truth in prop::collection::vec(-100.0..100.0f64, 1..5),
        noise in prop::collection::vec(-3.0..3.0f64, 5),
        rot in 0usize..5,
    ) {
        let est: Vec<f64> = truth.iter().zip(&noise).map(|(t, e)| t + e).collect();
        let mut shuffled = est.clone();
        shuffled.rotate_left(rot % est.len());
        shuffled.reverse();
        let gate = DetectionGate::rayleigh(26.0);
        let (a, b) = (match_estimates(&est, &truth, gate).unwrap(), match_estimates(&shuffled, &truth, gate).unwrap());
        prop_assert_eq!(a.detected, b.detected);
        prop_assert!((a.mse() - b.mse()).abs() < 1e-9);
    }

    #[test]
    fn zeta_is_monotone_and_bounds_are_ordered(a1 in 0.01..5.0f64, a2 in 0.01..5.0f64, snr in 0.01..1e3f64) {
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        prop_assert!(zeta(lo).unwrap() >= zeta(hi).unwrap());
        prop_assert!(zeta(hi).unwrap() >= 1.0);
        prop_assert!(crlb_double(26.0, 25.0, 14.0, snr, lo).unwrap() >= crlb_single(26.0, 25.0, 14.0, snr).unwrap());
    }

    #[test]
    fn subspace_distance_is_bounded(h1 in hermitian_strategy(6), entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 36), k in 1usize..3) {
        let n = h1.nrows();
        let k = k.min(n - 1);
        let h2 = hermitian(n, &entries[..n * n]);
        let (r1, r2) = (
            CovarianceEstimate::new(h1.clone(), CovarianceKind::Scm).unwrap(),
            CovarianceEstimate::new(h2, CovarianceKind::Scm).unwrap(),
        );
        let d = subspace_distance(&r1, &r2, k, SubspaceNorm::Frobenius).unwrap();
        prop_assert!((0.0..=(k as f64).sqrt() + 1e-12).contains(&d));
        // zero against itself whenever the signal subspace is well defined
        let vals = linalg::hermitian_eig(&h1).unwrap().values().to_vec();
        if vals[k - 1] - vals[k] > 1e-3 {
            prop_assert!(subspace_distance(&r1, &r1, k, SubspaceNorm::Frobenius).unwrap() < 1e-6);
        }
    }

    #[test]
    fn result_rows_serialize_consistently(
        // dyadic values, so the JSON round trip is exact
        vals in prop::collection::vec((prop::option::of(-8_000_000i32..8_000_000), 0usize..1000, prop::option::of(0u32..80)), 1..6),
    ) {
        let rows: Vec<ResultRow> = vals
            .iter()
            .enumerate()
            .map(|(i, &(sv, trials, r))| ResultRow {
                sweep_value: sv.map(|v| v as f64 / 8.0),
                method: format!("m{i}"),
                covariance: "scm".into(),
                rmse_normalized: r.map(|v| v as f64 / 8.0),
                detection_rate: Some(0.5),
                mean_subspace_distance: None,
                mean_runtime_ns: None,
                trials_detected: trials / 2,
                trials,
                errors: 0,
                nonconverged: 0,
                crlb_normalized: r.map(|v| v as f64 / 16.0),
                median_runtime_ns: None,
            })
            .collect();
        let csv = format_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        prop_assert_eq!(lines.len(), rows.len() + 1);
        prop_assert_eq!(lines[0].split(',').count(), 13);
        prop_assert!(lines.iter().all(|l| l.split(',').count() == 13));
        let back: Vec<ResultRow> = serde_json::from_str(&format_json(&rows)).unwrap();
        prop_assert_eq!(back, rows);
    }
}
