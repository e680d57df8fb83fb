//! Monte Carlo bench: configs, seeded runs, result tables and timing sweeps.

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;
pub mod timing;

pub use config::{
    CovarianceChoice, ExperimentConfig, GateConfig, MethodOptions, MethodSpec, ModelOrderMode, OutputFormat,
    SnrConvention, SweepKind, SEED_ENV,
};
pub use output::{format_csv, format_json, format_results, read_results_json, write_results, ResultRow, SpectrumDump};
pub use presets::{preset, PRESET_NAMES};
pub use runner::{run_experiment, run_experiment_with, run_trial, spectrum_dump, PointSetup, RunOptions};
pub use timing::{loglog_slope, run_timing_sweep, SlopeFit, TimingReport};
