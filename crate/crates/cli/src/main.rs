//! `tomo`: Monte Carlo experiments, spectrum dumps and self-checks.
//!
//! Exit codes: 0 success, 1 self-check failure, 2 bad config or input,
//! 3 output I/O failure, 4 estimator failures in more than half the trials.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tomo_core::bench::{
    format_results, preset, presets, run_experiment_with, run_timing_sweep, spectrum_dump, write_results,
    CovarianceChoice, ExperimentConfig, MethodSpec, OutputFormat, ResultRow, RunOptions, SweepKind, PRESET_NAMES,
};
use tomo_core::covest::sample_covariance;
use tomo_core::detect::{estimate_model_order, Criterion, DetectorKind};
use tomo_core::model::trial_seed;
use tomo_core::selfcheck::{run_selfcheck, SelfcheckOptions};
use tomo_core::Error;

#[derive(Parser)]
#[command(name = "tomo", version, about = "Scatterer detection experiments for multibaseline SAR tomography")]
struct Cli {
    /// More diagnostics on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON config.
    Run(RunArgs),
    /// List, dump or run a named preset.
    Preset(PresetArgs),
    /// Dump the per-iteration pseudo-spectra of one trial.
    Spectrum(SpectrumArgs),
    /// Run the oracle and invariant suite.
    Selfcheck(SelfcheckArgs),
    /// Model-order selection (AIC/MDL) on simulated trials.
    Order(OrderArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (default: the config's output.path, else results/<name>.<ext>).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write data to stdout instead of a file.
    #[arg(long)]
    stdout: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
    /// `key=value` overrides with dotted paths, e.g. `scene.alpha=0.3` or `--trials=10`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

#[derive(Args)]
struct PresetArgs {
    /// Preset name; omit to list.
    name: Option<String>,
    #[arg(long)]
    list: bool,
    /// Print the preset's JSON config instead of running it.
    #[arg(long)]
    dump: bool,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Config path or preset name.
    source: String,
    #[arg(long, default_value = "rcc_music")]
    method: String,
    #[arg(long, default_value = "scm")]
    covariance: String,
    /// Simulation seed (default: the seed of trial 0).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    stdout: bool,
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Drop one correlation-subspace basis vector (exercises failure reporting).
    #[arg(long, hide = true)]
    corrupt_basis: bool,
}

#[derive(Args)]
struct OrderArgs {
    /// Config path or preset name.
    source: String,
    /// Number of simulated trials.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    /// Anything that goes wrong before a run starts is a config problem.
    fn config(e: Error) -> Self {
        Self::new(2, e.to_string())
    }

    fn run(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => 3,
            Error::Config { .. }
            | Error::Json { .. }
            | Error::Geometry(_)
            | Error::Grid(_)
            | Error::Scene(_)
            | Error::GridTooCoarse { .. }
            | Error::InvalidArgument(_) => 2,
            _ => 4,
        };
        Self::new(code, e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(&cli, args),
        Command::Preset(args) => cmd_preset(&cli, args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Selfcheck(args) => cmd_selfcheck(args),
        Command::Order(args) => cmd_order(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure(base: ExperimentConfig, overrides: &[String]) -> Result<ExperimentConfig, Failure> {
    let cfg = base
        .with_env_seed()
        .and_then(|c| c.with_overrides(overrides))
        .map_err(Failure::config)?;
    cfg.validate().map_err(Failure::config)?;
    Ok(cfg)
}

fn load(source: &str, overrides: &[String]) -> Result<ExperimentConfig, Failure> {
    let base = match preset(source) {
        Some(c) => c,
        None => ExperimentConfig::from_path(Path::new(source)).map_err(Failure::config)?,
    };
    configure(base, overrides)
}

fn cmd_run(cli: &Cli, args: &RunArgs) -> CliResult {
    let base = ExperimentConfig::from_path(&args.config).map_err(Failure::config)?;
    let cfg = configure(base, &args.overrides)?;
    execute(cli, &cfg, &args.out)
}

fn cmd_preset(cli: &Cli, args: &PresetArgs) -> CliResult {
    let name = match (&args.name, args.list) {
        (Some(name), false) => name,
        _ => {
            for name in PRESET_NAMES {
                println!("{name:<14} {}", presets::describe(name).unwrap_or_default());
            }
            return Ok(());
        }
    };
    let base = preset(name).ok_or_else(|| {
        Failure::new(2, format!("unknown preset `{name}`; available: {}", PRESET_NAMES.join(", ")))
    })?;
    let cfg = configure(base, &args.overrides)?;
    if args.dump {
        println!("{}", serde_json::to_string_pretty(&cfg.to_value()).expect("config serializes"));
        return Ok(());
    }
    execute(cli, &cfg, &args.out)
}

fn execute(cli: &Cli, cfg: &ExperimentConfig, out: &OutputArgs) -> CliResult {
    let format = match out.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => cfg.output.format,
    };
    let opts = RunOptions { workers: cli.workers };
    if cli.verbose > 0 {
        eprintln!(
            "{}: {} sweep point(s) x {} method(s) x {} trial(s)",
            cfg.name,
            cfg.sweep_points().len(),
            cfg.methods.len(),
            cfg.trials
        );
    }
    let timing_sweep =
        cfg.timing && matches!(cfg.sweep, SweepKind::GridSize | SweepKind::Antennas) && cfg.sweep_values.len() >= 4;
    let (rows, slopes) = if timing_sweep {
        let report = run_timing_sweep(cfg).map_err(Failure::run)?;
        (report.rows, Some(report.slopes))
    } else {
        (run_experiment_with(cfg, &opts).map_err(Failure::run)?, None)
    };

    let text = format_results(&rows, format);
    if out.stdout {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(3, format!("stdout: {e}")))?;
    } else {
        let ext = match format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        };
        let path = out
            .output
            .clone()
            .or_else(|| cfg.output.path.clone())
            .unwrap_or_else(|| PathBuf::from(format!("results/{}.{ext}", cfg.name)));
        write_results(&rows, &path, format).map_err(Failure::run)?;
        eprintln!("wrote {} rows to {}", rows.len(), path.display());
    }
    if let Some(slopes) = slopes {
        for s in &slopes {
            eprintln!("slope {:<16} {:<22} {:.3}", s.method, s.covariance, s.slope);
        }
    }
    if cli.verbose > 0 {
        for r in &rows {
            eprintln!("{}", summary(r));
        }
    }
    let failing: Vec<String> = rows
        .iter()
        .filter(|r| 2 * r.errors > r.trials)
        .map(|r| format!("{}/{} ({} of {} trials)", r.method, r.covariance, r.errors, r.trials))
        .collect();
    if !failing.is_empty() {
        return Err(Failure::new(4, format!("estimator failed in most trials: {}", failing.join(", "))));
    }
    Ok(())
}

fn summary(r: &ResultRow) -> String {
    let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
    format!(
        "  {:>8} {:<16} {:<26} rmse {:>8} rate {:>6} sd {:>8} errors {}",
        r.sweep_value.map_or("-".to_string(), |v| v.to_string()),
        r.method,
        r.covariance,
        f(r.rmse_normalized),
        f(r.detection_rate),
        f(r.mean_subspace_distance),
        r.errors
    )
}

fn cmd_spectrum(args: &SpectrumArgs) -> CliResult {
    let cfg = load(&args.source, &args.overrides)?;
    let detector = DetectorKind::parse(&args.method).ok_or_else(|| {
        let known: Vec<&str> = DetectorKind::ALL.iter().map(|d| d.as_str()).collect();
        Failure::new(2, format!("unknown method `{}`; expected one of {}", args.method, known.join(", ")))
    })?;
    let covariance: CovarianceChoice = serde_json::from_value(serde_json::Value::String(args.covariance.clone()))
        .map_err(|_| Failure::new(2, format!("unknown covariance `{}`", args.covariance)))?;
    let seed = args.seed.unwrap_or_else(|| trial_seed(cfg.master_seed, 0, 0));
    let dump = spectrum_dump(&cfg, &MethodSpec::new(detector, covariance), seed).map_err(Failure::run)?;
    let text = dump.to_csv();
    match (&args.output, args.stdout) {
        (Some(path), false) => {
            std::fs::write(path, text).map_err(|e| Failure::new(3, format!("{}: {e}", path.display())))?;
            eprintln!("wrote {} iteration(s) to {}", dump.spectra.len(), path.display());
        }
        _ => print!("{text}"),
    }
    Ok(())
}

fn cmd_selfcheck(args: &SelfcheckArgs) -> CliResult {
    let mut opts = SelfcheckOptions::from_env();
    opts.corrupt_basis |= args.corrupt_basis;
    let results = run_selfcheck(&opts);
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        return Err(Failure::new(1, format!("{failed} self-check(s) failed")));
    }
    Ok(())
}

fn cmd_order(args: &OrderArgs) -> CliResult {
    let cfg = load(&args.source, &args.overrides)?;
    let value = cfg.sweep_points()[0].1;
    let point = tomo_core::bench::PointSetup::new(&cfg, value).map_err(Failure::run)?;
    println!("trial,seed,k_true,k_aic,k_mdl");
    let (mut hits_aic, mut hits_mdl) = (0, 0);
    for t in 0..args.trials {
        let seed = trial_seed(cfg.master_seed, 0, t as u64);
        let stack = point.simulate(&cfg, seed).map_err(Failure::run)?;
        let eig = sample_covariance(&stack).eig().map_err(Failure::run)?;
        let pick = |c| estimate_model_order(&eig, point.looks, c).map(|r| r.k_hat).map_err(Failure::run);
        let (aic, mdl) = (pick(Criterion::Aic)?, pick(Criterion::Mdl)?);
        let k = point.scene.k();
        hits_aic += usize::from(aic == k);
        hits_mdl += usize::from(mdl == k);
        println!("{t},{seed},{k},{aic},{mdl}");
    }
    eprintln!(
        "correct order: AIC {hits_aic}/{n}, MDL {hits_mdl}/{n}",
        n = args.trials
    );
    Ok(())
}
