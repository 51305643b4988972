//! `topophase`: simulate, fit and verify two-photon Sagnac fringe experiments.
//!
//! Exit codes: 0 success, 1 analysis failure, 2 usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use topophase::analysis::{fit_fringe, kinematic_phase, phase_shift, FitReport, KinematicReport, ShiftReport};
use topophase::campaign::run_campaign;
use topophase::config::{CampaignSpec, ExperimentFile, SCHEMA_VERSION};
use topophase::sagnac::{generate_scan, write_scan, FringeScan, ScanMetadata, ScanMode};
use topophase::schedule::builtin_schedule;
use topophase::state::make_antisymmetric_mes;
use topophase::verify::Verifier;
use topophase::Error;

#[derive(Parser)]
#[command(name = "topophase", version, about = "Fractional topological phases of entangled photonic qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate fringe scans and write CSV + JSON metadata.
    Simulate(SimulateArgs),
    /// Fit a scan, and with --ref report the phase shift against a reference scan.
    Fit(FitArgs),
    /// Run a multi-dimension campaign from a JSON spec.
    Campaign(CampaignArgs),
    /// Run randomized consistency checks.
    Verify(VerifyArgs),
    /// Kinematic geometric phase of a built-in schedule on the antisymmetric MES.
    Kinematic(KinematicArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment configuration (JSON, schema_version 1).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Qudit dimension; overrides the configuration.
    #[arg(long = "d")]
    dim: Option<usize>,
    /// Control parameter; may be repeated. Defaults to the configuration's t values.
    #[arg(long = "t")]
    t: Vec<f64>,
    #[arg(long, conflicts_with = "sampled")]
    exact: bool,
    #[arg(long)]
    sampled: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    contrast: Option<f64>,
    /// Mean coincidences per θ point.
    #[arg(long)]
    counts: Option<u64>,
    /// Custom schedule file.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "TOPOPHASE_OUT", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    scan: PathBuf,
    /// Reference (t = 0) scan.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
}

#[derive(Args)]
struct CampaignArgs {
    spec: PathBuf,
    /// Output directory; overrides the spec's output_dir.
    #[arg(long, env = "TOPOPHASE_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct KinematicArgs {
    #[arg(long = "d")]
    dim: usize,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
}

enum Failure {
    Analysis(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LowVisibility(..) | Error::DegenerateOverlap(_) | Error::TooFewPoints(_) => {
                Failure::Analysis(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Fit(a) => fit(a),
        Command::Campaign(a) => campaign(a),
        Command::Verify(a) => verify(a),
        Command::Kinematic(a) => kinematic(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Analysis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let (mut file, base) = match &a.config {
        Some(p) => (ExperimentFile::load(p)?, p.parent().map(Path::to_path_buf)),
        None => {
            let dim = a.dim.ok_or_else(|| Failure::Usage("either --config or --d is required".into()))?;
            let file = serde_json::from_value(json!({ "schema_version": SCHEMA_VERSION, "dim": dim }))?;
            (file, None)
        }
    };
    if let Some(d) = a.dim {
        if file.dim != d {
            file.dim = d;
            file.state = None;
        }
    }
    if a.exact {
        file.mode = Some(ScanMode::Exact);
    }
    if a.sampled {
        file.mode = Some(ScanMode::Sampled);
    }
    file.seed = a.seed.or(file.seed);
    file.contrast = a.contrast.or(file.contrast);
    file.counts_per_point = a.counts.or(file.counts_per_point);
    let mut base = base;
    if let Some(s) = a.schedule {
        file.schedule = Some(std::fs::canonicalize(&s).unwrap_or(s));
        base = None;
    }
    if !a.t.is_empty() {
        file.t_values = Some(a.t);
    }
    let cfg = file.resolve(base.as_deref())?;

    std::fs::create_dir_all(&a.out)?;
    for &t in &cfg.t_values {
        let scan = generate_scan(&cfg, t)?;
        let path = write_scan(
            &a.out,
            &format!("scan_d{}_t{t:.3}", cfg.dim()),
            &scan,
            &ScanMetadata::new(&cfg, t),
        )?;
        println!("{}", path.display());
    }
    Ok(())
}

fn read_scan(path: &Path) -> Result<FringeScan, Failure> {
    FringeScan::read(path)
        .map(|(scan, _)| scan)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn fit(a: FitArgs) -> Result<(), Failure> {
    let scan = read_scan(&a.scan)?;
    let fit = fit_fringe(&scan)?;
    let mut report = json!({ "fit": FitReport::from(&fit) });
    if let Some(r) = &a.reference {
        let reference = fit_fringe(&read_scan(r)?)?;
        report["reference_fit"] = serde_json::to_value(FitReport::from(&reference))?;
        // Print the fits even when the shift is rejected.
        match phase_shift(&reference, &fit) {
            Ok(shift) => report["shift"] = serde_json::to_value(ShiftReport::from(shift))?,
            Err(e) => {
                println!("{}", serde_json::to_string_pretty(&report)?);
                return Err(e.into());
            }
        }
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn campaign(a: CampaignArgs) -> Result<(), Failure> {
    let spec = CampaignSpec::load(&a.spec)?;
    let out = a
        .out
        .or_else(|| spec.output_dir.clone())
        .ok_or_else(|| Failure::Usage("no output directory: pass --out or set output_dir".into()))?;
    let summary = run_campaign(&spec, &out)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let outcomes = Verifier::new(a.trials as usize, a.seed).run();
    let mut failed = None;
    for o in &outcomes {
        println!("{} {} ({} cases)", if o.passed() { "PASS" } else { "FAIL" }, o.name, o.cases);
        if let (None, Some(c)) = (&failed, &o.counterexample) {
            failed = Some(format!("{}: {c}", o.name));
        }
    }
    match failed {
        None => Ok(()),
        Some(c) => Err(Failure::Analysis(format!("counterexample: {c}"))),
    }
}

fn kinematic(a: KinematicArgs) -> Result<(), Failure> {
    let state = make_antisymmetric_mes(a.dim)?;
    let k = kinematic_phase(&state, &builtin_schedule(a.dim)?, a.steps)?;
    println!("{}", serde_json::to_string_pretty(&KinematicReport::from(k))?);
    Ok(())
}
