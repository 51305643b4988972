//! Multi-dimension campaigns: scans at each `t`, fits, the `t = 0 → 1` shift
//! per dimension, and the summary figures.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{fit_fringe, kinematic_phase, phase_shift, FitReport, FitResult, PhaseShift};
use crate::config::CampaignSpec;
use crate::error::{Error, Result};
use crate::plot::{fringe_svg, shift_svg};
use crate::sagnac::{generate_scan, write_scan, ExperimentConfig, FringeScan, ScanMetadata, ScanMode};

/// Steps used for the kinematic cross-check reported in the summary.
const KINEMATIC_STEPS: usize = 10_000;

/// Scans and fits for one dimension, ordered by `t`.
#[derive(Debug, Clone)]
pub struct DimensionRun {
    pub config: ExperimentConfig,
    pub scans: Vec<(FringeScan, FitResult)>,
    pub shift: PhaseShift,
    /// Kinematic geometric phase of the same schedule, radians.
    pub kinematic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub d: usize,
    pub shift_deg: f64,
    pub sigma_deg: f64,
    pub theory_deg: f64,
    pub kinematic_deg: f64,
    pub visibility_ref: f64,
    pub visibility_op: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub schema_version: u32,
    pub mode: ScanMode,
    pub seed: u64,
    pub results: Vec<SummaryRow>,
}

/// Runs every (d, t) scan and fit in memory. Independent scans run in parallel.
pub fn run_in_memory(spec: &CampaignSpec) -> Result<Vec<DimensionRun>> {
    spec.validate()?;
    let mut ts = spec.t_values.clone();
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    spec.experiments()?
        .into_par_iter()
        .map(|cfg| {
            let scans = ts
                .par_iter()
                .map(|&t| {
                    let scan = generate_scan(&cfg, t)?;
                    let fit = fit_fringe(&scan)?;
                    Ok((scan, fit))
                })
                .collect::<Result<Vec<_>>>()?;
            let at = |t: f64| &scans[ts.iter().position(|x| *x == t).expect("validated t")].1;
            let shift = phase_shift(at(0.0), at(1.0))?;
            let kinematic = kinematic_phase(&cfg.state, &cfg.schedule, KINEMATIC_STEPS)?.geometric;
            Ok(DimensionRun {
                config: cfg,
                scans,
                shift,
                kinematic,
            })
        })
        .collect()
}

pub fn summarize(spec: &CampaignSpec, runs: &[DimensionRun]) -> CampaignSummary {
    let results = runs
        .iter()
        .map(|r| {
            let d = r.config.dim();
            let vis = |t: f64| {
                r.scans
                    .iter()
                    .find(|(s, _)| s.t == t)
                    .map_or(f64::NAN, |(_, f)| f.visibility)
            };
            SummaryRow {
                d,
                shift_deg: r.shift.shift.to_degrees(),
                sigma_deg: r.shift.sigma.to_degrees(),
                theory_deg: 360.0 / d as f64,
                kinematic_deg: r.kinematic.rem_euclid(std::f64::consts::TAU).to_degrees(),
                visibility_ref: vis(0.0),
                visibility_op: vis(1.0),
            }
        })
        .collect();
    CampaignSummary {
        schema_version: crate::config::SCHEMA_VERSION,
        mode: spec.mode,
        seed: spec.seed,
        results,
    }
}

fn stem(d: usize, t: f64) -> String {
    format!("d{d}_t{t:.3}")
}

/// Runs the campaign and writes scans, fits, `summary.json` and SVG figures
/// into `out`. Files are staged in a temporary directory inside `out` and
/// only moved into place once everything succeeded; on failure nothing new
/// is left behind.
pub fn run_campaign(spec: &CampaignSpec, out: &Path) -> Result<CampaignSummary> {
    let created = !out.exists();
    std::fs::create_dir_all(out)?;
    let result = stage_and_commit(spec, out);
    if result.is_err() && created {
        let _ = std::fs::remove_dir_all(out);
    }
    result
}

fn stage_and_commit(spec: &CampaignSpec, out: &Path) -> Result<CampaignSummary> {
    let staging = tempfile::Builder::new().prefix(".staging-").tempdir_in(out)?;
    let dir = staging.path();
    let runs = run_in_memory(spec)?;

    let mut written: Vec<PathBuf> = Vec::new();
    for run in &runs {
        let d = run.config.dim();
        for (scan, fit) in &run.scans {
            let name = stem(d, scan.t);
            let meta = ScanMetadata::new(&run.config, scan.t);
            let csv = write_scan(dir, &format!("scan_{name}"), scan, &meta)?;
            written.push(csv.clone());
            written.push(csv.with_extension("json"));
            let fit_path = dir.join(format!("fit_{name}.json"));
            std::fs::write(&fit_path, serde_json::to_string_pretty(&FitReport::from(fit))? + "\n")?;
            written.push(fit_path);
        }
        let svg = dir.join(format!("fringes_d{d}.svg"));
        std::fs::write(&svg, fringe_svg(d, &run.scans))?;
        written.push(svg);
    }

    let summary = summarize(spec, &runs);
    let rows: Vec<_> = summary
        .results
        .iter()
        .map(|r| (r.d, r.shift_deg, r.sigma_deg))
        .collect();
    let svg = dir.join("shifts.svg");
    std::fs::write(&svg, shift_svg(&rows))?;
    written.push(svg);
    let summary_path = dir.join("summary.json");
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)? + "\n")?;
    written.push(summary_path);

    for src in &written {
        let name = src.file_name().ok_or_else(|| Error::InvalidConfig("bad file name".into()))?;
        std::fs::rename(src, out.join(name))?;
    }
    Ok(summary)
}
