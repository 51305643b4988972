//! JSON configuration files for single experiments and campaigns.
//!
//! Angles are in degrees on disk and radians in memory. Every file carries a
//! `schema_version`; only version 1 exists.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sagnac::{default_theta_grid, ExperimentConfig, ScanMode, DEFAULT_CONTRAST};
use crate::schedule::{builtin_schedule, PhaseSchedule};
use crate::state::{make_antisymmetric_mes, BipartiteQuditState};

pub const SCHEMA_VERSION: u32 = 1;

/// θ grid in degrees: an explicit list or an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl ThetaGrid {
    pub fn to_radians(&self) -> Result<Vec<f64>> {
        let deg = match self {
            ThetaGrid::List(v) => v.clone(),
            ThetaGrid::Range { start, stop, step } => {
                if !(*step > 0.0) || !(stop >= start) {
                    return Err(Error::InvalidConfig(format!(
                        "bad theta range start={start} stop={stop} step={step}"
                    )));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|k| start + step * k as f64).collect()
            }
        };
        Ok(deg.into_iter().map(f64::to_radians).collect())
    }
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::InvalidConfig(format!(
            "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

/// Single-experiment configuration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub schema_version: u32,
    pub dim: usize,
    #[serde(default)]
    pub mode: Option<ScanMode>,
    #[serde(default)]
    pub theta_deg: Option<ThetaGrid>,
    #[serde(default)]
    pub t_values: Option<Vec<f64>>,
    #[serde(default)]
    pub counts_per_point: Option<u64>,
    #[serde(default)]
    pub contrast: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Custom schedule file, relative to the configuration file. Built-in
    /// schedule when absent.
    #[serde(default)]
    pub schedule: Option<PathBuf>,
    /// Input state; antisymmetric MES when absent.
    #[serde(default)]
    pub state: Option<BipartiteQuditState>,
}

impl ExperimentFile {
    pub fn load(path: &Path) -> Result<Self> {
        let file: ExperimentFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        check_version(file.schema_version)?;
        Ok(file)
    }

    /// Resolves into a validated [`ExperimentConfig`]; `base` anchors
    /// relative schedule paths.
    pub fn resolve(&self, base: Option<&Path>) -> Result<ExperimentConfig> {
        check_version(self.schema_version)?;
        let schedule = match &self.schedule {
            Some(p) => {
                let path = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.clone(),
                };
                PhaseSchedule::load(&path)?
            }
            None => builtin_schedule(self.dim)?,
        };
        let state = match &self.state {
            Some(s) => s.clone(),
            None => make_antisymmetric_mes(self.dim)?,
        };
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: state.dim(),
            });
        }
        let cfg = ExperimentConfig {
            state,
            schedule,
            theta_grid: match &self.theta_deg {
                Some(g) => g.to_radians()?,
                None => default_theta_grid(),
            },
            t_values: self.t_values.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0]),
            counts_per_point: self.counts_per_point.unwrap_or(1000),
            contrast: self.contrast.unwrap_or(DEFAULT_CONTRAST),
            rng_seed: self.seed.unwrap_or(0),
            mode: self.mode.unwrap_or(ScanMode::Sampled),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Campaign specification: built-in schedules for each dimension, scanned at
/// every `t` in `t_values` (which must include 0 and 1 for the shift).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignSpec {
    pub schema_version: u32,
    pub dims: Vec<usize>,
    pub mode: ScanMode,
    #[serde(default = "default_t_values")]
    pub t_values: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_contrast")]
    pub contrast: f64,
    #[serde(default = "default_counts")]
    pub counts_per_point: u64,
    #[serde(default)]
    pub theta_deg: Option<ThetaGrid>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_t_values() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}

fn default_contrast() -> f64 {
    DEFAULT_CONTRAST
}

fn default_counts() -> u64 {
    1000
}

impl CampaignSpec {
    pub fn new(dims: Vec<usize>, mode: ScanMode, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dims,
            mode,
            t_values: default_t_values(),
            seed,
            contrast: DEFAULT_CONTRAST,
            counts_per_point: default_counts(),
            theta_deg: None,
            output_dir: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let spec: CampaignSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_version(self.schema_version)?;
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("dims is empty".into()));
        }
        if self.t_values.is_empty() {
            return Err(Error::InvalidConfig("t_values is empty".into()));
        }
        if let Some(&t) = self.t_values.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::TOutOfRange(t));
        }
        if !self.t_values.contains(&0.0) || !self.t_values.contains(&1.0) {
            return Err(Error::InvalidConfig(
                "t_values must include 0 (reference) and 1 (closed cycle)".into(),
            ));
        }
        for &d in &self.dims {
            builtin_schedule(d)?;
        }
        for cfg in self.experiments()? {
            cfg.validate()?;
        }
        Ok(())
    }

    /// One experiment configuration per dimension.
    pub fn experiments(&self) -> Result<Vec<ExperimentConfig>> {
        let grid = match &self.theta_deg {
            Some(g) => g.to_radians()?,
            None => default_theta_grid(),
        };
        self.dims
            .iter()
            .map(|&d| {
                Ok(ExperimentConfig {
                    state: make_antisymmetric_mes(d)?,
                    schedule: builtin_schedule(d)?,
                    theta_grid: grid.clone(),
                    t_values: self.t_values.clone(),
                    counts_per_point: self.counts_per_point,
                    contrast: self.contrast,
                    rng_seed: self.seed,
                    mode: self.mode,
                })
            })
            .collect()
    }
}
