//! SU(d) diagonal phase schedules `t ↦ (ξ_1, …, ξ_d)` programmed on the SLM.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ_k ξ_k(t) = 0` and `ξ_k(0) = 0`.
pub const SU_TOLERANCE: f64 = 1e-12;

/// Grid used to validate custom schedules at load time.
pub const VALIDATION_GRID: usize = 1001;

/// Right-continuous step function, `H(0) = 1`.
pub fn heaviside(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// One breakpoint of a piecewise-linear schedule; phases in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct Breakpoint {
    pub t: f64,
    pub phases: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Builtin,
    Piecewise(Vec<Breakpoint>),
}

/// Parametric SLM schedule on `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSchedule {
    dim: usize,
    kind: Kind,
}

/// The schedules used for the qubit, qutrit and ququart measurements.
pub fn builtin_schedule(d: usize) -> Result<PhaseSchedule> {
    match d {
        2..=4 => Ok(PhaseSchedule {
            dim: d,
            kind: Kind::Builtin,
        }),
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

fn builtin_phases(d: usize, t: f64) -> Vec<f64> {
    let step = heaviside(t - 0.5);
    match d {
        2 => vec![PI * t, -PI * t],
        3 => {
            let w = 2.0 * PI / 3.0;
            vec![
                w * (2.0 * t - (2.0 * t - 1.0) * step),
                -2.0 * w * t,
                w * (2.0 * t - 1.0) * step,
            ]
        }
        4 => {
            let kink = PI * (1.0 - 2.0 * t) * step;
            vec![
                PI / 2.0 * t,
                -PI / 2.0 * t + kink,
                1.5 * PI * t - kink,
                -1.5 * PI * t,
            ]
        }
        _ => unreachable!("builtin dimension checked at construction"),
    }
}

impl PhaseSchedule {
    /// Piecewise-linear schedule, checked only for shape: `t` strictly
    /// increasing from 0 to 1 and one phase per slit at every breakpoint.
    /// Use [`PhaseSchedule::custom`] to also enforce the SU(d) invariants.
    pub fn piecewise(dim: usize, breakpoints: Vec<Breakpoint>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidSchedule("need at least two breakpoints".into()));
        }
        if let Some(bp) = breakpoints.iter().find(|bp| bp.phases.len() != dim) {
            return Err(Error::InvalidSchedule(format!(
                "breakpoint at t={} has {} phases, expected {dim}",
                bp.t,
                bp.phases.len()
            )));
        }
        if breakpoints.iter().any(|bp| !bp.t.is_finite() || bp.phases.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidSchedule("non-finite value".into()));
        }
        if breakpoints.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidSchedule("breakpoint t values must be strictly increasing".into()));
        }
        let (first, last) = (breakpoints[0].t, breakpoints[breakpoints.len() - 1].t);
        if first != 0.0 || last != 1.0 {
            return Err(Error::InvalidSchedule(format!(
                "breakpoints must span [0, 1], got [{first}, {last}]"
            )));
        }
        Ok(Self {
            dim,
            kind: Kind::Piecewise(breakpoints),
        })
    }

    /// Piecewise-linear schedule that must start at the identity and satisfy
    /// `Σ_k ξ_k(t) = 0` on a [`VALIDATION_GRID`]-point grid.
    pub fn custom(dim: usize, breakpoints: Vec<Breakpoint>) -> Result<Self> {
        let s = Self::piecewise(dim, breakpoints)?;
        if s.eval(0.0)?.iter().any(|x| x.abs() > SU_TOLERANCE) {
            return Err(Error::InvalidSchedule("phases at t=0 must all vanish".into()));
        }
        if !check_su(&s, VALIDATION_GRID) {
            return Err(Error::InvalidSchedule("phases do not sum to zero (not SU(d))".into()));
        }
        Ok(s)
    }

    /// Parses the JSON schedule format `{dim, breakpoints: [[t, [deg…]]…]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScheduleFile = serde_json::from_str(text)?;
        let bps = file
            .breakpoints
            .into_iter()
            .map(|(t, deg)| Breakpoint {
                t,
                phases: deg.into_iter().map(f64::to_radians).collect(),
            })
            .collect();
        Self::custom(file.dim, bps)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self.kind, Kind::Builtin)
    }

    /// Phases in radians at `t ∈ [0, 1]`.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TOutOfRange(t));
        }
        Ok(match &self.kind {
            Kind::Builtin => builtin_phases(self.dim, t),
            Kind::Piecewise(bps) => interpolate(bps, t),
        })
    }
}

fn interpolate(bps: &[Breakpoint], t: f64) -> Vec<f64> {
    // Index of the last breakpoint with bp.t <= t, capped so a segment exists.
    let upper = bps.partition_point(|bp| bp.t <= t).clamp(1, bps.len() - 1);
    let (lo, hi) = (&bps[upper - 1], &bps[upper]);
    let w = (t - lo.t) / (hi.t - lo.t);
    lo.phases
        .iter()
        .zip(&hi.phases)
        .map(|(a, b)| a + w * (b - a))
        .collect()
}

/// `true` iff `Σ_k ξ_k = 0` within [`SU_TOLERANCE`] at `grid` uniformly spaced
/// points of `[0, 1]` (endpoints included).
pub fn check_su(s: &PhaseSchedule, grid: usize) -> bool {
    let n = grid.max(2);
    (0..n).all(|j| {
        let t = j as f64 / (n - 1) as f64;
        s.eval(t)
            .map(|xi| xi.iter().sum::<f64>().abs() <= SU_TOLERANCE)
            .unwrap_or(false)
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct ScheduleFile {
    dim: usize,
    breakpoints: Vec<(f64, Vec<f64>)>,
}
