//! Fringe fitting, phase-shift extraction and the kinematic geometric phase.

mod fit;
mod kinematic;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub use fit::{fit_fringe, FitResult, MIN_POINTS};
pub use kinematic::{fold_signed, kinematic_phase, kinematic_phase_along, KinematicPhases, MIN_STEPS};

use crate::error::{Error, Result};
use crate::sagnac::FringeScan;

/// Fits at or below this visibility are rejected for phase extraction.
pub const MIN_VISIBILITY: f64 = 0.05;

/// Fringe displacement between a reference and an operated scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    /// Radians, in `[0, 2π)`.
    pub shift: f64,
    pub sigma: f64,
}

/// Displacement of the operated fringe relative to the reference, in the
/// fringe's own phase (`4θ` for an ideal phase shifter).
///
/// A fringe `1 − v cos(aθ + b)` whose pattern moves towards larger θ by
/// `Δ/a` has `b` reduced by `Δ`, so the shift is `(b_ref − b_op) mod 2π`.
/// Its uncertainty is `√(σ_b,ref² + σ_b,op²)`.
pub fn phase_shift(fit_ref: &FitResult, fit_op: &FitResult) -> Result<PhaseShift> {
    for fit in [fit_ref, fit_op] {
        if !fit.phase_defined || fit.visibility <= MIN_VISIBILITY {
            return Err(Error::LowVisibility(fit.visibility, MIN_VISIBILITY));
        }
    }
    let shift = (fit_ref.phase - fit_op.phase).rem_euclid(TAU) % TAU;
    let sigma = fit_ref.sigmas()[3].hypot(fit_op.sigmas()[3]);
    Ok(PhaseShift { shift, sigma })
}

/// Direct contrast estimate `(max − min)/(max + min)`; zero for all-zero data.
pub fn visibility_estimate(scan: &FringeScan) -> f64 {
    let max = scan.values().fold(f64::MIN, f64::max);
    let min = scan.values().fold(f64::MAX, f64::min);
    if scan.points.is_empty() || max + min <= 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

/// Fractional topological phase `2πn/d`, folded into `[0, 2π)`.
pub fn predict_fractional(d: usize, n: i64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok((TAU * n as f64 / d as f64).rem_euclid(TAU) % TAU)
}

/// Human- and machine-facing JSON form of a [`FitResult`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub degrees: FitDegrees,
    pub radians: FitResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDegrees {
    pub amplitude: f64,
    pub sigma_amplitude: f64,
    pub visibility: f64,
    pub sigma_visibility: f64,
    /// Dimensionless (fringe degrees per degree of θ).
    pub frequency: f64,
    pub sigma_frequency: f64,
    pub phase_deg: f64,
    pub sigma_phase_deg: f64,
    pub phase_defined: bool,
    pub rss: f64,
}

impl From<&FitResult> for FitReport {
    fn from(f: &FitResult) -> Self {
        let s = f.sigmas();
        FitReport {
            degrees: FitDegrees {
                amplitude: f.amplitude,
                sigma_amplitude: s[0],
                visibility: f.visibility,
                sigma_visibility: s[1],
                frequency: f.frequency,
                sigma_frequency: s[2],
                phase_deg: f.phase.to_degrees(),
                sigma_phase_deg: s[3].to_degrees(),
                phase_defined: f.phase_defined,
                rss: f.rss,
            },
            radians: f.clone(),
        }
    }
}

/// JSON form of [`PhaseShift`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftReport {
    pub shift_deg: f64,
    pub sigma_deg: f64,
    pub radians: PhaseShift,
}

impl From<PhaseShift> for ShiftReport {
    fn from(p: PhaseShift) -> Self {
        ShiftReport {
            shift_deg: p.shift.to_degrees(),
            sigma_deg: p.sigma.to_degrees(),
            radians: p,
        }
    }
}

/// JSON form of [`KinematicPhases`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KinematicReport {
    pub total_deg: f64,
    pub dynamical_deg: f64,
    pub geometric_deg: f64,
    pub steps: usize,
    pub radians: KinematicPhases,
}

impl From<KinematicPhases> for KinematicReport {
    fn from(k: KinematicPhases) -> Self {
        KinematicReport {
            total_deg: k.total.to_degrees(),
            dynamical_deg: k.dynamical.to_degrees(),
            geometric_deg: k.geometric.to_degrees(),
            steps: k.steps,
            radians: k,
        }
    }
}
