//! Geometric phase of a discretized state path, computed kinematically as
//! total (Pancharatnam) phase minus accumulated dynamical phase.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::PhaseSchedule;
use crate::state::{apply_signal_phases, inner_product, BipartiteQuditState, DiagonalPhaseOp};

pub const MIN_STEPS: usize = 100;

/// Overlaps smaller than this leave the total phase undefined.
const DEGENERATE_OVERLAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicPhases {
    /// `arg⟨ψ(0)|ψ(1)⟩`.
    pub total: f64,
    pub dynamical: f64,
    /// `total − dynamical`, folded into `(−π, π]`.
    pub geometric: f64,
    pub steps: usize,
}

/// Folds an angle into `(−π, π]`.
pub fn fold_signed(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Kinematic phases of `ψ(t) = (U(t) ⊗ I)|s0⟩` with `U(t)` the schedule's
/// diagonal operation, sampled at `t_j = j/steps`.
pub fn kinematic_phase(
    s0: &BipartiteQuditState,
    sched: &PhaseSchedule,
    steps: usize,
) -> Result<KinematicPhases> {
    if sched.dim() != s0.dim() {
        return Err(Error::DimensionMismatch {
            expected: s0.dim(),
            got: sched.dim(),
        });
    }
    kinematic_phase_along(s0, |t| sched.eval(t), steps)
}

/// As [`kinematic_phase`] for an arbitrary phase path `t ↦ ξ(t)`, `t ∈ [0, 1]`.
///
/// The dynamical phase uses the Bargmann chain `Σ_j arg⟨ψ_j|ψ_{j+1}⟩`, whose
/// discretization error is `O(1/steps²)`; it is evaluated at `steps` and
/// `2·steps` and Richardson-extrapolated.
pub fn kinematic_phase_along<F>(s0: &BipartiteQuditState, path: F, steps: usize) -> Result<KinematicPhases>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    if steps < MIN_STEPS {
        return Err(Error::InvalidConfig(format!(
            "kinematic phase needs at least {MIN_STEPS} steps, got {steps}"
        )));
    }
    let state_at = |t: f64| -> Result<BipartiteQuditState> {
        apply_signal_phases(s0, &DiagonalPhaseOp::new(path(t)?))
    };

    let start = state_at(0.0)?;
    let end = state_at(1.0)?;
    let overlap = inner_product(&start, &end)?;
    if overlap.norm() < DEGENERATE_OVERLAP {
        return Err(Error::DegenerateOverlap(overlap.norm()));
    }
    let total = overlap.arg();

    let coarse = bargmann_chain(&state_at, steps)?;
    let fine = bargmann_chain(&state_at, 2 * steps)?;
    let dynamical = (4.0 * fine - coarse) / 3.0;

    Ok(KinematicPhases {
        total,
        dynamical,
        geometric: fold_signed(total - dynamical),
        steps,
    })
}

fn bargmann_chain<G>(state_at: &G, steps: usize) -> Result<f64>
where
    G: Fn(f64) -> Result<BipartiteQuditState>,
{
    let mut prev = state_at(0.0)?;
    let mut sum = 0.0;
    for j in 1..=steps {
        let next = state_at(j as f64 / steps as f64)?;
        let z: Complex64 = inner_product(&prev, &next)?;
        if z.norm() < DEGENERATE_OVERLAP {
            return Err(Error::DegenerateOverlap(z.norm()));
        }
        sum += z.arg();
        prev = next;
    }
    Ok(sum)
}
