//! Simulation of fractional topological phases acquired by entangled photonic
//! qudits under local SU(d) operations in a two-photon Sagnac interferometer,
//! together with the fringe-fitting and geometric-phase analysis used to
//! extract those phases.
//!
//! Module map:
//! - [`state`]: two-qudit path states, I-concurrence, local diagonal phases.
//! - [`jones`]: wave plates and the four-plate phase shifter.
//! - [`schedule`]: SU(d) phase schedules programmed on the SLM.
//! - [`sagnac`]: coincidence probabilities, circuit-level oracle, fringe scans.
//! - [`analysis`]: fringe fits, phase shifts, kinematic geometric phase.
//! - [`config`], [`campaign`], [`plot`], [`verify`]: files, runs and reports.

pub mod analysis;
pub mod campaign;
pub mod config;
pub mod error;
pub mod jones;
pub mod plot;
pub mod sagnac;
pub mod schedule;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
