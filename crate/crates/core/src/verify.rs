//! Randomized self-checks: closed form vs circuit propagation, MES reduction,
//! SU(d) schedules, phase-shifter contract, and interferometric vs kinematic
//! phases.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{fit_fringe, kinematic_phase, phase_shift};
use crate::error::Result;
use crate::jones::{phase_shifter, relative_phase};
use crate::sagnac::{circuit_oracle, coincidence_full, coincidence_mes, generate_scan, ExperimentConfig, ScanMode};
use crate::schedule::{builtin_schedule, check_su};
use crate::state::{make_antisymmetric_mes, BipartiteQuditState};

pub const PROBABILITY_TOLERANCE: f64 = 1e-12;
pub const PHASE_TOLERANCE: f64 = 1e-6;

/// Coincidence function under test.
pub type CoincidenceFn = fn(&BipartiteQuditState, &[f64], f64) -> Result<f64>;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// First failing case, if any.
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct Verifier {
    pub trials: usize,
    pub seed: u64,
    pub coincidence: CoincidenceFn,
}

impl Verifier {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            coincidence: coincidence_full,
        }
    }

    pub fn run(&self) -> Vec<CheckOutcome> {
        vec![
            self.oracle_equivalence(),
            self.mes_reduction(),
            self.su_schedules(),
            self.phase_shifter_contract(),
            self.kinematic_agreement(),
        ]
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(salt);
        rng
    }

    fn oracle_equivalence(&self) -> CheckOutcome {
        let mut rng = self.rng(1);
        let mut counterexample = None;
        for _ in 0..self.trials {
            let d = rng.random_range(2..=6);
            let s = BipartiteQuditState::random(d, &mut rng).expect("d >= 2");
            let xi: Vec<f64> = (0..d).map(|_| rng.random_range(-TAU..TAU)).collect();
            let theta = rng.random_range(-PI..PI);
            let a = (self.coincidence)(&s, &xi, theta);
            let b = circuit_oracle(&s, &xi, theta);
            let ok = matches!((&a, &b), (Ok(x), Ok(y)) if (x - y).abs() < PROBABILITY_TOLERANCE);
            if !ok {
                counterexample = Some(format!(
                    "d={d} xi={xi:?} theta={theta} closed={a:?} circuit={b:?}"
                ));
                break;
            }
        }
        CheckOutcome {
            name: "closed form vs circuit propagation",
            cases: self.trials,
            counterexample,
        }
    }

    fn mes_reduction(&self) -> CheckOutcome {
        let mut rng = self.rng(2);
        let mut counterexample = None;
        'outer: for d in 2..=6 {
            let s = make_antisymmetric_mes(d).expect("d >= 2");
            for _ in 0..self.trials {
                let xi: Vec<f64> = (0..d).map(|_| rng.random_range(-TAU..TAU)).collect();
                let theta = rng.random_range(-PI..PI);
                let a = (self.coincidence)(&s, &xi, theta);
                let b = coincidence_mes(d, &xi, theta);
                let ok = matches!((&a, &b), (Ok(x), Ok(y)) if (x - y).abs() < PROBABILITY_TOLERANCE);
                if !ok {
                    counterexample = Some(format!("d={d} xi={xi:?} theta={theta} full={a:?} mes={b:?}"));
                    break 'outer;
                }
            }
        }
        CheckOutcome {
            name: "maximally entangled reduction",
            cases: 5 * self.trials,
            counterexample,
        }
    }

    fn su_schedules(&self) -> CheckOutcome {
        let counterexample = (2..=4)
            .find(|&d| !builtin_schedule(d).map(|s| check_su(&s, 1001)).unwrap_or(false))
            .map(|d| format!("built-in schedule d={d} violates sum(xi) = 0"));
        CheckOutcome {
            name: "SU(d) schedules",
            cases: 3,
            counterexample,
        }
    }

    fn phase_shifter_contract(&self) -> CheckOutcome {
        let mut rng = self.rng(3);
        let mut counterexample = None;
        for _ in 0..self.trials {
            let phi = rng.random_range(-PI..PI);
            let theta = rng.random_range(-PI..PI);
            let got = relative_phase(&phase_shifter(phi, theta));
            let ok = matches!(got, Ok(r) if circ_dist(r, 4.0 * theta) < PROBABILITY_TOLERANCE);
            if !ok {
                counterexample = Some(format!("phi={phi} theta={theta} relative phase={got:?}"));
                break;
            }
        }
        CheckOutcome {
            name: "phase shifter imprints 4θ",
            cases: self.trials,
            counterexample,
        }
    }

    fn kinematic_agreement(&self) -> CheckOutcome {
        let mut counterexample = None;
        for d in 2..=4 {
            match self.interferometric_vs_kinematic(d) {
                Ok((shift, geometric)) if circ_dist(shift, geometric) < PHASE_TOLERANCE => {}
                Ok((shift, geometric)) => {
                    counterexample = Some(format!(
                        "d={d} fringe shift={:.9}° kinematic={:.9}°",
                        shift.to_degrees(),
                        geometric.to_degrees()
                    ));
                    break;
                }
                Err(e) => {
                    counterexample = Some(format!("d={d}: {e}"));
                    break;
                }
            }
        }
        CheckOutcome {
            name: "fringe shift vs kinematic geometric phase",
            cases: 3,
            counterexample,
        }
    }

    fn interferometric_vs_kinematic(&self, d: usize) -> Result<(f64, f64)> {
        let mut cfg = ExperimentConfig::builtin(d, ScanMode::Exact, self.seed)?;
        cfg.contrast = 1.0;
        let scan_at = |t: f64| -> Result<_> {
            let mut scan = generate_scan(&cfg, t)?;
            let xi = cfg.schedule.eval(t)?;
            for p in &mut scan.points {
                p.1 = (self.coincidence)(&cfg.state, &xi, p.0)?;
            }
            fit_fringe(&scan)
        };
        let shift = phase_shift(&scan_at(0.0)?, &scan_at(1.0)?)?;
        let k = kinematic_phase(&cfg.state, &cfg.schedule, 10_000)?;
        Ok((shift.shift, k.geometric))
    }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_on_the_real_implementation() {
        let outcomes = Verifier::new(50, 0).run();
        for o in &outcomes {
            assert!(o.passed(), "{o:?}");
        }
    }

    /// Phase shifter with the opposite handedness: V picks up −4θ.
    fn flipped_shifter(s: &BipartiteQuditState, xi: &[f64], theta: f64) -> Result<f64> {
        coincidence_full(s, xi, -theta)
    }

    #[test]
    fn catches_flipped_phase_shifter() {
        let v = Verifier {
            coincidence: flipped_shifter,
            ..Verifier::new(50, 0)
        };
        let outcomes = v.run();
        let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.name).collect();
        assert!(failed.contains(&"closed form vs circuit propagation"), "{failed:?}");
        assert!(failed.contains(&"fringe shift vs kinematic geometric phase"), "{failed:?}");
        assert!(outcomes[0].counterexample.as_ref().unwrap().contains("theta="));
    }
}
