//! Coincidence probabilities of the two-photon Sagnac interferometer and
//! simulated fringe scans.
//!
//! `θ` is always the angle of the second half-wave plate of the phase shifter
//! relative to the first, so fringes have period π/2 in `θ`.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_8;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jones::{hwp, phase_shifter, phase_shifter_reversed, JonesMatrix, JonesVector};
use crate::schedule::PhaseSchedule;
use crate::state::{make_antisymmetric_mes, BipartiteQuditState};

/// Default mode-mismatch contrast; measured visibilities sat between 0.3 and 0.4.
pub const DEFAULT_CONTRAST: f64 = 0.35;

fn check_len(s: &BipartiteQuditState, xi: &[f64]) -> Result<()> {
    if xi.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: xi.len(),
        });
    }
    Ok(())
}

/// Normalized coincidence function
/// `C = ¼ Σ_{m,n} |α_mn e^{iξ_m} − e^{4iθ} α_nm|²` for an arbitrary pure state.
pub fn coincidence_full(s: &BipartiteQuditState, xi: &[f64], theta: f64) -> Result<f64> {
    check_len(s, xi)?;
    let d = s.dim();
    let reference = Complex64::from_polar(1.0, 4.0 * theta);
    let mut sum = 0.0;
    for m in 0..d {
        let slm = Complex64::from_polar(1.0, xi[m]);
        for n in 0..d {
            sum += (s.amplitude(m, n) * slm - reference * s.amplitude(n, m)).norm_sqr();
        }
    }
    Ok(0.25 * sum)
}

/// Closed form for the antisymmetric maximally entangled state,
/// `C = (1/d) Σ_m sin²[(ξ_m − 4θ)/2]`.
pub fn coincidence_mes(d: usize, xi: &[f64], theta: f64) -> Result<f64> {
    if xi.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: xi.len(),
        });
    }
    let sum: f64 = xi
        .iter()
        .map(|x| ((x - 4.0 * theta) / 2.0).sin().powi(2))
        .sum();
    Ok(sum / d as f64)
}

/// Fixed element angles of the optical circuit.
#[derive(Debug, Clone, Copy)]
pub struct CircuitSetup {
    /// Angle of the first half-wave plate inside the phase shifter.
    pub phase_shifter_phi: f64,
    /// Eraser half-wave plate before detector D1 (rotates polarization by +45°).
    pub eraser_d1: f64,
    /// Eraser half-wave plate before detector D2 (rotates polarization by −45°).
    pub eraser_d2: f64,
}

impl Default for CircuitSetup {
    fn default() -> Self {
        Self {
            phase_shifter_phi: 0.0,
            eraser_d1: FRAC_PI_8,
            eraser_d2: -FRAC_PI_8,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Port {
    /// Output port feeding D1: signal-V and idler-H.
    D1,
    /// Output port feeding D2: signal-H and idler-V.
    D2,
}

/// Coincidence probability obtained by propagating the full
/// polarization ⊗ path two-photon ket through the interferometer.
///
/// Steps: input PBS (signal H transmitted clockwise, idler V reflected
/// counter-clockwise with phase `i`); signal meets the 45° HWP, the phase
/// shifter and the SLM (H only); idler meets the SLM, the phase shifter in
/// reverse and the HWP in reverse; the output PBS routes each polarization
/// to a port (reflection phase `i`); only terms with photons in different
/// ports survive post-selection; each port has an eraser HWP and a PBS whose
/// outputs are the detection outcomes. Amplitudes are summed per
/// (slit mode at D1, slit mode at D2, outcomes), which is the integral over
/// orthonormal slit modes. The returned value is the probability that both
/// erasers give the same outcome, conditioned on post-selection.
pub fn circuit_oracle(s: &BipartiteQuditState, xi: &[f64], theta: f64) -> Result<f64> {
    circuit_oracle_with(s, xi, theta, &CircuitSetup::default())
}

pub fn circuit_oracle_with(
    s: &BipartiteQuditState,
    xi: &[f64],
    theta: f64,
    setup: &CircuitSetup,
) -> Result<f64> {
    check_len(s, xi)?;
    let d = s.dim();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let slm = |k: usize| JonesMatrix::diagonal(Complex64::from_polar(1.0, xi[k]), one);

    let shifter = phase_shifter(setup.phase_shifter_phi, theta);
    let shifter_back = phase_shifter_reversed(setup.phase_shifter_phi, theta);
    let half_wave = hwp(FRAC_PI_8);
    let half_wave_back = hwp(-FRAC_PI_8);

    // Single-photon polarization states at the output PBS, per slit.
    let signal: Vec<JonesVector> = (0..d)
        .map(|m| (slm(m) * shifter * half_wave).apply(&JonesVector::horizontal()))
        .collect();
    let idler: Vec<JonesVector> = (0..d)
        .map(|n| {
            let v = JonesVector::new(Complex64::new(0.0, 0.0), i);
            (half_wave_back * shifter_back * slm(n)).apply(&v)
        })
        .collect();

    // (polarization index, pbs phase, port) for each photon.
    let signal_routes = [(0usize, one, Port::D2), (1usize, i, Port::D1)];
    let idler_routes = [(0usize, one, Port::D1), (1usize, i, Port::D2)];

    let erasers = [hwp(setup.eraser_d1), hwp(setup.eraser_d2)];
    let outcome = |det: usize, pol: usize, out: usize| erasers[det].0[(out, pol)];

    // Key: (slit at D1, slit at D2, outcome at D1, outcome at D2).
    let mut amps: HashMap<(usize, usize, usize, usize), Complex64> = HashMap::new();
    for m in 0..d {
        for n in 0..d {
            let alpha = s.amplitude(m, n);
            if alpha == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(sp, s_phase, s_port) in &signal_routes {
                for &(ip, i_phase, i_port) in &idler_routes {
                    if s_port == i_port {
                        continue;
                    }
                    let base = alpha * signal[m].0[sp] * idler[n].0[ip] * s_phase * i_phase;
                    // Which photon, with which polarization and slit, lands on each detector.
                    let ((p1, slit1), (p2, slit2)) = match s_port {
                        Port::D1 => ((sp, m), (ip, n)),
                        Port::D2 => ((ip, n), (sp, m)),
                    };
                    for o1 in 0..2 {
                        for o2 in 0..2 {
                            let a = base * outcome(0, p1, o1) * outcome(1, p2, o2);
                            *amps.entry((slit1, slit2, o1, o2)).or_default() += a;
                        }
                    }
                }
            }
        }
    }

    let mut post_selected = 0.0;
    let mut same_parity = 0.0;
    for (&(_, _, o1, o2), a) in &amps {
        let p = a.norm_sqr();
        post_selected += p;
        if o1 == o2 {
            same_parity += p;
        }
    }
    if post_selected == 0.0 {
        return Ok(0.0);
    }
    Ok(same_parity / post_selected)
}

/// How a scan reports its values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Noise-free coincidence probability.
    Exact,
    /// Poisson-distributed coincidence counts.
    Sampled,
}

/// Parameters of one simulated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub state: BipartiteQuditState,
    pub schedule: PhaseSchedule,
    /// Phase-shifter angles θ in radians.
    pub theta_grid: Vec<f64>,
    pub t_values: Vec<f64>,
    /// Mean total coincidences per θ point.
    pub counts_per_point: u64,
    /// Mode-mismatch visibility factor on the fringe about ½.
    pub contrast: f64,
    pub rng_seed: u64,
    pub mode: ScanMode,
}

/// 0° to 180° in 5° steps (37 points), in radians.
pub fn default_theta_grid() -> Vec<f64> {
    (0..=36).map(|k| (5.0 * k as f64).to_radians()).collect()
}

impl ExperimentConfig {
    /// Antisymmetric MES with the built-in schedule for `d`, default grid and
    /// contrast, `t ∈ {0, 0.5, 1}`.
    pub fn builtin(d: usize, mode: ScanMode, seed: u64) -> Result<Self> {
        Ok(Self {
            state: make_antisymmetric_mes(d)?,
            schedule: crate::schedule::builtin_schedule(d)?,
            theta_grid: default_theta_grid(),
            t_values: vec![0.0, 0.5, 1.0],
            counts_per_point: 1000,
            contrast: DEFAULT_CONTRAST,
            rng_seed: seed,
            mode,
        })
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schedule.dim() != self.state.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.state.dim(),
                got: self.schedule.dim(),
            });
        }
        if !(0.0..=1.0).contains(&self.contrast) {
            return Err(Error::InvalidConfig(format!("contrast {} not in [0, 1]", self.contrast)));
        }
        if self.counts_per_point < 1 {
            return Err(Error::InvalidConfig("counts_per_point must be at least 1".into()));
        }
        if self.theta_grid.is_empty() {
            return Err(Error::InvalidConfig("theta grid is empty".into()));
        }
        if self.theta_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("theta grid must be strictly increasing".into()));
        }
        if let Some(&t) = self.t_values.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::TOutOfRange(t));
        }
        Ok(())
    }
}

/// One sweep of the phase shifter at fixed `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub t: f64,
    pub mode: ScanMode,
    /// `(θ in radians, probability or counts)`, θ strictly increasing.
    pub points: Vec<(f64, f64)>,
}

impl FringeScan {
    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    /// Multiplies every value by `k` (e.g. to turn probabilities into rates).
    pub fn scaled(&self, k: f64) -> FringeScan {
        FringeScan {
            t: self.t,
            mode: self.mode,
            points: self.points.iter().map(|&(x, y)| (x, y * k)).collect(),
        }
    }

    /// CSV with header `theta_deg,probability` or `theta_deg,counts`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(match self.mode {
            ScanMode::Exact => "theta_deg,probability\n",
            ScanMode::Sampled => "theta_deg,counts\n",
        });
        for &(theta, value) in &self.points {
            let deg = format_degrees(theta.to_degrees());
            match self.mode {
                ScanMode::Exact => writeln!(out, "{deg},{value}"),
                ScanMode::Sampled => writeln!(out, "{deg},{}", value as u64),
            }
            .expect("writing to a String");
        }
        out
    }

    /// Parses [`FringeScan::to_csv`] output. `t` is not stored in the CSV.
    pub fn from_csv(text: &str, t: f64) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedScan("empty file".into()))?;
        let mode = match header.trim() {
            "theta_deg,probability" => ScanMode::Exact,
            "theta_deg,counts" => ScanMode::Sampled,
            other => return Err(Error::MalformedScan(format!("unexpected header {other:?}"))),
        };
        let mut points = Vec::new();
        for (k, line) in lines.enumerate() {
            let bad = || Error::MalformedScan(format!("line {}: {line:?}", k + 2));
            let (a, b) = line.split_once(',').ok_or_else(bad)?;
            let deg: f64 = a.trim().parse().map_err(|_| bad())?;
            let value: f64 = b.trim().parse().map_err(|_| bad())?;
            if !deg.is_finite() || !value.is_finite() || value < 0.0 {
                return Err(bad());
            }
            if mode == ScanMode::Exact && value > 1.0 {
                return Err(bad());
            }
            points.push((deg.to_radians(), value));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::MalformedScan("theta values must be strictly increasing".into()));
        }
        Ok(Self { t, mode, points })
    }

    pub fn read(path: &Path) -> Result<(Self, Option<ScanMetadata>)> {
        let text = std::fs::read_to_string(path)?;
        let meta_path = path.with_extension("json");
        let meta = if meta_path.exists() {
            Some(serde_json::from_str::<ScanMetadata>(&std::fs::read_to_string(&meta_path)?)?)
        } else {
            None
        };
        let t = meta.as_ref().map_or(f64::NAN, |m| m.t);
        Ok((Self::from_csv(&text, t)?, meta))
    }
}

fn format_degrees(deg: f64) -> String {
    let rounded = (deg * 1e9).round() / 1e9;
    // Avoid "-0".
    format!("{}", rounded + 0.0)
}

/// Sidecar JSON written next to each scan CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub dim: usize,
    pub t: f64,
    pub seed: u64,
    pub contrast: f64,
    pub counts_per_point: u64,
    pub mode: ScanMode,
}

impl ScanMetadata {
    pub fn new(cfg: &ExperimentConfig, t: f64) -> Self {
        Self {
            dim: cfg.dim(),
            t,
            seed: cfg.rng_seed,
            contrast: cfg.contrast,
            counts_per_point: cfg.counts_per_point,
            mode: cfg.mode,
        }
    }
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`, returning the CSV path.
pub fn write_scan(dir: &Path, stem: &str, scan: &FringeScan, meta: &ScanMetadata) -> Result<std::path::PathBuf> {
    let csv = dir.join(format!("{stem}.csv"));
    std::fs::write(&csv, scan.to_csv())?;
    std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(meta)? + "\n")?;
    Ok(csv)
}

/// Mixes the configured seed with `t` so scans at different `t` draw
/// independent noise (SplitMix64 finalizer).
fn scan_seed(seed: u64, t: f64) -> u64 {
    let mut z = seed ^ t.to_bits().rotate_left(17) ^ 0x9E37_79B9_7F4A_7C15;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Simulates one phase-shifter sweep at fixed `t`.
///
/// The ideal probability `p` is degraded to `p′ = ½ + contrast·(p − ½)`.
/// Sampled mode draws `Poisson(counts_per_point · p′)` per point from a
/// ChaCha stream indexed by point order, so results depend only on
/// `(cfg, t)`.
pub fn generate_scan(cfg: &ExperimentConfig, t: f64) -> Result<FringeScan> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::TOutOfRange(t));
    }
    cfg.validate()?;
    let xi = cfg.schedule.eval(t)?;
    let base_seed = scan_seed(cfg.rng_seed, t);
    let mut points = Vec::with_capacity(cfg.theta_grid.len());
    for (j, &theta) in cfg.theta_grid.iter().enumerate() {
        let p = coincidence_full(&cfg.state, &xi, theta)?.clamp(0.0, 1.0);
        let degraded = 0.5 + cfg.contrast * (p - 0.5);
        let value = match cfg.mode {
            ScanMode::Exact => degraded,
            ScanMode::Sampled => {
                let mean = cfg.counts_per_point as f64 * degraded;
                if mean <= 0.0 {
                    0.0
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
                    rng.set_stream(j as u64);
                    Poisson::new(mean)
                        .map_err(|e| Error::InvalidConfig(e.to_string()))?
                        .sample(&mut rng)
                }
            }
        };
        points.push((theta, value));
    }
    Ok(FringeScan {
        t,
        mode: cfg.mode,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::builtin_schedule;
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const TOL: f64 = 1e-12;

    #[test]
    fn full_form_examples() {
        let s = make_antisymmetric_mes(2).unwrap();
        assert!(coincidence_full(&s, &[0.0, 0.0], 0.0).unwrap().abs() < TOL);
        assert!((coincidence_full(&s, &[0.0, 0.0], FRAC_PI_8).unwrap() - 0.5).abs() < TOL);
        assert!(coincidence_full(&s, &[0.0], 0.0).is_err());
    }

    #[test]
    fn full_form_zero_phase_matches_expansion() {
        // ¼Σ|α_mn − α_nm|² = ½(1 − Re Σ α_mn conj(α_nm)).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let d = rng.random_range(2..6);
            let s = BipartiteQuditState::random(d, &mut rng).unwrap();
            let mut cross = Complex64::new(0.0, 0.0);
            for m in 0..d {
                for n in 0..d {
                    cross += s.amplitude(m, n) * s.amplitude(n, m).conj();
                }
            }
            let want = 0.5 * (1.0 - cross.re);
            let got = coincidence_full(&s, &vec![0.0; d], 0.0).unwrap();
            assert!((got - want).abs() < TOL);
        }
    }

    #[test]
    fn mes_form_examples() {
        assert!((coincidence_mes(2, &[0.0, 0.0], FRAC_PI_8).unwrap() - 0.5).abs() < TOL);

        let xi3 = builtin_schedule(3).unwrap().eval(0.5).unwrap();
        for k in 0..20 {
            let c = coincidence_mes(3, &xi3, k as f64 * 0.1).unwrap();
            assert!((c - 0.5).abs() < TOL);
        }

        let xi4 = builtin_schedule(4).unwrap().eval(1.0).unwrap();
        for k in 0..20 {
            let theta = k as f64 * 0.07;
            let want = (2.0 * theta - FRAC_PI_4).sin().powi(2);
            assert!((coincidence_mes(4, &xi4, theta).unwrap() - want).abs() < TOL);
        }
    }

    #[test]
    fn qubit_closed_form() {
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            for k in 0..30 {
                let theta = k as f64 * 0.05;
                let c = coincidence_mes(2, &[PI * t, -PI * t], theta).unwrap();
                let want = 0.5 * (1.0 - (PI * t).cos() * (4.0 * theta).cos());
                assert!((c - want).abs() < TOL);
            }
        }
    }

    #[test]
    fn oracle_matches_on_qutrit_schedule() {
        let s = make_antisymmetric_mes(3).unwrap();
        let xi = builtin_schedule(3).unwrap().eval(1.0).unwrap();
        for k in 0..37 {
            let theta = (5.0 * k as f64).to_radians();
            let a = coincidence_full(&s, &xi, theta).unwrap();
            let b = circuit_oracle(&s, &xi, theta).unwrap();
            assert!((a - b).abs() < TOL, "theta={theta} full={a} oracle={b}");
        }
    }

    #[test]
    fn oracle_matches_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let d = rng.random_range(2..6);
            let s = BipartiteQuditState::random(d, &mut rng).unwrap();
            let xi: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0 * PI..2.0 * PI)).collect();
            let theta = rng.random_range(-PI..PI);
            let a = coincidence_full(&s, &xi, theta).unwrap();
            let b = circuit_oracle(&s, &xi, theta).unwrap();
            assert!((a - b).abs() < TOL);
        }
    }

    #[test]
    fn oracle_is_independent_of_shifter_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = BipartiteQuditState::random(3, &mut rng).unwrap();
        let xi = [0.3, -1.0, 0.7];
        for phi in [0.0, 0.3, 1.2] {
            let setup = CircuitSetup {
                phase_shifter_phi: phi,
                ..CircuitSetup::default()
            };
            let b = circuit_oracle_with(&s, &xi, 0.4, &setup).unwrap();
            assert!((b - coincidence_full(&s, &xi, 0.4).unwrap()).abs() < TOL);
        }
    }

    #[test]
    fn oracle_with_same_sign_erasers_gives_complementary_fringe() {
        // Both erasers at +45° flip the relative sign of the HH and VV terms.
        let s = make_antisymmetric_mes(2).unwrap();
        let setup = CircuitSetup {
            eraser_d2: FRAC_PI_8,
            ..CircuitSetup::default()
        };
        let b = circuit_oracle_with(&s, &[0.0, 0.0], 0.0, &setup).unwrap();
        assert!((b - 1.0).abs() < TOL);
    }

    #[test]
    fn oracle_zero_at_origin() {
        for d in 2..=6 {
            let s = make_antisymmetric_mes(d).unwrap();
            assert!(circuit_oracle(&s, &vec![0.0; d], 0.0).unwrap().abs() < TOL);
        }
    }

    #[test]
    fn exact_scan_shapes() {
        let mut cfg = ExperimentConfig::builtin(2, ScanMode::Exact, 0).unwrap();
        cfg.contrast = 1.0;
        let t1 = generate_scan(&cfg, 1.0).unwrap();
        for &(theta, p) in &t1.points {
            let want = 0.5 * (1.0 + (4.0 * theta).cos());
            assert!((p - want).abs() < TOL);
            assert!(((2.0 * theta - FRAC_PI_2).sin().powi(2) - want).abs() < TOL);
        }
        cfg.contrast = 0.0;
        let flat = generate_scan(&cfg, 0.0).unwrap();
        assert!(flat.values().all(|p| (p - 0.5).abs() < TOL));
        assert!(matches!(generate_scan(&cfg, 1.5), Err(Error::TOutOfRange(_))));
    }

    #[test]
    fn sampled_scan_is_deterministic() {
        let cfg = ExperimentConfig::builtin(3, ScanMode::Sampled, 42).unwrap();
        let a = generate_scan(&cfg, 1.0).unwrap();
        let b = generate_scan(&cfg, 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.values().all(|c| c.fract() == 0.0 && c >= 0.0));
        let other_t = generate_scan(&cfg, 0.0).unwrap();
        assert_ne!(a.points, other_t.points);
        let mut cfg2 = cfg.clone();
        cfg2.rng_seed = 43;
        assert_ne!(generate_scan(&cfg2, 1.0).unwrap().points, a.points);
    }

    #[test]
    fn zero_visibility_at_half_cycle() {
        for d in 2..=4 {
            let mut cfg = ExperimentConfig::builtin(d, ScanMode::Exact, 0).unwrap();
            cfg.contrast = 1.0;
            let scan = generate_scan(&cfg, 0.5).unwrap();
            let max = scan.values().fold(f64::MIN, f64::max);
            let min = scan.values().fold(f64::MAX, f64::min);
            assert!(max - min < TOL, "d={d}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::builtin(2, ScanMode::Exact, 0).unwrap();
        cfg.contrast = 1.5;
        assert!(cfg.validate().is_err());
        cfg.contrast = 0.5;
        cfg.theta_grid.clear();
        assert!(cfg.validate().is_err());
        cfg.theta_grid = vec![0.2, 0.1];
        assert!(cfg.validate().is_err());
        cfg.theta_grid = default_theta_grid();
        cfg.counts_per_point = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let cfg = ExperimentConfig::builtin(3, ScanMode::Exact, 0).unwrap();
        let scan = generate_scan(&cfg, 1.0).unwrap();
        let text = scan.to_csv();
        assert!(text.starts_with("theta_deg,probability\n0,"));
        assert!(text.contains("\n15,"));
        let back = FringeScan::from_csv(&text, 1.0).unwrap();
        for (a, b) in scan.points.iter().zip(&back.points) {
            assert!((a.0 - b.0).abs() < 1e-12);
            assert_eq!(a.1, b.1);
        }

        let sampled = generate_scan(&ExperimentConfig::builtin(3, ScanMode::Sampled, 1).unwrap(), 0.0).unwrap();
        let back = FringeScan::from_csv(&sampled.to_csv(), 0.0).unwrap();
        assert_eq!(back.mode, ScanMode::Sampled);
        assert_eq!(back.values().collect::<Vec<_>>(), sampled.values().collect::<Vec<_>>());

        assert!(FringeScan::from_csv("x,y\n1,2\n", 0.0).is_err());
        assert!(FringeScan::from_csv("theta_deg,probability\n1,abc\n", 0.0).is_err());
        assert!(FringeScan::from_csv("theta_deg,probability\n1,0.5\n0,0.5\n", 0.0).is_err());
    }
}
