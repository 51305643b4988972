//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line;
//! run with `--nocapture` to see them.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use topophase::analysis::{fit_fringe, kinematic_phase, phase_shift};
use topophase::campaign::{run_in_memory, summarize};
use topophase::config::CampaignSpec;
use topophase::jones::{phase_shifter, relative_phase};
use topophase::sagnac::{
    circuit_oracle, coincidence_full, coincidence_mes, generate_scan, ExperimentConfig, FringeScan, ScanMode,
};
use topophase::schedule::builtin_schedule;
use topophase::state::{i_concurrence, make_antisymmetric_mes, BipartiteQuditState};

fn report(name: &str, ok: bool, detail: String) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[test]
fn exact_fractional_phases() {
    let start = Instant::now();
    let spec = CampaignSpec::new(vec![2, 3, 4], ScanMode::Exact, 0);
    let summary = summarize(&spec, &run_in_memory(&spec).unwrap());
    let elapsed = start.elapsed();
    let got: Vec<f64> = summary.results.iter().map(|r| r.shift_deg).collect();
    let worst = got
        .iter()
        .zip([180.0, 120.0, 90.0])
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    report(
        "exact fractional phases",
        got.len() == 3 && worst < 1e-4 && elapsed < Duration::from_secs(1),
        format!("shifts {got:.6?} deg, max error {worst:.2e} deg, {elapsed:.2?}"),
    );
}

/// Counts, per dimension, the seeds whose 3σ band contains the measured shift.
#[test]
fn sampled_consistency_with_measured_shifts() {
    let measured: [(usize, f64); 3] = [(2, 182.0), (3, 126.0), (4, 94.0)];
    let start = Instant::now();
    let mut hits = Vec::new();
    let mut mean_sigma = Vec::new();
    for &(d, value) in &measured {
        let mut n = 0;
        let mut sigma_sum = 0.0;
        for seed in 0..100u64 {
            let cfg = ExperimentConfig::builtin(d, ScanMode::Sampled, seed).unwrap();
            let f0 = fit_fringe(&generate_scan(&cfg, 0.0).unwrap()).unwrap();
            let f1 = fit_fringe(&generate_scan(&cfg, 1.0).unwrap()).unwrap();
            let s = phase_shift(&f0, &f1).unwrap();
            let (shift, sigma) = (s.shift.to_degrees(), s.sigma.to_degrees());
            sigma_sum += sigma;
            // Circular distance so a shift of 359° still counts as near 0°.
            if circ_dist(shift.to_radians(), value.to_radians()).to_degrees() <= 3.0 * sigma {
                n += 1;
            }
        }
        hits.push(n);
        mean_sigma.push(sigma_sum / 100.0);
    }
    let elapsed = start.elapsed();
    let ok = hits.iter().all(|&n| n >= 95) && elapsed < Duration::from_secs(30);
    report(
        "sampled shifts consistent with 182/126/94 deg",
        ok,
        format!("seeds within 3σ (d=2,3,4): {hits:?}/100, mean σ {mean_sigma:.2?} deg, {elapsed:.2?}"),
    );
}

#[test]
fn oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let d = rng.random_range(2..=6);
        let s = BipartiteQuditState::random(d, &mut rng).unwrap();
        let xi: Vec<f64> = (0..d).map(|_| rng.random_range(-TAU..TAU)).collect();
        let theta = rng.random_range(-PI..PI);
        let diff = (coincidence_full(&s, &xi, theta).unwrap() - circuit_oracle(&s, &xi, theta).unwrap()).abs();
        worst = worst.max(diff);
    }
    let elapsed = start.elapsed();
    report(
        "closed form equals circuit propagation",
        worst < 1e-12 && elapsed < Duration::from_secs(5),
        format!("1000 random cases, max |Δ| {worst:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn mes_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for d in 2..=6 {
        let s = make_antisymmetric_mes(d).unwrap();
        for _ in 0..1000 {
            let xi: Vec<f64> = (0..d).map(|_| rng.random_range(-TAU..TAU)).collect();
            let theta = rng.random_range(-PI..PI);
            let diff = (coincidence_full(&s, &xi, theta).unwrap() - coincidence_mes(d, &xi, theta).unwrap()).abs();
            worst = worst.max(diff);
        }
    }
    report(
        "maximally entangled reduction",
        worst < 1e-12,
        format!("d=2..6 x 1000 cases, max |Δ| {worst:.2e}"),
    );
}

#[test]
fn kinematic_cross_check() {
    let mut geo_err: f64 = 0.0;
    let mut dyn_max: f64 = 0.0;
    for d in 2..=4 {
        let k = kinematic_phase(&make_antisymmetric_mes(d).unwrap(), &builtin_schedule(d).unwrap(), 10_000).unwrap();
        geo_err = geo_err.max(circ_dist(k.geometric, TAU / d as f64));
        dyn_max = dyn_max.max(k.dynamical.abs());
    }
    report(
        "kinematic geometric phase 2π/d",
        geo_err < 1e-8 && dyn_max < 1e-9,
        format!("max geometric error {geo_err:.2e} rad, max |dynamical| {dyn_max:.2e} rad"),
    );
}

#[test]
fn zero_visibility_at_half_cycle() {
    let mut worst: f64 = 0.0;
    for d in 2..=4 {
        let cfg = ExperimentConfig::builtin(d, ScanMode::Exact, 0).unwrap();
        let scan = generate_scan(&cfg, 0.5).unwrap();
        let (lo, hi) = scan
            .values()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
        worst = worst.max(hi - lo);
    }
    report(
        "flat fringe at t = 0.5",
        worst < 1e-12,
        format!("max (max − min) {worst:.2e}"),
    );
}

#[test]
fn phase_shifter_contract() {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let phi = -PI + TAU * i as f64 / 10.0;
            let theta = -PI + TAU * j as f64 / 10.0;
            let r = relative_phase(&phase_shifter(phi, theta)).unwrap();
            worst = worst.max(circ_dist(r, 4.0 * theta));
        }
    }
    report(
        "phase shifter imprints 4θ",
        worst < 1e-12,
        format!("10x10 (φ, θ) grid, max error {worst:.2e} rad"),
    );
}

#[test]
fn concurrence_of_mes() {
    let mut worst: f64 = 0.0;
    for d in 2..=8 {
        let c = i_concurrence(&make_antisymmetric_mes(d).unwrap());
        worst = worst.max((c - (2.0 * (d as f64 - 1.0) / d as f64).sqrt()).abs());
    }
    report(
        "maximal I-concurrence",
        worst < 1e-12,
        format!("d=2..8, max error {worst:.2e}"),
    );
}

fn fringe(a: f64, v: f64, freq: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |theta| a * (1.0 - v * (freq * theta + b).cos())
}

#[test]
fn fit_recovery() {
    let thetas: Vec<f64> = (0..=36).map(|k| (5.0 * k as f64).to_radians()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);

    let mut exact_err: f64 = 0.0;
    for _ in 0..200 {
        let (v, a, b) = (rng.random_range(0.1..0.9), rng.random_range(3.6..4.4), rng.random_range(0.0..TAU));
        let f = fringe(0.5, v, a, b);
        let scan = FringeScan {
            t: 0.0,
            mode: ScanMode::Exact,
            points: thetas.iter().map(|&x| (x, f(x))).collect(),
        };
        let fit = fit_fringe(&scan).unwrap();
        exact_err = exact_err
            .max((fit.visibility - v).abs())
            .max((fit.frequency - a).abs())
            .max(circ_dist(fit.phase, b));
    }

    let trials = 1000;
    let mut within = 0;
    for _ in 0..trials {
        let b = rng.random_range(0.0..TAU);
        let f = fringe(1000.0, 0.35, 4.0, b);
        let points = thetas
            .iter()
            .map(|&x| (x, Poisson::new(f(x)).unwrap().sample(&mut rng)))
            .collect();
        let fit = fit_fringe(&FringeScan { t: 0.0, mode: ScanMode::Sampled, points }).unwrap();
        if circ_dist(fit.phase, b) <= 3.0 * fit.sigmas()[3] {
            within += 1;
        }
    }
    report(
        "fit recovers fringe parameters",
        exact_err < 1e-6 && within * 100 >= 99 * trials,
        format!("exact max error {exact_err:.2e}; Poisson b within 3σ in {within}/{trials}"),
    );
}
