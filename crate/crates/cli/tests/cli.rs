use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn topophase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topophase"))
        .args(args)
        .env_remove("TOPOPHASE_OUT")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn simulate(dir: &Path, extra: &[&str]) {
    let mut args = vec!["simulate", "--out", path(dir)];
    args.extend_from_slice(extra);
    let out = topophase(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_exact_qutrit() {
    let tmp = tempfile::tempdir().unwrap();
    simulate(tmp.path(), &["--d", "3", "--t", "1", "--exact"]);
    let csv = std::fs::read_to_string(tmp.path().join("scan_d3_t1.000.csv")).unwrap();
    let row = csv.lines().find(|l| l.starts_with("15,")).unwrap();
    let p: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    // Contrast 0.35 around ½: sin² term 1/4 at 60° maps to ½ − 0.35·¼.
    assert!((p - (0.5 + 0.35 * (0.25 - 0.5))).abs() < 1e-12, "{p}");
    assert!(tmp.path().join("scan_d3_t1.000.json").exists());
}

#[test]
fn simulate_rejects_t_out_of_range() {
    let tmp = tempfile::tempdir().unwrap();
    let out = topophase(&["simulate", "--d", "3", "--t", "1.5", "--out", path(tmp.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t out of range"));
}

#[test]
fn simulate_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        simulate(dir, &["--d", "2", "--t", "0", "--sampled", "--seed", "7"]);
    }
    let name = "scan_d2_t0.000.csv";
    assert_eq!(
        std::fs::read(a.path().join(name)).unwrap(),
        std::fs::read(b.path().join(name)).unwrap()
    );
}

#[test]
fn fit_exact_ququart_shift() {
    let tmp = tempfile::tempdir().unwrap();
    simulate(tmp.path(), &["--d", "4", "--t", "0", "--t", "1", "--exact"]);
    let r = json(&topophase(&[
        "fit",
        path(&tmp.path().join("scan_d4_t1.000.csv")),
        "--ref",
        path(&tmp.path().join("scan_d4_t0.000.csv")),
    ]));
    let shift = r["shift"]["shift_deg"].as_f64().unwrap();
    assert!((shift - 90.0).abs() < 1e-4, "{shift}");
}

#[test]
fn fit_noisy_qubit_shift() {
    let tmp = tempfile::tempdir().unwrap();
    simulate(tmp.path(), &["--d", "2", "--t", "0", "--t", "1", "--sampled", "--seed", "42"]);
    let r = json(&topophase(&[
        "fit",
        path(&tmp.path().join("scan_d2_t1.000.csv")),
        "--ref",
        path(&tmp.path().join("scan_d2_t0.000.csv")),
    ]));
    let shift = r["shift"]["shift_deg"].as_f64().unwrap();
    let sigma = r["shift"]["sigma_deg"].as_f64().unwrap();
    assert!(sigma > 0.0);
    assert!((shift - 180.0).abs() <= 3.0 * sigma, "{shift} ± {sigma}");
}

#[test]
fn fit_flat_operand_is_analysis_failure() {
    let tmp = tempfile::tempdir().unwrap();
    simulate(tmp.path(), &["--d", "2", "--t", "0", "--t", "0.5", "--exact"]);
    let out = topophase(&[
        "fit",
        path(&tmp.path().join("scan_d2_t0.500.csv")),
        "--ref",
        path(&tmp.path().join("scan_d2_t0.000.csv")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("visibility too low"));
}

#[test]
fn fit_corrupt_input_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "theta_deg,probability\n0,abc\n").unwrap();
    assert_eq!(topophase(&["fit", path(&bad)]).status.code(), Some(2));
    assert_eq!(topophase(&["fit", path(&tmp.path().join("missing.csv"))]).status.code(), Some(2));
}

fn run_campaign(spec: &str) -> (tempfile::TempDir, Output) {
    let tmp = tempfile::tempdir().unwrap();
    let spec_path = tmp.path().join("spec.json");
    std::fs::write(&spec_path, spec).unwrap();
    let out_dir = tmp.path().join("out");
    let out = topophase(&["campaign", path(&spec_path), "--out", path(&out_dir)]);
    (tmp, out)
}

#[test]
fn campaign_exact() {
    let (tmp, out) = run_campaign(r#"{"schema_version": 1, "dims": [2, 3, 4], "mode": "exact"}"#);
    let summary = json(&out);
    let rows = summary["results"].as_array().unwrap();
    for (row, want) in rows.iter().zip([180.0, 120.0, 90.0]) {
        let got = row["shift_deg"].as_f64().unwrap();
        assert!((got - want).abs() < 1e-4, "{got} vs {want}");
    }
    for f in ["summary.json", "shifts.svg", "fringes_d3.svg", "fit_d4_t0.000.json"] {
        assert!(tmp.path().join("out").join(f).exists(), "{f}");
    }
}

#[test]
fn campaign_sampled_qutrit() {
    let (_tmp, out) =
        run_campaign(r#"{"schema_version": 1, "dims": [3], "mode": "sampled", "seed": 1}"#);
    let summary = json(&out);
    let row = &summary["results"][0];
    let shift = row["shift_deg"].as_f64().unwrap();
    let sigma = row["sigma_deg"].as_f64().unwrap();
    assert!((shift - 120.0).abs() <= 3.0 * sigma, "{shift} ± {sigma}");
}

#[test]
fn campaign_rejects_empty_t_list() {
    let (tmp, out) =
        run_campaign(r#"{"schema_version": 1, "dims": [3], "mode": "exact", "t_values": []}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t_values"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn verify_passes() {
    let out = topophase(&["verify", "--trials", "200", "--seed", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5);
}

#[test]
fn verify_rejects_zero_trials() {
    assert_eq!(topophase(&["verify", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn kinematic_report() {
    let r = json(&topophase(&["kinematic", "--d", "3", "--steps", "2000"]));
    let s = r.to_string();
    let g = r["geometric_deg"].as_f64().unwrap();
    assert!((g - 120.0).abs() < 1e-4, "{s}");
}
