//! Self-contained SVG figures: fringes per `t`, and measured vs expected
//! shifts per dimension.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::analysis::FitResult;
use crate::sagnac::FringeScan;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{ylabel}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
}

fn axes(out: &mut String, f: &Frame, xticks: &[f64], yticks: &[f64]) {
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for &x in xticks {
        let px = f.px(x);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{x}</text>"#,
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 5.0,
            HEIGHT - MARGIN + 18.0
        );
    }
    for &y in yticks {
        let py = f.py(y);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.2}" x2="{MARGIN}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN - 5.0,
            MARGIN - 8.0,
            py + 4.0,
            trim(y)
        );
    }
}

fn trim(y: f64) -> String {
    let s = format!("{y:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Fringe plot for one dimension: data points and fitted curves, one colour per `t`.
pub fn fringe_svg(d: usize, series: &[(FringeScan, FitResult)]) -> String {
    let xmax = series
        .iter()
        .flat_map(|(s, _)| s.thetas())
        .fold(0.0f64, f64::max)
        .to_degrees()
        .max(1.0);
    let ymax = series
        .iter()
        .flat_map(|(s, _)| s.values())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE)
        * 1.1;
    let f = Frame { x0: 0.0, x1: xmax, y0: 0.0, y1: ymax };

    let mut out = String::new();
    let ylabel = match series.first().map(|(s, _)| s.mode) {
        Some(crate::sagnac::ScanMode::Sampled) => "coincidence counts",
        _ => "coincidence probability",
    };
    header(&mut out, &format!("Two-photon fringes, d = {d}"), "phase-shifter angle θ (deg)", ylabel);
    axes(&mut out, &f, &nice_ticks(0.0, xmax, 6), &nice_ticks(0.0, ymax, 5));

    for (k, (scan, fit)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        for (theta, y) in &scan.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                f.px(theta.to_degrees()),
                f.py(*y)
            );
        }
        let samples = 400;
        let path: Vec<String> = (0..=samples)
            .map(|j| {
                let deg = xmax * j as f64 / samples as f64;
                let y = fit.model(deg.to_radians()).clamp(0.0, ymax);
                format!("{:.2},{:.2}", f.px(deg), f.py(y))
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">t = {}</text>"#,
            WIDTH - MARGIN - 70.0,
            MARGIN + 16.0 + 16.0 * k as f64,
            scan.t
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Measured shifts (squares, 1σ bars) and `360/d` expectations (circles).
pub fn shift_svg(rows: &[(usize, f64, f64)]) -> String {
    let dmin = rows.iter().map(|r| r.0).min().unwrap_or(2) as f64 - 0.5;
    let dmax = rows.iter().map(|r| r.0).max().unwrap_or(4) as f64 + 0.5;
    let f = Frame { x0: dmin, x1: dmax, y0: 0.0, y1: 360.0 };
    let mut out = String::new();
    header(&mut out, "Fractional topological phase vs dimension", "dimension d", "phase shift (deg)");
    let xt: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    axes(&mut out, &f, &xt, &[0.0, 90.0, 180.0, 270.0, 360.0]);
    for &(d, shift, sigma) in rows {
        let x = f.px(d as f64);
        let theory = (2.0 * PI / d as f64).to_degrees();
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{:.2}" r="6" fill="none" stroke="{}" stroke-width="2"/>"#,
            f.py(theory),
            COLORS[2]
        );
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            f.py(shift - sigma),
            f.py(shift + sigma)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="black"/>"#,
            x - 4.0,
            f.py(shift) - 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
