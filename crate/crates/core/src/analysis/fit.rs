//! Damped least-squares fit of `y(θ) = A(1 − v cos(aθ + b))` to a fringe scan.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sagnac::FringeScan;

pub const MIN_POINTS: usize = 8;
const MAX_ITERATIONS: usize = 200;
const RSS_REL_TOL: f64 = 1e-10;
const PHASE_GRID: usize = 36;

/// Fitted fringe parameters. Indices into `covariance` follow
/// `(amplitude, visibility, frequency, phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// `A`, in the scan's units (probability or counts).
    pub amplitude: f64,
    /// `v ∈ [0, 1]`.
    pub visibility: f64,
    /// `a > 0`, radians of fringe phase per radian of θ.
    pub frequency: f64,
    /// `b ∈ [0, 2π)`.
    pub phase: f64,
    pub covariance: [[f64; 4]; 4],
    pub rss: f64,
    /// False when the data are flat and `b` carries no information.
    pub phase_defined: bool,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    /// One-sigma uncertainties `(σ_A, σ_v, σ_a, σ_b)`.
    pub fn sigmas(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.covariance[k][k].max(0.0).sqrt())
    }

    pub fn model(&self, theta: f64) -> f64 {
        model(&self.params(), theta)
    }

    fn params(&self) -> [f64; 4] {
        [self.amplitude, self.visibility, self.frequency, self.phase]
    }
}

fn model(p: &[f64; 4], theta: f64) -> f64 {
    p[0] * (1.0 - p[1] * (p[2] * theta + p[3]).cos())
}

fn jacobian_row(p: &[f64; 4], theta: f64) -> [f64; 4] {
    let (s, c) = (p[2] * theta + p[3]).sin_cos();
    [1.0 - p[1] * c, -p[0] * c, p[0] * p[1] * s * theta, p[0] * p[1] * s]
}

fn rss(p: &[f64; 4], xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter().zip(ys).map(|(&x, &y)| (y - model(p, x)).powi(2)).sum()
}

/// Maps parameters back to the canonical branch: `v ≥ 0`, `a > 0`.
fn canonicalize(p: &mut [f64; 4]) {
    if p[1] < 0.0 {
        p[1] = -p[1];
        p[3] += PI;
    }
    if p[2] < 0.0 {
        p[2] = -p[2];
        p[3] = -p[3];
    }
    p[1] = p[1].min(1.0);
}

fn normal_equations(p: &[f64; 4], xs: &[f64], ys: &[f64]) -> (Matrix4<f64>, Vector4<f64>) {
    let mut jtj = Matrix4::zeros();
    let mut jtr = Vector4::zeros();
    for (&x, &y) in xs.iter().zip(ys) {
        let row = Vector4::from(jacobian_row(p, x));
        let r = y - model(p, x);
        jtj += row * row.transpose();
        jtr += row * r;
    }
    (jtj, jtr)
}

/// Fits `A(1 − v cos(aθ + b))` by Levenberg–Marquardt.
///
/// Start: `A` = mean, `v` = (max−min)/(max+min), `a = 4`, `b` from a 36-point
/// grid. Stops when the relative RSS change of an accepted step drops below
/// 1e-10, or after 200 iterations. The covariance is the inverse Gauss–Newton
/// normal matrix scaled by `RSS/(N − 4)`.
pub fn fit_fringe(scan: &FringeScan) -> Result<FitResult> {
    let n = scan.points.len();
    if n < MIN_POINTS {
        return Err(Error::TooFewPoints(n));
    }
    let xs: Vec<f64> = scan.thetas().collect();
    let ys: Vec<f64> = scan.values().collect();
    let mean = ys.iter().sum::<f64>() / n as f64;
    let max = ys.iter().copied().fold(f64::MIN, f64::max);
    let min = ys.iter().copied().fold(f64::MAX, f64::min);

    if max - min <= 1e-12 * max.abs().max(f64::MIN_POSITIVE) {
        let p = [mean, 0.0, 4.0, 0.0];
        return Ok(FitResult {
            amplitude: mean,
            visibility: 0.0,
            frequency: 4.0,
            phase: 0.0,
            covariance: [[0.0; 4]; 4],
            rss: rss(&p, &xs, &ys),
            phase_defined: false,
            iterations: 0,
            converged: true,
        });
    }

    let v0 = if max + min > 0.0 { (max - min) / (max + min) } else { 0.0 };
    let mut p = (0..PHASE_GRID)
        .map(|k| [mean, v0, 4.0, TAU * k as f64 / PHASE_GRID as f64])
        .min_by(|a, b| rss(a, &xs, &ys).total_cmp(&rss(b, &xs, &ys)))
        .expect("non-empty grid");

    let scale = ys.iter().map(|y| y * y).sum::<f64>();
    let mut current = rss(&p, &xs, &ys);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&p, &xs, &ys);
        let mut damped = jtj;
        for k in 0..4 {
            damped[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
        }
        let Some(step) = damped.cholesky().map(|c| c.solve(&jtr)) else {
            lambda *= 10.0;
            continue;
        };
        let mut trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2], p[3] + step[3]];
        canonicalize(&mut trial);
        let next = rss(&trial, &xs, &ys);
        if next <= current {
            let change = (current - next) / current.max(f64::MIN_POSITIVE);
            p = trial;
            current = next;
            lambda = (lambda * 0.1).max(1e-12);
            if change < RSS_REL_TOL || current <= 1e-30 * scale {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e16 {
                // No descent direction left: already at the minimum to working precision.
                converged = true;
                break;
            }
        }
    }

    let (jtj, _) = normal_equations(&p, &xs, &ys);
    let dof = (n - 4) as f64;
    let covariance = jtj
        .try_inverse()
        .map(|inv| inv * (current / dof))
        .unwrap_or_else(|| Matrix4::from_element(f64::NAN));
    let covariance = std::array::from_fn(|i| std::array::from_fn(|j| covariance[(i, j)]));

    Ok(FitResult {
        amplitude: p[0],
        visibility: p[1],
        frequency: p[2],
        phase: p[3].rem_euclid(TAU) % TAU,
        covariance,
        rss: current,
        phase_defined: true,
        iterations,
        converged,
    })
}
