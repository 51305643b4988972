//! Jones calculus in the H/V basis.
//!
//! Conventions: `HWP(α) = [[cos 2α, sin 2α], [sin 2α, −cos 2α]]` and
//! `QWP(α) = R(α)·diag(1, i)·R(−α)` with `R` the real rotation. Global phases
//! are ignored by every comparison in this module.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-axis magnitude below which a matrix counts as diagonal (or anti-diagonal).
pub const MONOMIAL_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Polarization state `h|H⟩ + v|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector(pub Vector2<Complex64>);

impl JonesVector {
    pub fn new(h: Complex64, v: Complex64) -> Self {
        Self(Vector2::new(h, v))
    }

    pub fn horizontal() -> Self {
        Self::new(ONE, ZERO)
    }

    pub fn vertical() -> Self {
        Self::new(ZERO, ONE)
    }

    pub fn h(&self) -> Complex64 {
        self.0[0]
    }

    pub fn v(&self) -> Complex64 {
        self.0[1]
    }

    pub fn intensity(&self) -> f64 {
        self.0.norm_squared()
    }
}

/// 2×2 complex polarization operator.
#[derive(Clone, Copy, PartialEq)]
pub struct JonesMatrix(pub Matrix2<Complex64>);

impl JonesMatrix {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn diagonal(h: Complex64, v: Complex64) -> Self {
        Self(Matrix2::new(h, ZERO, ZERO, v))
    }

    /// Real rotation `R(α)`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(Matrix2::new(c.into(), (-s).into(), s.into(), c.into()))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn apply(&self, v: &JonesVector) -> JonesVector {
        JonesVector(self.0 * v.0)
    }

    /// Frobenius norm of `M†M − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0.adjoint() * self.0 - Matrix2::identity()).norm()
    }

    /// Frobenius distance to `other` after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &JonesMatrix) -> f64 {
        let overlap: Complex64 = self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        (self.0 * phase - other.0).norm()
    }
}

impl Mul for JonesMatrix {
    type Output = JonesMatrix;

    fn mul(self, rhs: JonesMatrix) -> JonesMatrix {
        JonesMatrix(self.0 * rhs.0)
    }
}

impl fmt::Debug for JonesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{:.6}{:+.6}i, {:.6}{:+.6}i], [{:.6}{:+.6}i, {:.6}{:+.6}i]]",
            m[(0, 0)].re,
            m[(0, 0)].im,
            m[(0, 1)].re,
            m[(0, 1)].im,
            m[(1, 0)].re,
            m[(1, 0)].im,
            m[(1, 1)].re,
            m[(1, 1)].im
        )
    }
}

/// Half-wave plate with fast axis at `angle` radians from horizontal.
pub fn hwp(angle: f64) -> JonesMatrix {
    let (s, c) = (2.0 * angle).sin_cos();
    JonesMatrix(Matrix2::new(c.into(), s.into(), s.into(), (-c).into()))
}

/// Quarter-wave plate with fast axis at `angle` radians from horizontal.
pub fn qwp(angle: f64) -> JonesMatrix {
    JonesMatrix::rotation(angle) * JonesMatrix::diagonal(ONE, I) * JonesMatrix::rotation(-angle)
}

/// Product of an optical train. The first element is the first the light meets,
/// so `compose(&[a, b]) = b·a`.
pub fn compose(ms: &[JonesMatrix]) -> Result<JonesMatrix> {
    let (first, rest) = ms.split_first().ok_or(Error::EmptyComposition)?;
    Ok(rest.iter().fold(*first, |acc, m| *m * acc))
}

/// The four-plate phase shifter: QWP at 45°, HWP at `phi`, HWP at `phi + theta`,
/// QWP at 45°, in the order the light crosses them.
///
/// With both quarter-wave plates at 45° the composite also exchanges H and V,
/// so the result is anti-diagonal up to global phase. Acting on
/// `(|H⟩ + |V⟩)/√2` it yields `(|H⟩ + e^{4iθ}|V⟩)/√2` up to global phase,
/// independently of `phi`.
pub fn phase_shifter(phi: f64, theta: f64) -> JonesMatrix {
    let train = [qwp(FRAC_PI_4), hwp(phi), hwp(phi + theta), qwp(FRAC_PI_4)];
    compose(&train).expect("non-empty train")
}

/// The same phase shifter crossed in the opposite direction (as seen by the
/// counter-propagating beam in a Sagnac loop). Reversal mirrors the transverse
/// axis, so each plate angle changes sign and the order is reversed.
pub fn phase_shifter_reversed(phi: f64, theta: f64) -> JonesMatrix {
    let train = [
        qwp(-FRAC_PI_4),
        hwp(-phi - theta),
        hwp(-phi),
        qwp(-FRAC_PI_4),
    ];
    compose(&train).expect("non-empty train")
}

/// Relative phase that `m` imprints between the V and H components of a
/// balanced input `(|H⟩ + |V⟩)/√2`, in `[0, 2π)`.
///
/// `m` must be diagonal (`arg(M_vv/M_hh)`) or anti-diagonal
/// (`arg(M_vh/M_hv)`) up to global phase; off-axis entries above
/// [`MONOMIAL_TOLERANCE`] are rejected.
pub fn relative_phase(m: &JonesMatrix) -> Result<f64> {
    let a = &m.0;
    let diag_off = a[(0, 1)].norm().max(a[(1, 0)].norm());
    let anti_off = a[(0, 0)].norm().max(a[(1, 1)].norm());
    let ratio = if diag_off < MONOMIAL_TOLERANCE {
        a[(1, 1)] / a[(0, 0)]
    } else if anti_off < MONOMIAL_TOLERANCE {
        a[(1, 0)] / a[(0, 1)]
    } else {
        return Err(Error::NotMonomial(diag_off.min(anti_off)));
    };
    Ok(ratio.arg().rem_euclid(TAU) % TAU)
}
