//! Pure two-qudit path states.
//!
//! A state is stored as the dense d×d amplitude matrix `α`, where entry
//! `(m, n)` is the amplitude for the signal photon to cross slit `m` and the
//! idler photon to cross slit `n` (zero-based indices here).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ|α_mn|² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Pure bipartite state of two qudits of equal dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct BipartiteQuditState {
    amplitudes: DMatrix<Complex64>,
}

impl BipartiteQuditState {
    /// Builds a state from a square amplitude matrix, rejecting anything that
    /// is not normalized within [`NORM_TOLERANCE`].
    pub fn new(amplitudes: DMatrix<Complex64>) -> Result<Self> {
        let d = amplitudes.nrows();
        if amplitudes.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: amplitudes.ncols(),
            });
        }
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let norm_sqr = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes })
    }

    /// Product state with both photons through slit `m` and `n` respectively.
    pub fn product(dim: usize, m: usize, n: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let mut a = DMatrix::zeros(dim, dim);
        a[(m, n)] = Complex64::new(1.0, 0.0);
        Self::new(a)
    }

    /// Haar-like random pure state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let mut a = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        a.unscale_mut(norm);
        Self::new(a)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amplitudes
    }

    /// `α_mn`, zero-based.
    pub fn amplitude(&self, m: usize, n: usize) -> Complex64 {
        self.amplitudes[(m, n)]
    }

    /// Reduced density matrix of the signal photon, `ρ_A = α α†`.
    pub fn signal_reduced_density(&self) -> DMatrix<Complex64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// Antisymmetric maximally entangled state: `α_{m, d-m+1} = 1/√d`.
pub fn make_antisymmetric_mes(d: usize) -> Result<BipartiteQuditState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let c = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut a = DMatrix::zeros(d, d);
    for m in 0..d {
        a[(m, d - 1 - m)] = c;
    }
    BipartiteQuditState::new(a)
}

/// I-concurrence `C = √(2(1 − Tr ρ_A²))`.
pub fn i_concurrence(s: &BipartiteQuditState) -> f64 {
    let rho = s.signal_reduced_density();
    // ρ is Hermitian, so Tr ρ² is the squared Frobenius norm.
    let purity = rho.iter().map(|z| z.norm_sqr()).sum::<f64>();
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Maximum I-concurrence for dimension `d`, `√(2(d−1)/d)`.
pub fn max_concurrence(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let d = d as f64;
    Ok((2.0 * (d - 1.0) / d).sqrt())
}

/// Diagonal local unitary `U = Σ_k e^{iξ_k} |k⟩⟨k|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalPhaseOp {
    phases: Vec<f64>,
}

impl DiagonalPhaseOp {
    pub fn new(phases: Vec<f64>) -> Self {
        Self { phases }
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `Σ_k ξ_k`; zero for an SU(d) operation.
    pub fn phase_sum(&self) -> f64 {
        self.phases.iter().sum()
    }
}

/// Applies `U ⊗ I` with `U` diagonal on the signal slit index:
/// `α_mn → e^{iξ_m} α_mn`.
pub fn apply_signal_phases(
    s: &BipartiteQuditState,
    u: &DiagonalPhaseOp,
) -> Result<BipartiteQuditState> {
    if u.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: u.dim(),
        });
    }
    let mut a = s.amplitudes.clone();
    for (m, &xi) in u.phases.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, xi);
        for z in a.row_mut(m).iter_mut() {
            *z *= phase;
        }
    }
    Ok(BipartiteQuditState { amplitudes: a })
}

/// `⟨a|b⟩ = Σ conj(α^a_mn) α^b_mn`.
pub fn inner_product(a: &BipartiteQuditState, b: &BipartiteQuditState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(b.amplitudes.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// On-disk form: `{dim, real, imag}` with row-major nested matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateJson {
    dim: usize,
    real: Vec<Vec<f64>>,
    imag: Vec<Vec<f64>>,
}

impl TryFrom<StateJson> for BipartiteQuditState {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        let d = j.dim;
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        for rows in [&j.real, &j.imag] {
            if rows.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: rows.len(),
                });
            }
            if let Some(bad) = rows.iter().find(|r| r.len() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: bad.len(),
                });
            }
        }
        let a = DMatrix::from_fn(d, d, |m, n| Complex64::new(j.real[m][n], j.imag[m][n]));
        BipartiteQuditState::new(a)
    }
}

impl From<BipartiteQuditState> for StateJson {
    fn from(s: BipartiteQuditState) -> Self {
        let d = s.dim();
        let rows = |f: fn(&Complex64) -> f64| {
            (0..d)
                .map(|m| (0..d).map(|n| f(&s.amplitudes[(m, n)])).collect())
                .collect()
        };
        StateJson {
            dim: d,
            real: rows(|z| z.re),
            imag: rows(|z| z.im),
        }
    }
}
