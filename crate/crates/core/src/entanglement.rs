//! Two-qubit concurrence.
//!
//! Density matrices are indexed on `(|ee>, |eg>, |ge>, |gg>)` with atom 1 as
//! the first label.

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eigendecompose, CMatrix, SpectralDecomposition, C64, HERMITIAN_TOL};

pub const EE: usize = 0;
pub const EG: usize = 1;
pub const GE: usize = 2;
pub const GG: usize = 3;

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const RANGE_SLACK: f64 = 1e-10;
const PATTERN_TOL: f64 = 1e-12;

/// Eigenvalues of `rho` below this are treated as exact zeros when forming
/// `sqrt(rho)`. Rounding noise of order 1e-17 on a null eigenvalue would
/// otherwise enter the square root as ~3e-9.
const RANK_CUTOFF: f64 = 1e-13;

/// A validated 4x4 density matrix of the two atoms.
#[derive(Clone, Debug)]
pub struct TwoQubitDensityMatrix {
    entries: CMatrix,
    spectrum: SpectralDecomposition,
}

impl TwoQubitDensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: entries.dim(),
            });
        }
        let herm = entries.hermitian_check();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian: deviation {herm:e}"
            )));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        let spectrum = hermitian_eigendecompose(&entries)?;
        let lowest = spectrum.eigenvalues()[0];
        if lowest < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(Self { entries, spectrum })
    }

    /// `|psi><psi|` for a normalized two-qubit pure state.
    pub fn from_pure(amplitudes: [C64; 4]) -> Result<Self> {
        let mut m = CMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Self::new(m)
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    /// Conjugates by `u` (a 4x4 unitary): `u rho u^dagger`.
    pub fn transform(&self, u: &CMatrix) -> Result<Self> {
        let mut m = u.matmul(&self.entries).matmul(&u.adjoint());
        // restore exact Hermiticity lost to rounding
        let h = m.adjoint();
        m = m.add(&h).scale(C64::new(0.5, 0.0));
        Self::new(m)
    }
}

/// `sigma_y ⊗ sigma_y`; its sign pattern does not depend on which level is
/// called 0, since both relabelings flip the sign of each factor.
fn spin_flip() -> CMatrix {
    CMatrix::from_real_rows([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`.
///
/// The `l_i` are the singular values of `A = sqrt(rho) Y sqrt(rho)^*`, since
/// `A A^dagger = sqrt(rho) rho~ sqrt(rho)` has eigenvalues `l_i^2`. They are
/// read off as the positive eigenvalues of the Hermitian dilation
/// `[[0, A], [A^dagger, 0]]`, which keeps them accurate to rounding instead
/// of to its square root.
pub fn wootters_concurrence(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    let sqrt_rho = rho.spectrum.map_eigenvalues(|p| {
        if p <= RANK_CUTOFF {
            0.0
        } else {
            p.sqrt()
        }
    });
    let a = sqrt_rho.matmul(&spin_flip()).matmul(&sqrt_rho.conj());

    let mut dilation = CMatrix::zeros(8);
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, 4 + j)] = a[(i, j)];
            dilation[(4 + j, i)] = a[(i, j)].conj();
        }
    }
    let spectrum = hermitian_eigendecompose(&dilation)?;
    // ascending, so the top four are l4 <= l3 <= l2 <= l1
    let top = &spectrum.eigenvalues()[4..];
    let lambdas: Vec<f64> = top.iter().rev().map(|&l| l.max(0.0)).collect();
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    clamp_unit(c.max(0.0))
}

/// `2 |rho[eg][ge]|` for the sparsity pattern produced by tracing the field out
/// of a single-excitation state.
pub fn xstate_concurrence(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    let m = &rho.entries;
    for i in 0..4 {
        for j in 0..4 {
            let allowed = i == j || (i, j) == (EG, GE) || (i, j) == (GE, EG);
            if !allowed && m[(i, j)].norm() > PATTERN_TOL {
                return Err(Error::PatternMismatch(format!(
                    "entry ({i}, {j}) = {} outside the diagonal and eg/ge coherence",
                    m[(i, j)]
                )));
            }
        }
    }
    let coherence = m[(EG, GE)].norm();
    let corners = m[(EE, EE)].re * m[(GG, GG)].re;
    if corners > coherence * coherence + PATTERN_TOL {
        return Err(Error::PatternMismatch(format!(
            "rho_ee * rho_gg = {corners:e} exceeds |coherence|^2 = {:e}",
            coherence * coherence
        )));
    }
    clamp_unit(2.0 * coherence)
}

fn clamp_unit(c: f64) -> Result<f64> {
    if c > 1.0 + RANGE_SLACK || c < -RANGE_SLACK || !c.is_finite() {
        return Err(Error::InvalidDensityMatrix(format!(
            "concurrence {c} outside [0, 1]"
        )));
    }
    Ok(c.clamp(0.0, 1.0))
}
