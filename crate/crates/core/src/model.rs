//! Hamiltonians of the single-excitation sector.
//!
//! All matrices act on the ordered basis `(|g,g,1>, |e,g,0>, |g,e,0>)`:
//! one photon in the cavity, atom 1 excited, atom 2 excited. Frequencies are
//! in units of the peak cavity coupling `g0`, with `hbar = 1`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::qmath::{CMatrix, CVector};

/// Index of `|g,g,1>` (both atoms ground, one photon).
pub const PHOTON: usize = 0;
/// Index of `|e,g,0>` (atom 1 excited).
pub const ATOM1: usize = 1;
/// Index of `|g,e,0>` (atom 2 excited).
pub const ATOM2: usize = 2;

/// Couplings of the two atoms to the cavity (`g1`, `g2`) and to each other
/// through the resonant dipole-dipole interaction (`rddi`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    g1: f64,
    g2: f64,
    rddi: f64,
}

impl ModelParams {
    pub fn new(g1: f64, g2: f64, rddi: f64) -> Result<Self> {
        for (name, x) in [("g1", g1), ("g2", g2), ("rddi", rddi)] {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and non-negative, got {x}"
                )));
            }
        }
        Ok(Self { g1, g2, rddi })
    }

    /// Maximally asymmetric coupling: atom 2 sees no cavity field.
    pub fn marc(g1: f64, rddi: f64) -> Result<Self> {
        Self::new(g1, 0.0, rddi)
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn rddi(&self) -> f64 {
        self.rddi
    }

    /// Same couplings with `g2` dropped.
    pub fn without_g2(&self) -> Self {
        Self { g2: 0.0, ..*self }
    }

    /// `sqrt(g1^2 + rddi^2)`, the oscillation frequency when `g2 = 0`.
    pub fn omega(&self) -> f64 {
        self.g1.hypot(self.rddi)
    }
}

/// Real symmetric `[[0, g1, g2], [g1, 0, rddi], [g2, rddi, 0]]`.
pub fn build_single_excitation_h(p: &ModelParams) -> CMatrix {
    CMatrix::from_real_rows([
        [0.0, p.g1, p.g2],
        [p.g1, 0.0, p.rddi],
        [p.g2, p.rddi, 0.0],
    ])
}

/// Closed-form eigensystem for `g2 = 0`: eigenvalues `{-omega, 0, +omega}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticSpectrum {
    pub omega: f64,
    /// Zero-energy state `(rddi, 0, -g1) / omega`; atom 1 is never excited.
    pub dark: CVector,
    /// `(g1, omega, rddi) / (sqrt(2) omega)`, energy `+omega`.
    pub bright_plus: CVector,
    /// `(g1, -omega, rddi) / (sqrt(2) omega)`, energy `-omega`.
    pub bright_minus: CVector,
    /// `g1 / rddi`, absent when `rddi = 0`.
    pub ratio_gamma: Option<f64>,
}

impl AnalyticSpectrum {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        [-self.omega, 0.0, self.omega]
    }

    /// Eigenvectors in the same order as [`eigenvalues`](Self::eigenvalues).
    pub fn eigenvectors(&self) -> [&CVector; 3] {
        [&self.bright_minus, &self.dark, &self.bright_plus]
    }
}

pub fn analytic_spectrum(p: &ModelParams) -> Result<AnalyticSpectrum> {
    if p.g2 != 0.0 {
        return Err(Error::InvalidParams(format!(
            "closed-form spectrum requires g2 = 0, got {}",
            p.g2
        )));
    }
    let omega = p.omega();
    if omega == 0.0 {
        return Err(Error::DegenerateModel);
    }
    let (g1, rddi) = (p.g1 / omega, p.rddi / omega);
    let b = 1.0 / SQRT_2;
    Ok(AnalyticSpectrum {
        omega,
        dark: CVector::from_real(&[rddi, 0.0, -g1])?,
        bright_plus: CVector::from_real(&[g1 * b, b, rddi * b])?,
        bright_minus: CVector::from_real(&[g1 * b, -b, rddi * b])?,
        ratio_gamma: (p.rddi > 0.0).then(|| p.g1 / p.rddi),
    })
}

/// Level shift `2 sqrt(2) rddi^2 / g1` of the dispersive effective model.
pub fn effective_shift(g1: f64, rddi: f64) -> Result<f64> {
    if !(g1 > 0.0) {
        return Err(Error::DivisionByZeroCoupling);
    }
    Ok(2.0 * SQRT_2 * rddi * rddi / g1)
}

/// Single-excitation block of the effective Hamiltonian valid for
/// `rddi << g1`: `[[0, g1, 0], [g1, chi, 0], [0, 0, -chi]]`.
///
/// The atom-atom term is diagonal, so `|g,e,0>` is never populated from
/// states that start outside it.
pub fn build_effective_h(p: &ModelParams) -> Result<CMatrix> {
    let chi = effective_shift(p.g1, p.rddi)?;
    Ok(CMatrix::from_real_rows([
        [0.0, p.g1, 0.0],
        [p.g1, chi, 0.0],
        [0.0, 0.0, -chi],
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{hermitian_eigendecompose, C64};

    #[test]
    fn hamiltonian_layout() {
        let h = build_single_excitation_h(&ModelParams::marc(1.0, 0.5).unwrap());
        assert_eq!(
            h,
            CMatrix::from_real_rows([[0.0, 1.0, 0.0], [1.0, 0.0, 0.5], [0.0, 0.5, 0.0]])
        );
        let zero = build_single_excitation_h(&ModelParams::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!(zero, CMatrix::zeros(3));
    }

    #[test]
    fn invalid_params() {
        assert!(ModelParams::new(-1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn small_g2_barely_moves_spectrum() {
        let full = ModelParams::new(1.0, 1e-10, 0.01).unwrap();
        let a = hermitian_eigendecompose(&build_single_excitation_h(&full)).unwrap();
        let b = hermitian_eigendecompose(&build_single_excitation_h(&full.without_g2())).unwrap();
        let scale = b.eigenvalues()[2];
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn jaynes_cummings_limit() {
        let s = analytic_spectrum(&ModelParams::marc(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(s.omega, 1.0);
        assert_eq!(s.dark, CVector::from_real(&[0.0, 0.0, -1.0]).unwrap());
        let b = 1.0 / SQRT_2;
        assert!(s.bright_plus.max_abs_diff(&CVector::from_real(&[b, b, 0.0]).unwrap()) < 1e-15);
        assert!(s.bright_minus.max_abs_diff(&CVector::from_real(&[b, -b, 0.0]).unwrap()) < 1e-15);
        assert_eq!(s.ratio_gamma, None);
    }

    #[test]
    fn dark_state_values() {
        let p = ModelParams::marc(1.0, 0.5).unwrap();
        let s = analytic_spectrum(&p).unwrap();
        assert!((s.omega - 1.118033989).abs() < 1e-9);
        assert!((s.dark[0].re - 0.447213595).abs() < 1e-9);
        assert!((s.dark[2].re + 0.894427191).abs() < 1e-9);
        let hd = build_single_excitation_h(&p).mul_vec(&s.dark).unwrap();
        assert!(hd.norm() < 1e-15);
        assert_eq!(s.ratio_gamma, Some(2.0));
    }

    #[test]
    fn exchange_limit() {
        let s = analytic_spectrum(&ModelParams::marc(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(s.omega, 1.0);
        assert_eq!(s.dark, CVector::from_real(&[1.0, 0.0, 0.0]).unwrap());
    }

    #[test]
    fn analytic_errors() {
        assert_eq!(
            analytic_spectrum(&ModelParams::marc(0.0, 0.0).unwrap()),
            Err(Error::DegenerateModel)
        );
        assert!(matches!(
            analytic_spectrum(&ModelParams::new(1.0, 0.1, 0.2).unwrap()),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn bright_states_are_eigenvectors() {
        let p = ModelParams::marc(0.3, 0.8).unwrap();
        let s = analytic_spectrum(&p).unwrap();
        let h = build_single_excitation_h(&p);
        for (e, v) in s.eigenvalues().iter().zip(s.eigenvectors()) {
            let hv = h.mul_vec(v).unwrap();
            assert!(hv.max_abs_diff(&v.scale(C64::new(*e, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn effective_matrix() {
        let h = build_effective_h(&ModelParams::marc(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(h, build_single_excitation_h(&ModelParams::marc(1.0, 0.0).unwrap()));

        let chi = effective_shift(1.0, 0.1).unwrap();
        assert!((chi - 0.028284271).abs() < 1e-9);
        let h = build_effective_h(&ModelParams::marc(1.0, 0.1).unwrap()).unwrap();
        assert_eq!(
            h,
            CMatrix::from_real_rows([[0.0, 1.0, 0.0], [1.0, chi, 0.0], [0.0, 0.0, -chi]])
        );
        assert_eq!(
            build_effective_h(&ModelParams::marc(0.0, 0.1).unwrap()),
            Err(Error::DivisionByZeroCoupling)
        );
    }
}
