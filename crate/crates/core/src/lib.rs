//! Entanglement dynamics of two two-level atoms sharing one cavity photon,
//! with the second atom coupled to the first only through a resonant
//! dipole-dipole interaction.
//!
//! Units: `hbar = 1`, frequencies in units of the peak cavity coupling `g0`,
//! times in units of `1/g0`, positions in units of the cavity waist `w0`.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod geometry;
pub mod model;
pub mod qmath;

pub use dynamics::{
    closed_form_concurrence, concurrence_series, evolve, linspace, peak_optimum, peak_report, peak_times,
    reduced_density, InitialState, PeakReport, Propagator, TimeSeries,
};
pub use entanglement::{wootters_concurrence, xstate_concurrence, TwoQubitDensityMatrix};
pub use error::{Error, Result};
pub use geometry::{coupling_at, mesh, params_at, rddi_at, sweep_position, CavityGeometry, Mesh, SweepResult};
pub use model::{analytic_spectrum, build_effective_h, build_single_excitation_h, AnalyticSpectrum, ModelParams};
pub use qmath::{evolve_spectral, hermitian_eigendecompose, rk4_schrodinger, CMatrix, CVector, SpectralDecomposition, C64};
