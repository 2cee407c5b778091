//! Atom placement inside the cavity.
//!
//! This is the only place that knows about laboratory units. Positions are
//! given in units of the cavity waist `w0`; the cavity coupling is quoted in
//! MHz and the dipole-dipole strength in Hz, and both leave this module
//! expressed in units of `g0`.

use rayon::prelude::*;

use crate::dynamics::{check_grid, numeric_peak, peak_report, InitialState, Propagator};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Cavity constants, atom-2 placement and the dipole-dipole profile
/// `rddi(R) = A / R + B / R^2 + C3 / R^3` (R in micrometres, result in Hz).
#[derive(Clone, Debug, PartialEq)]
pub struct CavityGeometry {
    /// Peak atom-field coupling, MHz.
    pub g0_mhz: f64,
    /// Cavity waist, micrometres.
    pub w0_um: f64,
    /// Transition wavelength, micrometres.
    pub lambda_um: f64,
    /// Position of atom 2, units of `w0`.
    pub x2: f64,
    /// Multiply the Gaussian envelope by `|cos(2 pi x / lambda)|`.
    pub standing_wave: bool,
    /// Coefficient of `1/R`, Hz um. `None` calibrates it so that
    /// `rddi(r_ref) = gamma_ref_hz`.
    pub rddi_a: Option<f64>,
    /// Coefficient of `1/R^2`, Hz um^2.
    pub rddi_b: f64,
    /// Coefficient of `1/R^3`, Hz um^3.
    pub rddi_c3: f64,
    /// Calibration strength at `r_ref`, Hz.
    pub gamma_ref_hz: f64,
    /// Calibration separation, units of `w0`.
    pub r_ref: f64,
}

impl Default for CavityGeometry {
    fn default() -> Self {
        Self {
            g0_mhz: 400.0,
            w0_um: 4.0,
            lambda_um: 0.85,
            x2: -5.0,
            standing_wave: false,
            rddi_a: None,
            rddi_b: 0.0,
            rddi_c3: 0.0,
            gamma_ref_hz: 1e5,
            r_ref: 3.0,
        }
    }
}

impl CavityGeometry {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("g0_mhz", self.g0_mhz),
            ("w0_um", self.w0_um),
            ("lambda_um", self.lambda_um),
            ("gamma_ref_hz", self.gamma_ref_hz),
            ("r_ref", self.r_ref),
        ];
        for (name, x) in positive {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidGeometry(format!("{name} must be positive, got {x}")));
            }
        }
        let non_negative = [
            ("rddi_a", self.rddi_a.unwrap_or(0.0)),
            ("rddi_b", self.rddi_b),
            ("rddi_c3", self.rddi_c3),
        ];
        for (name, x) in non_negative {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(Error::InvalidGeometry(format!(
                    "{name} must be non-negative, got {x}"
                )));
            }
        }
        if !self.x2.is_finite() {
            return Err(Error::InvalidGeometry(format!("x2 = {}", self.x2)));
        }
        self.coefficient_a().map(|_| ())
    }

    /// Effective `1/R` coefficient, Hz um.
    pub fn coefficient_a(&self) -> Result<f64> {
        if let Some(a) = self.rddi_a {
            return Ok(a);
        }
        let r = self.r_ref * self.w0_um;
        let a = (self.gamma_ref_hz - self.rddi_b / (r * r) - self.rddi_c3 / (r * r * r)) * r;
        if a < 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "1/R^2 and 1/R^3 terms alone exceed gamma_ref_hz at r_ref (calibrated A = {a})"
            )));
        }
        Ok(a)
    }

    fn g0_hz(&self) -> f64 {
        self.g0_mhz * 1e6
    }
}

/// Atom-field coupling at `x1` (units of `w0`), in units of `g0`.
pub fn coupling_at(geo: &CavityGeometry, x1: f64) -> f64 {
    let envelope = (-x1 * x1).exp();
    if geo.standing_wave {
        let phase = 2.0 * std::f64::consts::PI * x1 * geo.w0_um / geo.lambda_um;
        envelope * phase.cos().abs()
    } else {
        envelope
    }
}

/// Dipole-dipole strength at separation `r` (units of `w0`), in units of `g0`.
pub fn rddi_at(geo: &CavityGeometry, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonpositiveSeparation(r));
    }
    Ok(rddi_hz(geo, r)? / geo.g0_hz())
}

/// Dipole-dipole strength at separation `r` (units of `w0`), in Hz.
pub fn rddi_hz(geo: &CavityGeometry, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonpositiveSeparation(r));
    }
    let a = geo.coefficient_a()?;
    let r_um = r * geo.w0_um;
    Ok(a / r_um + geo.rddi_b / (r_um * r_um) + geo.rddi_c3 / (r_um * r_um * r_um))
}

/// Couplings for atom 1 at `x1`, atom 2 at `geo.x2`.
pub fn params_at(geo: &CavityGeometry, x1: f64) -> Result<ModelParams> {
    geo.validate()?;
    if !x1.is_finite() {
        return Err(Error::InvalidGrid(format!("position x1 = {x1}")));
    }
    if x1 == geo.x2 {
        return Err(Error::CoincidentAtoms(x1));
    }
    ModelParams::new(
        coupling_at(geo, x1),
        coupling_at(geo, geo.x2),
        rddi_at(geo, (x1 - geo.x2).abs())?,
    )
}

/// Peak entanglement along a line of atom-1 positions.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub x1: Vec<f64>,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub rddi: Vec<f64>,
    pub ratio: Vec<f64>,
    pub c_peak: Vec<f64>,
    pub t_peak: Vec<f64>,
    pub period: Vec<f64>,
    /// Numerically located peak with `g2` kept, when requested.
    pub c_peak_full_g2: Option<Vec<f64>>,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }
}

struct SweepRow {
    params: ModelParams,
    c_peak: f64,
    t_peak: f64,
    period: f64,
    ratio: f64,
    full: Option<f64>,
}

fn check_positions(geo: &CavityGeometry, x1_grid: &[f64]) -> Result<()> {
    if x1_grid.is_empty() {
        return Err(Error::InvalidGrid("position grid is empty".into()));
    }
    if let Some(&x) = x1_grid.iter().find(|&&x| x == geo.x2) {
        return Err(Error::CoincidentAtoms(x));
    }
    Ok(())
}

fn sweep_row(geo: &CavityGeometry, x1: f64, diagnostic_samples: Option<usize>) -> Result<SweepRow> {
    let params = params_at(geo, x1)?;
    // the analytic peak assumes atom 2 is dark to the cavity
    let report = peak_report(&params.without_g2())?;
    let full = match diagnostic_samples {
        Some(n) => Some(numeric_peak(&params, &InitialState::photon(), n)?.1),
        None => None,
    };
    Ok(SweepRow {
        params,
        c_peak: report.c_peak,
        t_peak: report.t_peak,
        period: report.period,
        ratio: report.ratio,
        full,
    })
}

fn sweep(geo: &CavityGeometry, x1_grid: &[f64], diagnostic_samples: Option<usize>) -> Result<SweepResult> {
    geo.validate()?;
    check_grid(x1_grid)?;
    check_positions(geo, x1_grid)?;
    let rows = x1_grid
        .par_iter()
        .map(|&x| sweep_row(geo, x, diagnostic_samples))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        x1: x1_grid.to_vec(),
        g1: rows.iter().map(|r| r.params.g1()).collect(),
        g2: rows.iter().map(|r| r.params.g2()).collect(),
        rddi: rows.iter().map(|r| r.params.rddi()).collect(),
        ratio: rows.iter().map(|r| r.ratio).collect(),
        c_peak: rows.iter().map(|r| r.c_peak).collect(),
        t_peak: rows.iter().map(|r| r.t_peak).collect(),
        period: rows.iter().map(|r| r.period).collect(),
        c_peak_full_g2: diagnostic_samples.map(|_| rows.iter().map(|r| r.full.unwrap_or(f64::NAN)).collect()),
    })
}

/// Analytic peak report (with `g2` dropped) at each position of an ascending grid.
pub fn sweep_position(geo: &CavityGeometry, x1_grid: &[f64]) -> Result<SweepResult> {
    sweep(geo, x1_grid, None)
}

/// Like [`sweep_position`], adding the numerically located peak with the
/// computed `g2` retained. `samples` is the coarse grid size per period.
pub fn sweep_position_with_full_g2(geo: &CavityGeometry, x1_grid: &[f64], samples: usize) -> Result<SweepResult> {
    sweep(geo, x1_grid, Some(samples))
}

/// Concurrence on a position-time grid, row-major: `values[i][k]` is at
/// `(x1[i], t[k])`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub x1: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn mesh(geo: &CavityGeometry, x1_grid: &[f64], t_grid: &[f64]) -> Result<Mesh> {
    geo.validate()?;
    if x1_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("position grid contains non-finite values".into()));
    }
    check_positions(geo, x1_grid)?;
    check_grid(t_grid)?;
    let values = x1_grid
        .par_iter()
        .map(|&x| {
            let prop = Propagator::new(&params_at(geo, x)?, &InitialState::photon())?;
            Ok(prop.concurrence_series(t_grid)?.values().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mesh {
        x1: x1_grid.to_vec(),
        t: t_grid.to_vec(),
        values,
    })
}
