//! Time evolution of the single-excitation state and its entanglement.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::entanglement::{wootters_concurrence, TwoQubitDensityMatrix, EG, GE, GG};
use crate::error::{Error, Result};
use crate::model::{build_single_excitation_h, ModelParams, ATOM1, ATOM2, PHOTON};
use crate::qmath::{evolve_spectral, hermitian_eigendecompose, CMatrix, CVector, SpectralDecomposition, C64};

/// `max_x |sin x| (1 - cos x)`, attained at `x = 2pi/3` and `4pi/3`.
pub const PEAK_SHAPE_MAX: f64 = 1.299_038_105_676_658; // 3 sqrt(3) / 4

const NORM_TOL: f64 = 1e-10;

/// `|g>_2 ⊗ (alpha |g>_1 |1> + beta |e>_1 |0>)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialState {
    alpha: C64,
    beta: C64,
}

impl InitialState {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite("initial amplitudes".into()));
        }
        if (norm * norm - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedState { norm });
        }
        Ok(Self { alpha, beta })
    }

    /// Photon in the cavity, both atoms in the ground state.
    pub fn photon() -> Self {
        Self {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.0, 0.0),
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn to_vector(&self) -> CVector {
        CVector::new(vec![self.alpha, self.beta, C64::new(0.0, 0.0)])
            .expect("validated amplitudes are finite")
    }
}

/// Values sampled on a strictly ascending time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_grid(&times)?;
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("series value".into()));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the largest value, first one on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = k;
            }
        }
        best
    }
}

/// Peak entanglement within one period for a photon-initialized run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakReport {
    pub t_peak: f64,
    pub c_peak: f64,
    pub period: f64,
    /// `rddi / g1`.
    pub ratio: f64,
}

/// `n` evenly spaced points from `lo` to `hi` inclusive; `n = 1` gives `[lo]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidGrid("grid needs at least one point".into()));
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidGrid(format!("non-finite range {lo}..{hi}")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if !(hi > lo) {
        return Err(Error::InvalidGrid(format!(
            "range {lo}..{hi} must be increasing for {n} points"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
    grid[n - 1] = hi;
    Ok(grid)
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("grid contains non-finite values".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Diagonalized Hamiltonian paired with an initial state, for repeated
/// evaluation at many times.
#[derive(Clone, Debug)]
pub struct Propagator {
    decomp: SpectralDecomposition,
    psi0: CVector,
}

impl Propagator {
    pub fn new(p: &ModelParams, init: &InitialState) -> Result<Self> {
        Self::from_hamiltonian(&build_single_excitation_h(p), init)
    }

    pub fn from_hamiltonian(h: &CMatrix, init: &InitialState) -> Result<Self> {
        Ok(Self {
            decomp: hermitian_eigendecompose(h)?,
            psi0: init.to_vector(),
        })
    }

    pub fn state_at(&self, t: f64) -> Result<CVector> {
        evolve_spectral(&self.decomp, &self.psi0, t)
    }

    pub fn concurrence_at(&self, t: f64) -> Result<f64> {
        wootters_concurrence(&reduced_density(&self.state_at(t)?)?)
    }

    pub fn concurrence_series(&self, t_grid: &[f64]) -> Result<TimeSeries> {
        check_grid(t_grid)?;
        let values = t_grid
            .par_iter()
            .map(|&t| self.concurrence_at(t))
            .collect::<Result<Vec<_>>>()?;
        TimeSeries::new(t_grid.to_vec(), values)
    }
}

/// State at time `t`, starting from `(alpha, beta, 0)`.
pub fn evolve(p: &ModelParams, init: &InitialState, t: f64) -> Result<CVector> {
    Propagator::new(p, init)?.state_at(t)
}

/// Traces the photon out of `a |g,g,1> + b |e,g,0> + c |g,e,0>`.
pub fn reduced_density(psi: &CVector) -> Result<TwoQubitDensityMatrix> {
    if psi.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: psi.dim(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::UnnormalizedState { norm });
    }
    let (a, b, c) = (psi[PHOTON], psi[ATOM1], psi[ATOM2]);
    let mut rho = CMatrix::zeros(4);
    rho[(EG, EG)] = C64::new(b.norm_sqr(), 0.0);
    rho[(GE, GE)] = C64::new(c.norm_sqr(), 0.0);
    rho[(GG, GG)] = C64::new(a.norm_sqr(), 0.0);
    rho[(EG, GE)] = b * c.conj();
    rho[(GE, EG)] = c * b.conj();
    TwoQubitDensityMatrix::new(rho)
}

pub fn concurrence_series(p: &ModelParams, init: &InitialState, t_grid: &[f64]) -> Result<TimeSeries> {
    Propagator::new(p, init)?.concurrence_series(t_grid)
}

fn omega_of(g1: f64, rddi: f64) -> Result<f64> {
    if !(g1 >= 0.0) || !(rddi >= 0.0) || !g1.is_finite() || !rddi.is_finite() {
        return Err(Error::InvalidParams(format!(
            "couplings must be finite and non-negative (g1 = {g1}, rddi = {rddi})"
        )));
    }
    let omega = g1.hypot(rddi);
    if omega == 0.0 {
        return Err(Error::DegenerateModel);
    }
    Ok(omega)
}

/// Peak height prefactor `2 g1^2 rddi / omega^3`.
fn amplitude(g1: f64, rddi: f64, omega: f64) -> f64 {
    2.0 * (g1 / omega) * (g1 / omega) * (rddi / omega)
}

/// `2 |b(t) c(t)|` for the photon-initialized run with `g2 = 0`:
/// `(2 g1^2 rddi / omega^3) |sin(omega t)| (1 - cos(omega t))`.
pub fn closed_form_concurrence(g1: f64, rddi: f64, t: f64) -> Result<f64> {
    let omega = omega_of(g1, rddi)?;
    let x = omega * t;
    let c = amplitude(g1, rddi, omega) * x.sin().abs() * (1.0 - x.cos());
    Ok(c.min(1.0))
}

/// Peak times `(3m -+ 1) pi / (3 omega)` for odd `m <= m_max`, sorted.
pub fn peak_times(g1: f64, rddi: f64, m_max: u32) -> Result<Vec<f64>> {
    let omega = omega_of(g1, rddi)?;
    if m_max == 0 || m_max % 2 == 0 {
        return Err(Error::InvalidParams(format!(
            "m_max must be odd and >= 1, got {m_max}"
        )));
    }
    let mut times = Vec::new();
    for m in (1..=m_max).step_by(2) {
        let m = f64::from(m);
        times.push((3.0 * m - 1.0) * PI / (3.0 * omega));
        times.push((3.0 * m + 1.0) * PI / (3.0 * omega));
    }
    Ok(times)
}

pub fn peak_report(p: &ModelParams) -> Result<PeakReport> {
    if p.g2() != 0.0 {
        return Err(Error::InvalidParams(format!(
            "peak analytics require g2 = 0, got {}",
            p.g2()
        )));
    }
    let (g1, rddi) = (p.g1(), p.rddi());
    let omega = omega_of(g1, rddi)?;
    if g1 == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let c_peak = (amplitude(g1, rddi, omega) * PEAK_SHAPE_MAX).min(1.0);
    Ok(PeakReport {
        t_peak: 2.0 * PI / (3.0 * omega),
        c_peak,
        period: 2.0 * PI / omega,
        ratio: rddi / g1,
    })
}

/// Peak concurrence as a function of `rho = rddi / g1` alone:
/// `(3 sqrt(3) / 2) rho / (1 + rho^2)^(3/2)`.
pub fn peak_concurrence_for_ratio(ratio: f64) -> f64 {
    let s = 1.0 + ratio * ratio;
    (2.0 * PEAK_SHAPE_MAX * ratio / (s * s.sqrt())).min(1.0)
}

/// RDDI strength maximizing the peak concurrence at fixed `g1`, and the
/// maximum itself: `(g1 / sqrt 2, 1)`.
pub fn peak_optimum(g1: f64) -> Result<(f64, f64)> {
    if !(g1 > 0.0) || !g1.is_finite() {
        return Err(Error::ZeroCoupling);
    }
    let rddi = g1 / 2f64.sqrt();
    let c = peak_report(&ModelParams::marc(g1, rddi)?)?.c_peak;
    Ok((rddi, c))
}

/// Golden-section search for the optimum over `rddi in (0, 10 g1]`.
pub fn peak_optimum_numeric(g1: f64) -> Result<(f64, f64)> {
    if !(g1 > 0.0) || !g1.is_finite() {
        return Err(Error::ZeroCoupling);
    }
    let f = |rddi: f64| peak_concurrence_for_ratio(rddi / g1);
    let rddi = golden_section_max(f, 0.0, 10.0 * g1, 1e-12 * g1);
    Ok((rddi, f(rddi)))
}

/// Maximizer of a unimodal `f` on `[lo, hi]`, bracketed to width `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if x1 >= x2 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Largest concurrence over one period `2 pi / omega`, found by a grid scan
/// of `samples` points followed by golden-section refinement around the best
/// sample. Works for any `g2`, where no closed form exists.
pub fn numeric_peak(p: &ModelParams, init: &InitialState, samples: usize) -> Result<(f64, f64)> {
    let omega = omega_of(p.g1(), p.rddi())?;
    let period = 2.0 * PI / omega;
    let grid = linspace(0.0, period, samples.max(3))?;
    let prop = Propagator::new(p, init)?;
    let series = prop.concurrence_series(&grid)?;
    let k = series.argmax();
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let eval = |t: f64| prop.concurrence_at(t).unwrap_or(f64::NEG_INFINITY);
    let t = golden_section_max(eval, lo, hi, 1e-10 * period);
    let c = prop.concurrence_at(t)?;
    if c >= series.values()[k] {
        Ok((t, c))
    } else {
        Ok((grid[k], series.values()[k]))
    }
}
