//! Oracle cross-checks run by `cavity-rddi selftest`.

use std::f64::consts::PI;
use std::fmt::Write;

use cavity_rddi::dynamics::peak_optimum_numeric;
use cavity_rddi::geometry::sweep_position_with_full_g2;
use cavity_rddi::{
    analytic_spectrum, build_effective_h, build_single_excitation_h, evolve_spectral, hermitian_eigendecompose,
    linspace, peak_optimum, peak_times, reduced_density, rk4_schrodinger, wootters_concurrence, xstate_concurrence,
    CVector, CavityGeometry, InitialState, ModelParams, Propagator, Result, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn spectrum_vs_jacobi(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let p = ModelParams::marc(rng.gen_range(0.01..1.0), rng.gen_range(0.0..1.0))?;
        let s = analytic_spectrum(&p)?;
        let d = hermitian_eigendecompose(&build_single_excitation_h(&p))?;
        for (a, b) in s.eigenvalues().iter().zip(d.eigenvalues()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max eigenvalue gap {worst:.3e} (limit 1e-12)")))
}

fn rk4_vs_spectral(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let p = ModelParams::marc(rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0))?;
        let omega = p.omega();
        let h = build_single_excitation_h(&p);
        let d = hermitian_eigendecompose(&h)?;
        let psi0 = CVector::basis(3, 0);
        for k in [1.0, 5.0, 10.0] {
            let t = k / omega;
            let exact = evolve_spectral(&d, &psi0, t)?;
            let rk = rk4_schrodinger(&h, &psi0, t, 1e-3 / omega)?;
            worst = worst.max(rk.max_abs_diff(&exact));
        }
    }
    Ok((worst <= 1e-8, format!("max entrywise gap {worst:.3e} (limit 1e-8)")))
}

fn wootters_vs_fast_path(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for _ in 0..300 {
        let p = ModelParams::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..0.1), rng.gen_range(0.0..1.0))?;
        let t = rng.gen_range(0.0..30.0);
        let psi = Propagator::new(&p, &InitialState::photon())?.state_at(t)?;
        let rho = reduced_density(&psi)?;
        worst = worst.max((wootters_concurrence(&rho)? - xstate_concurrence(&rho)?).abs());
    }
    Ok((worst <= 1e-10, format!("max gap {worst:.3e} (limit 1e-10)")))
}

fn peak_formula_vs_grid(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst_steps = 0.0_f64;
    for _ in 0..10 {
        let (g1, rddi): (f64, f64) = (rng.gen_range(0.1..1.0), rng.gen_range(0.05..1.0));
        let omega = g1.hypot(rddi);
        let period = 2.0 * PI / omega;
        let per_period = 2000;
        let grid = linspace(0.0, period, per_period + 1)?;
        let step = grid[1];
        let series = Propagator::new(&ModelParams::marc(g1, rddi)?, &InitialState::photon())?.concurrence_series(&grid)?;
        let v = series.values();
        let formula = peak_times(g1, rddi, 1)?;
        // argmax separately in each half period
        for (half, t_formula) in formula.iter().enumerate() {
            let range = if half == 0 { 0..=per_period / 2 } else { per_period / 2..=per_period };
            let k = range.max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(0);
            worst_steps = worst_steps.max((grid[k] - t_formula).abs() / step);
        }
    }
    Ok((worst_steps <= 1.0, format!("worst offset {worst_steps:.3} grid steps (limit 1)")))
}

fn effective_no_entanglement() -> Result<(bool, String)> {
    let p = ModelParams::marc(1.0, 0.1)?;
    let effective = Propagator::from_hamiltonian(&build_effective_h(&p)?, &InitialState::photon())?;
    let full = Propagator::new(&p, &InitialState::photon())?;
    let (mut eff_max, mut full_max) = (0.0_f64, 0.0_f64);
    for t in linspace(0.0, 100.0, 2001)? {
        eff_max = eff_max.max(effective.concurrence_at(t)?);
        full_max = full_max.max(full.concurrence_at(t)?);
    }
    Ok((
        eff_max <= 1e-12 && full_max > 0.01,
        format!("effective max {eff_max:.3e} (limit 1e-12), full max {full_max:.4}"),
    ))
}

fn optimum_vs_search() -> Result<(bool, String)> {
    let (exact, c) = peak_optimum(1.0)?;
    let (numeric, _) = peak_optimum_numeric(1.0)?;
    let gap = (exact - numeric).abs();
    Ok((
        gap <= 1e-6 && (c - 1.0).abs() <= 1e-12,
        format!("rddi_opt {exact:.9}, golden-section gap {gap:.3e}"),
    ))
}

fn marc_validity() -> Result<(bool, String)> {
    let geo = CavityGeometry::default();
    let grid = linspace(-2.0, 2.0, 9)?;
    let s = sweep_position_with_full_g2(&geo, &grid, 400)?;
    let full = s.c_peak_full_g2.as_deref().unwrap_or(&[]);
    let worst = full
        .iter()
        .zip(&s.c_peak)
        .map(|(a, b)| (a - b).abs() / b)
        .fold(0.0, f64::max);
    Ok((worst <= 1e-6, format!("max relative change from g2 {worst:.3e} (limit 1e-6)")))
}

fn dark_state_stationary() -> Result<(bool, String)> {
    let p = ModelParams::marc(1.0, 0.5)?;
    let s = analytic_spectrum(&p)?;
    let d = hermitian_eigendecompose(&build_single_excitation_h(&p))?;
    let mut worst = 0.0_f64;
    for t in [0.7, 13.0, 99.0] {
        let psi = evolve_spectral(&d, &s.dark, t)?;
        worst = worst.max(psi.max_abs_diff(&s.dark.scale(C64::new(1.0, 0.0))));
    }
    Ok((worst <= 1e-12, format!("max drift {worst:.3e} (limit 1e-12)")))
}

pub fn run() -> (Vec<u8>, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let checks = vec![
        check("spectrum: analytic vs Jacobi", spectrum_vs_jacobi(&mut rng)),
        check("evolution: RK4 vs spectral", rk4_vs_spectral(&mut rng)),
        check("concurrence: Wootters vs 2|E|", wootters_vs_fast_path(&mut rng)),
        check("peaks: formula vs grid argmax", peak_formula_vs_grid(&mut rng)),
        check("effective Hamiltonian: no entanglement", effective_no_entanglement()),
        check("optimum: closed form vs golden section", optimum_vs_search()),
        check("MARC: g2 negligible on default sweep", marc_validity()),
        check("dark state: stationary", dark_state_stationary()),
    ];
    let mut out = String::new();
    let all = checks.iter().all(|c| c.passed);
    for c in &checks {
        let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
    (out.into_bytes(), all)
}
