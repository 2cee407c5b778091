use std::f64::consts::PI;

use cavity_rddi::dynamics::peak_optimum_numeric;
use cavity_rddi::geometry::sweep_position_with_full_g2;
use cavity_rddi::{
    analytic_spectrum, build_single_excitation_h, hermitian_eigendecompose, linspace, mesh as mesh_grid,
    params_at, peak_optimum, peak_report, sweep_position, CVector, ModelParams, PeakReport, Propagator,
    SweepResult, C64,
};

use crate::config::{Figure, Format, Mode, Range, RunConfig, DEFAULT_X1};
use crate::csv::Table;
use crate::svg::{self, Axes};
use crate::CliError;

/// Coarse samples per period for the numeric peak search with g2 retained.
const FULL_G2_SAMPLES: usize = 400;

/// Couplings for single-point commands.
fn single_params(cfg: &RunConfig) -> Result<ModelParams, CliError> {
    match cfg.mode {
        Mode::Direct(p) => Ok(p),
        Mode::Position(x) => Ok(params_at(&cfg.geometry, x)?),
        Mode::Unset => Ok(params_at(&cfg.geometry, DEFAULT_X1)?),
    }
}

fn range_grid(r: &Range) -> Result<Vec<f64>, CliError> {
    Ok(linspace(r.lo, r.hi, r.n)?)
}

fn time_grid(cfg: &RunConfig, default_t_max: impl FnOnce() -> Result<f64, CliError>) -> Result<Vec<f64>, CliError> {
    if cfg.t_steps == 1 {
        return Ok(vec![0.0]);
    }
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => default_t_max()?,
    };
    Ok(linspace(0.0, t_max, cfg.t_steps)?)
}

fn period_of(p: &ModelParams) -> Result<f64, CliError> {
    let omega = p.omega();
    if omega == 0.0 {
        return Err(cavity_rddi::Error::DegenerateModel.into());
    }
    Ok(2.0 * PI / omega)
}

fn require_csv(cfg: &RunConfig, command: &str) -> Result<(), CliError> {
    if cfg.format == Format::Svg {
        return Err(CliError::Usage(format!("`{command}` only produces CSV")));
    }
    Ok(())
}

fn require_position_grid(cfg: &RunConfig, command: &str) -> Result<(), CliError> {
    match cfg.mode {
        Mode::Unset => Ok(()),
        Mode::Direct(_) => Err(CliError::Usage(format!(
            "`{command}` derives couplings from positions; --g1/--g2/--rddi are not accepted"
        ))),
        Mode::Position(_) => Err(CliError::Usage(format!(
            "`{command}` scans positions; use --x1-min/--x1-max/--x1-steps instead of --x1"
        ))),
    }
}

/// Multiplies `v` by the phase that makes `<reference|v>` real and positive.
fn align_phase(v: &CVector, reference: &CVector) -> CVector {
    let overlap = reference.inner(v);
    if overlap.norm() == 0.0 {
        return v.clone();
    }
    v.scale(overlap.conj() / overlap.norm())
}

pub fn spectrum(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    require_csv(cfg, "spectrum")?;
    let p = single_params(cfg)?;
    let analytic = analytic_spectrum(&p.without_g2())?;
    let h = build_single_excitation_h(&p);
    let decomp = hermitian_eigendecompose(&h)?;

    let bound = 1e-12 * h.max_abs();
    let reconstruction = decomp.reconstruct().max_abs_diff(&h);
    if reconstruction > bound {
        return Err(CliError::Contract(format!(
            "reconstruction residual {reconstruction:e} exceeds {bound:e}"
        )));
    }

    let mut header = vec!["k".to_string(), "energy_analytic".into(), "energy_jacobi".into()];
    for source in ["analytic", "jacobi"] {
        for j in 0..3 {
            header.push(format!("{source}_v{j}_re"));
            header.push(format!("{source}_v{j}_im"));
        }
    }
    header.push("residual".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header);

    for k in 0..3 {
        let e = decomp.eigenvalues()[k];
        let v = decomp.eigenvector(k);
        let hv = h.mul_vec(&v)?;
        let residual = hv.max_abs_diff(&v.scale(C64::new(e, 0.0)));
        if residual > bound {
            return Err(CliError::Contract(format!(
                "eigenpair {k} residual {residual:e} exceeds {bound:e}"
            )));
        }
        let a = align_phase(analytic.eigenvectors()[k], &v);
        let mut row = vec![analytic.eigenvalues()[k], e];
        for z in a.entries().iter().chain(v.entries()) {
            row.push(z.re);
            row.push(z.im);
        }
        row.push(residual);
        table.labeled_row(&k.to_string(), &row);
    }
    Ok(table.into_bytes())
}

pub fn evolve(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let p = single_params(cfg)?;
    let grid = time_grid(cfg, || period_of(&p))?;
    let prop = Propagator::new(&p, &cfg.init)?;
    let series = prop.concurrence_series(&grid)?;

    if cfg.format == Format::Svg {
        return Ok(concurrence_svg(&grid, series.values()));
    }
    let mut table = Table::new(&["t", "a_re", "a_im", "b_re", "b_im", "c_re", "c_im", "norm", "concurrence"]);
    for (&t, &c) in grid.iter().zip(series.values()) {
        let psi = prop.state_at(t)?;
        let mut row = vec![t];
        for z in psi.entries() {
            row.push(z.re);
            row.push(z.im);
        }
        row.push(psi.norm());
        row.push(c);
        table.row(&row);
    }
    Ok(table.into_bytes())
}

fn concurrence_svg(t: &[f64], c: &[f64]) -> Vec<u8> {
    svg::line_plot(
        &Axes {
            title: "Concurrence",
            x_label: "t (1/g0)",
            y_label: "C(t)",
        },
        t,
        c,
    )
    .into_bytes()
}

fn run_sweep(cfg: &RunConfig) -> Result<SweepResult, CliError> {
    require_position_grid(cfg, "sweep")?;
    let grid = range_grid(&cfg.x1_range)?;
    Ok(if cfg.full_g2 {
        sweep_position_with_full_g2(&cfg.geometry, &grid, FULL_G2_SAMPLES)?
    } else {
        sweep_position(&cfg.geometry, &grid)?
    })
}

fn sweep_svg(s: &SweepResult, figure: Figure) -> Vec<u8> {
    let (title, y_label, ys) = match figure {
        Figure::Period => ("Entanglement period", "period (1/g0)", &s.period),
        _ => ("Peak concurrence", "C_peak", &s.c_peak),
    };
    svg::line_plot(
        &Axes {
            title,
            x_label: "x1 (w0)",
            y_label,
        },
        &s.x1,
        ys,
    )
    .into_bytes()
}

pub fn sweep(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let s = run_sweep(cfg)?;
    if cfg.format == Format::Svg {
        return Ok(sweep_svg(&s, cfg.figure));
    }
    let mut header = vec!["x1", "g1", "g2", "rddi", "ratio", "c_peak", "t_peak", "period"];
    if s.c_peak_full_g2.is_some() {
        header.push("c_peak_full_g2");
    }
    let mut table = Table::new(&header);
    for k in 0..s.len() {
        let mut row = vec![
            s.x1[k], s.g1[k], s.g2[k], s.rddi[k], s.ratio[k], s.c_peak[k], s.t_peak[k], s.period[k],
        ];
        if let Some(full) = &s.c_peak_full_g2 {
            row.push(full[k]);
        }
        table.row(&row);
    }
    Ok(table.into_bytes())
}

pub fn mesh(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    require_position_grid(cfg, "mesh")?;
    let x1 = range_grid(&cfg.x1_range)?;
    let t = time_grid(cfg, || {
        let s = sweep_position(&cfg.geometry, &x1)?;
        Ok(s.period.iter().cloned().fold(0.0, f64::max))
    })?;
    let m = mesh_grid(&cfg.geometry, &x1, &t)?;

    if cfg.format == Format::Svg {
        return Ok(svg::raster(
            &Axes {
                title: "Concurrence over position and time",
                x_label: "t (1/g0)",
                y_label: "x1 (w0)",
            },
            &m.t,
            &m.x1,
            &m.values,
        )
        .into_bytes());
    }
    let mut table = Table::new(&["x1", "t", "concurrence"]);
    for (x, row) in m.x1.iter().zip(&m.values) {
        for (t, c) in m.t.iter().zip(row) {
            table.row(&[*x, *t, *c]);
        }
    }
    Ok(table.into_bytes())
}

fn report_row(table: &mut Table, kind: &str, g1: f64, rddi: f64, r: &PeakReport) {
    table.labeled_row(kind, &[g1, rddi, r.ratio, r.c_peak, r.t_peak, r.period]);
}

pub fn peaks(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    require_csv(cfg, "peaks")?;
    let p = match cfg.mode {
        Mode::Direct(p) => p,
        _ => single_params(cfg)?.without_g2(),
    };
    let g1 = p.g1();
    let mut table = Table::new(&["kind", "g1", "rddi", "ratio", "c_peak", "t_peak", "period"]);

    match &cfg.scan_rddi {
        Some(range) => {
            let mut best: Option<(f64, PeakReport)> = None;
            for rddi in range_grid(range)? {
                let r = peak_report(&ModelParams::new(g1, p.g2(), rddi)?)?;
                report_row(&mut table, "scan", g1, rddi, &r);
                if best.map_or(true, |(_, b)| r.c_peak > b.c_peak) {
                    best = Some((rddi, r));
                }
            }
            if let Some((rddi, r)) = best {
                report_row(&mut table, "argmax", g1, rddi, &r);
            }
        }
        None => {
            let r = peak_report(&p)?;
            report_row(&mut table, "report", g1, p.rddi(), &r);
        }
    }

    let (rddi_opt, _) = peak_optimum(g1)?;
    let r = peak_report(&ModelParams::marc(g1, rddi_opt)?)?;
    report_row(&mut table, "optimum", g1, rddi_opt, &r);
    let (rddi_num, _) = peak_optimum_numeric(g1)?;
    let r = peak_report(&ModelParams::marc(g1, rddi_num)?)?;
    report_row(&mut table, "optimum_numeric", g1, rddi_num, &r);
    Ok(table.into_bytes())
}

pub fn plot(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let svg_cfg = RunConfig {
        format: Format::Svg,
        ..cfg.clone()
    };
    match cfg.figure {
        Figure::Concurrence => evolve(&svg_cfg),
        Figure::Peak | Figure::Period => sweep(&svg_cfg),
        Figure::Mesh => mesh(&svg_cfg),
    }
}
