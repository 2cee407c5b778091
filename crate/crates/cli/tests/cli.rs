use std::f64::consts::PI;
use std::process::Command;

use cavity_rddi::{params_at, peak_report, sweep_position, CavityGeometry, InitialState, ModelParams, Propagator};
use cavity_rddi_cli::{run, CliError, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("cavity-rddi").chain(args.iter().copied()), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Header plus rows of a CSV whose first column may be a label.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

#[test]
fn spectrum_matches_closed_form() {
    let o = cli(&["spectrum", "--g1", "1", "--rddi", "0.5"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (h, rows) = parse_csv(&o.stdout);
    assert_eq!(rows.len(), 3);
    let omega = 1.25_f64.sqrt();
    let jacobi = column(&h, &rows, "energy_jacobi");
    for (e, want) in jacobi.iter().zip([-omega, 0.0, omega]) {
        assert!((e - want).abs() <= 1e-12);
    }
    for j in 0..3 {
        for part in ["re", "im"] {
            let a = column(&h, &rows, &format!("analytic_v{j}_{part}"));
            let b = column(&h, &rows, &format!("jacobi_v{j}_{part}"));
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-12, "v{j}_{part}: {x} vs {y}");
            }
        }
    }
    assert_eq!(rows[0][0], "0");
}

#[test]
fn degenerate_model_is_a_usage_error() {
    let o = cli(&["spectrum", "--g1", "0", "--rddi", "0"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("DegenerateModel"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors() {
    for args in [
        vec!["nope"],
        vec!["evolve", "--g1", "-1"],
        vec!["evolve", "--g1", "1", "--x1", "0"],
        vec!["evolve", "--alpha", "1", "--beta", "1"],
        vec!["sweep", "--g1", "1"],
        vec!["sweep", "--x1-min", "1", "--x1-max", "0"],
        vec!["peaks", "--g1", "1", "--scan-rddi", "1:0:5"],
        vec!["peaks", "--g1", "1", "--rddi", "0.1", "--scan-rddi", "0:1:5"],
        vec!["spectrum", "--format", "svg"],
        vec!["evolve", "--config", "/nonexistent/file.cfg"],
    ] {
        let o = cli(&args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}: {}", o.stderr);
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_and_version_succeed() {
    let o = cli(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("selftest"));
    assert_eq!(cli(&["--version"]).code, EXIT_OK);
}

#[test]
fn numerical_errors_map_to_exit_three() {
    let e: CliError = cavity_rddi::Error::NonFinite("x".into()).into();
    assert_eq!(e.exit_code(), EXIT_NUMERICAL);
    assert_eq!(CliError::Contract("x".into()).exit_code(), EXIT_NUMERICAL);
    let e: CliError = cavity_rddi::Error::DegenerateModel.into();
    assert_eq!(e.exit_code(), EXIT_USAGE);
}

#[test]
fn exchange_limit_without_photon_coupling() {
    // photon decoupled: b, c swap under the dipole coupling alone
    let o = cli(&["evolve", "--g1", "0", "--rddi", "0.3", "--alpha", "0", "--beta", "1", "--t-max", "10", "--t-steps", "101"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (h, rows) = parse_csv(&o.stdout);
    let t = column(&h, &rows, "t");
    let c = column(&h, &rows, "concurrence");
    let norm = column(&h, &rows, "norm");
    for k in 0..t.len() {
        assert!((c[k] - (0.6 * t[k]).sin().abs()).abs() <= 1e-12, "t = {}", t[k]);
        assert!((norm[k] - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn evolve_round_trips_against_library() {
    let o = cli(&["evolve", "--g1", "0.8", "--g2", "0.01", "--rddi", "0.4", "--t-max", "20", "--t-steps", "57"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (h, rows) = parse_csv(&o.stdout);
    assert_eq!(rows.len(), 57);
    let prop = Propagator::new(&ModelParams::new(0.8, 0.01, 0.4).unwrap(), &InitialState::photon()).unwrap();
    let t = column(&h, &rows, "t");
    let c = column(&h, &rows, "concurrence");
    let b_im = column(&h, &rows, "b_im");
    for k in 0..t.len() {
        let psi = prop.state_at(t[k]).unwrap();
        assert!((b_im[k] - psi[1].im).abs() <= 1e-12);
        assert!((c[k] - prop.concurrence_at(t[k]).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn evolve_defaults_to_one_period_at_default_position() {
    let o = cli(&["evolve", "--t-steps", "5"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (h, rows) = parse_csv(&o.stdout);
    let t = column(&h, &rows, "t");
    let p = params_at(&CavityGeometry::default(), -2.0).unwrap();
    assert!((t[4] - 2.0 * PI / p.omega()).abs() <= 1e-9);
}

#[test]
fn sweep_round_trips_against_library() {
    let o = cli(&["sweep", "--x1-min", "-1", "--x1-max", "1", "--x1-steps", "5"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (h, rows) = parse_csv(&o.stdout);
    let x1 = column(&h, &rows, "x1");
    let lib = sweep_position(&CavityGeometry::default(), &x1).unwrap();
    for (name, want) in [("c_peak", &lib.c_peak), ("period", &lib.period), ("ratio", &lib.ratio)] {
        for (a, b) in column(&h, &rows, name).iter().zip(want.iter()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{name}");
        }
    }
    assert!(!h.iter().any(|c| c == "c_peak_full_g2"));

    let o = cli(&["sweep", "--x1-min", "-1", "--x1-max", "1", "--x1-steps", "3", "--full-g2"]);
    let (h, rows) = parse_csv(&o.stdout);
    let full = column(&h, &rows, "c_peak_full_g2");
    let approx = column(&h, &rows, "c_peak");
    for (a, b) in full.iter().zip(&approx) {
        assert!((a - b).abs() / b <= 1e-6);
    }
}

#[test]
fn mesh_is_long_format() {
    let o = cli(&["mesh", "--x1-steps", "3", "--t-steps", "4"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (h, rows) = parse_csv(&o.stdout);
    assert_eq!(h, ["x1", "t", "concurrence"]);
    assert_eq!(rows.len(), 12);
    assert!(column(&h, &rows, "concurrence").iter().all(|c| (0.0..=1.0).contains(c)));
}

#[test]
fn peaks_scan_finds_the_optimum() {
    let o = cli(&["peaks", "--g1", "1", "--scan-rddi", "0.01:2:200"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (_, rows) = parse_csv(&o.stdout);
    let row = |kind: &str| rows.iter().find(|r| r[0] == kind).unwrap().clone();
    let argmax: f64 = row("argmax")[2].parse().unwrap();
    assert!((argmax - 0.5_f64.sqrt()).abs() <= 0.01);
    let c_opt: f64 = row("optimum")[4].parse().unwrap();
    assert!((c_opt - 1.0).abs() <= 1e-12);
    assert_eq!(rows.iter().filter(|r| r[0] == "scan").count(), 200);
}

#[test]
fn peaks_report_matches_library() {
    let o = cli(&["peaks", "--g1", "0.6", "--rddi", "0.2"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (_, rows) = parse_csv(&o.stdout);
    let r = peak_report(&ModelParams::marc(0.6, 0.2).unwrap()).unwrap();
    let got: Vec<f64> = rows[0][1..].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(rows[0][0], "report");
    for (a, b) in got[2..].iter().zip([r.ratio, r.c_peak, r.t_peak, r.period]) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# couplings\ng1 = 0.5\nrddi = 0.25  # trailing comment\nt_max = 4\nt_steps = 3\n").unwrap();
    let cfg = path.to_str().unwrap();

    let from_file = cli(&["evolve", "--config", cfg]);
    let direct = cli(&["evolve", "--g1", "0.5", "--rddi", "0.25", "--t-max", "4", "--t-steps", "3"]);
    assert_eq!(from_file.code, EXIT_OK, "{}", from_file.stderr);
    assert_eq!(from_file.stdout, direct.stdout);

    let overridden = cli(&["evolve", "--config", cfg, "--rddi", "0.1"]);
    let expected = cli(&["evolve", "--g1", "0.5", "--rddi", "0.1", "--t-max", "4", "--t-steps", "3"]);
    assert_eq!(overridden.stdout, expected.stdout);

    std::fs::write(&path, "colour = red\n").unwrap();
    assert_eq!(cli(&["evolve", "--config", cfg]).code, EXIT_USAGE);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.svg");
    let o = cli(&["plot", "--figure", "concurrence", "--g1", "1", "--rddi", "0.7", "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));

    let bad = dir.path().join("missing").join("x.csv");
    let o = cli(&["spectrum", "--g1", "1", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cavity-rddi");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["spectrum", "--g1", "1", "--rddi", "0.5"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("k,energy_analytic"));
    let bad = status(&["spectrum", "--g1", "0", "--rddi", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("DegenerateModel"));
}
