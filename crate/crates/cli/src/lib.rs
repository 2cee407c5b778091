//! Command-line front end for `cavity-rddi`.
//!
//! Exit status: 0 on success, 2 for usage or configuration errors, 3 when a
//! numerical contract is violated.

pub mod commands;
pub mod config;
pub mod csv;
pub mod selftest;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::Settings;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] cavity_rddi::Error),
    #[error("numerical contract violated: {0}")]
    Contract(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Contract(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cavity-rddi", version, about = "Entanglement of two atoms coupled by one cavity photon and dipole-dipole interaction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues and eigenvectors, closed form next to Jacobi.
    Spectrum(Settings),
    /// State amplitudes, norm and concurrence over a time grid.
    Evolve(Settings),
    /// Peak concurrence, peak time and period against atom-1 position.
    Sweep(Settings),
    /// Concurrence over a position-time grid (long format).
    Mesh(Settings),
    /// Peak report, optional RDDI scan, and the optimum.
    Peaks(Settings),
    /// Run every oracle cross-check.
    Selftest(Settings),
    /// SVG figure selected by --figure.
    Plot(Settings),
}

fn execute(command: Command) -> Result<(Vec<u8>, Option<std::path::PathBuf>, bool), CliError> {
    let (settings, kind) = match command {
        Command::Spectrum(s) => (s, "spectrum"),
        Command::Evolve(s) => (s, "evolve"),
        Command::Sweep(s) => (s, "sweep"),
        Command::Mesh(s) => (s, "mesh"),
        Command::Peaks(s) => (s, "peaks"),
        Command::Selftest(s) => (s, "selftest"),
        Command::Plot(s) => (s, "plot"),
    };
    let cfg = settings.resolve()?;
    let (bytes, ok) = match kind {
        "spectrum" => (commands::spectrum(&cfg)?, true),
        "evolve" => (commands::evolve(&cfg)?, true),
        "sweep" => (commands::sweep(&cfg)?, true),
        "mesh" => (commands::mesh(&cfg)?, true),
        "peaks" => (commands::peaks(&cfg)?, true),
        "plot" => (commands::plot(&cfg)?, true),
        _ => selftest::run(),
    };
    Ok((bytes, cfg.out, ok))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Output goes to `--out` or `stdout`; diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{e}");
            return code;
        }
    };
    match execute(cli.command) {
        Ok((bytes, out, ok)) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &bytes).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                }),
                None => stdout.write_all(&bytes).map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return e.exit_code();
            }
            if ok {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "error: self-test failed");
                EXIT_NUMERICAL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
