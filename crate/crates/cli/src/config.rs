//! Run configuration: command-line flags layered over an optional flat
//! `key = value` file, layered over built-in defaults.

use std::path::{Path, PathBuf};

use cavity_rddi::{CavityGeometry, InitialState, ModelParams, C64};
use clap::{Args, ValueEnum};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Concurrence against time at one point.
    Concurrence,
    /// Peak concurrence against atom-1 position.
    Peak,
    /// Entanglement period against atom-1 position.
    Period,
    /// Concurrence over position and time.
    Mesh,
}

/// Flags shared by every subcommand. Every field is optional so that a
/// config file can fill in what the command line leaves out.
#[derive(Args, Clone, Debug, Default)]
pub struct Settings {
    /// Atom-1 cavity coupling (units of g0); selects direct mode.
    #[arg(long)]
    pub g1: Option<f64>,
    /// Atom-2 cavity coupling (units of g0); selects direct mode.
    #[arg(long)]
    pub g2: Option<f64>,
    /// Dipole-dipole strength (units of g0); selects direct mode.
    #[arg(long)]
    pub rddi: Option<f64>,
    /// Atom-1 position (units of w0); selects position mode.
    #[arg(long, allow_negative_numbers = true)]
    pub x1: Option<f64>,

    #[arg(long, visible_alias = "alpha", allow_negative_numbers = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, visible_alias = "beta", allow_negative_numbers = true)]
    pub beta_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta_im: Option<f64>,

    /// End of the time grid (units of 1/g0); defaults to one period.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub x1_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x1_max: Option<f64>,
    #[arg(long)]
    pub x1_steps: Option<usize>,
    /// Scan the dipole-dipole strength as `lo:hi:n` (peaks only).
    #[arg(long)]
    pub scan_rddi: Option<String>,

    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Figure drawn by `plot`.
    #[arg(long, value_enum)]
    pub figure: Option<Figure>,
    /// Add the numerically located peak with g2 retained (sweep only).
    #[arg(long)]
    pub full_g2: bool,

    #[arg(long)]
    pub g0_mhz: Option<f64>,
    #[arg(long)]
    pub w0_um: Option<f64>,
    #[arg(long)]
    pub lambda_um: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x2: Option<f64>,
    #[arg(long)]
    pub gamma_ref_hz: Option<f64>,
    #[arg(long)]
    pub r_ref: Option<f64>,
    /// Explicit 1/R coefficient (Hz um); disables calibration.
    #[arg(long)]
    pub rddi_a: Option<f64>,
    /// 1/R^2 coefficient (Hz um^2).
    #[arg(long)]
    pub rddi_b: Option<f64>,
    /// 1/R^3 coefficient (Hz um^3).
    #[arg(long)]
    pub rddi_c3: Option<f64>,
    #[arg(long)]
    pub standing_wave: bool,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!("config key `{key}`: expected a boolean, got `{value}`"))),
    }
}

impl Settings {
    /// Reads a config file into a fresh `Settings`.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut s = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            s.set(key.trim(), value.trim())?;
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.replace('_', "-");
        let k = key.as_str();
        match k {
            "g1" => self.g1 = Some(parse_value(k, value)?),
            "g2" => self.g2 = Some(parse_value(k, value)?),
            "rddi" => self.rddi = Some(parse_value(k, value)?),
            "x1" => self.x1 = Some(parse_value(k, value)?),
            "alpha" | "alpha-re" => self.alpha_re = Some(parse_value(k, value)?),
            "alpha-im" => self.alpha_im = Some(parse_value(k, value)?),
            "beta" | "beta-re" => self.beta_re = Some(parse_value(k, value)?),
            "beta-im" => self.beta_im = Some(parse_value(k, value)?),
            "t-max" => self.t_max = Some(parse_value(k, value)?),
            "t-steps" => self.t_steps = Some(parse_value(k, value)?),
            "x1-min" => self.x1_min = Some(parse_value(k, value)?),
            "x1-max" => self.x1_max = Some(parse_value(k, value)?),
            "x1-steps" => self.x1_steps = Some(parse_value(k, value)?),
            "scan-rddi" => self.scan_rddi = Some(value.to_string()),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(
                    Format::from_str(value, true).map_err(|e| CliError::Usage(format!("config key `format`: {e}")))?,
                )
            }
            "figure" => {
                self.figure = Some(
                    Figure::from_str(value, true).map_err(|e| CliError::Usage(format!("config key `figure`: {e}")))?,
                )
            }
            "full-g2" => self.full_g2 = parse_bool(k, value)?,
            "g0-mhz" => self.g0_mhz = Some(parse_value(k, value)?),
            "w0-um" => self.w0_um = Some(parse_value(k, value)?),
            "lambda-um" => self.lambda_um = Some(parse_value(k, value)?),
            "x2" => self.x2 = Some(parse_value(k, value)?),
            "gamma-ref-hz" => self.gamma_ref_hz = Some(parse_value(k, value)?),
            "r-ref" => self.r_ref = Some(parse_value(k, value)?),
            "rddi-a" => self.rddi_a = Some(parse_value(k, value)?),
            "rddi-b" => self.rddi_b = Some(parse_value(k, value)?),
            "rddi-c3" => self.rddi_c3 = Some(parse_value(k, value)?),
            "standing-wave" => self.standing_wave = parse_bool(k, value)?,
            "config" => return Err(CliError::Usage("config files cannot include other config files".into())),
            _ => return Err(CliError::Usage(format!("unknown config key `{k}`"))),
        }
        Ok(())
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Settings) -> Settings {
        macro_rules! pick {
            ($($f:ident),*) => { Settings { $($f: self.$f.or(base.$f),)* full_g2: self.full_g2 || base.full_g2, standing_wave: self.standing_wave || base.standing_wave } };
        }
        pick!(
            g1, g2, rddi, x1, alpha_re, alpha_im, beta_re, beta_im, t_max, t_steps, x1_min, x1_max, x1_steps,
            scan_rddi, config, out, format, figure, g0_mhz, w0_um, lambda_um, x2, gamma_ref_hz, r_ref, rddi_a,
            rddi_b, rddi_c3
        )
    }

    /// Merges the config file named by `--config`, if any.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let merged = match &self.config {
            Some(path) => {
                let file = Settings::from_file(path)?;
                self.over(file)
            }
            None => self,
        };
        RunConfig::from_settings(merged)
    }
}

/// Where the couplings come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// Couplings given directly in units of g0.
    Direct(ModelParams),
    /// Couplings derived from atom 1's position through the cavity geometry.
    Position(f64),
    /// Neither was given.
    Unset,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub geometry: CavityGeometry,
    pub mode: Mode,
    pub init: InitialState,
    pub t_max: Option<f64>,
    pub t_steps: usize,
    pub x1_range: Range,
    pub scan_rddi: Option<Range>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub figure: Figure,
    pub full_g2: bool,
}

pub const DEFAULT_X1: f64 = -2.0;
pub const DEFAULT_T_STEPS: usize = 201;
pub const DEFAULT_X1_STEPS: usize = 41;

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{name} must be finite, got {x}")))
    }
}

fn parse_range(spec: &str) -> Result<Range, CliError> {
    let bad = || CliError::Usage(format!("--scan-rddi expects lo:hi:n, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || n == 0 || (n > 1 && !(hi > lo)) {
        return Err(bad());
    }
    Ok(Range { lo, hi, n })
}

impl RunConfig {
    pub fn from_settings(s: Settings) -> Result<Self, CliError> {
        let defaults = CavityGeometry::default();
        let geometry = CavityGeometry {
            g0_mhz: s.g0_mhz.unwrap_or(defaults.g0_mhz),
            w0_um: s.w0_um.unwrap_or(defaults.w0_um),
            lambda_um: s.lambda_um.unwrap_or(defaults.lambda_um),
            x2: s.x2.unwrap_or(defaults.x2),
            standing_wave: s.standing_wave,
            rddi_a: s.rddi_a,
            rddi_b: s.rddi_b.unwrap_or(defaults.rddi_b),
            rddi_c3: s.rddi_c3.unwrap_or(defaults.rddi_c3),
            gamma_ref_hz: s.gamma_ref_hz.unwrap_or(defaults.gamma_ref_hz),
            r_ref: s.r_ref.unwrap_or(defaults.r_ref),
        };
        geometry.validate()?;

        let direct = s.g1.is_some() || s.g2.is_some() || s.rddi.is_some();
        let mode = match (direct, s.x1) {
            (true, Some(_)) => {
                return Err(CliError::Usage(
                    "--x1 (position mode) cannot be combined with --g1/--g2/--rddi (direct mode)".into(),
                ))
            }
            (true, None) => Mode::Direct(ModelParams::new(
                s.g1.unwrap_or(0.0),
                s.g2.unwrap_or(0.0),
                s.rddi.unwrap_or(0.0),
            )?),
            (false, Some(x)) => Mode::Position(finite("x1", x)?),
            (false, None) => Mode::Unset,
        };

        let alpha = C64::new(
            finite("alpha-re", s.alpha_re.unwrap_or(1.0))?,
            finite("alpha-im", s.alpha_im.unwrap_or(0.0))?,
        );
        let beta = C64::new(
            finite("beta-re", s.beta_re.unwrap_or(0.0))?,
            finite("beta-im", s.beta_im.unwrap_or(0.0))?,
        );
        let init = InitialState::new(alpha, beta)
            .map_err(|e| CliError::Usage(format!("initial state: {e}")))?;

        let t_steps = s.t_steps.unwrap_or(DEFAULT_T_STEPS);
        if t_steps == 0 {
            return Err(CliError::Usage("--t-steps must be at least 1".into()));
        }
        if let Some(t) = s.t_max {
            if !t.is_finite() || t < 0.0 || (t == 0.0 && t_steps > 1) {
                return Err(CliError::Usage(format!(
                    "--t-max must be finite and positive (or 0 with --t-steps 1), got {t}"
                )));
            }
        }

        let x1_range = Range {
            lo: finite("x1-min", s.x1_min.unwrap_or(-2.0))?,
            hi: finite("x1-max", s.x1_max.unwrap_or(2.0))?,
            n: s.x1_steps.unwrap_or(DEFAULT_X1_STEPS),
        };
        if x1_range.n == 0 {
            return Err(CliError::Usage("--x1-steps must be at least 1".into()));
        }
        if x1_range.n > 1 && !(x1_range.hi > x1_range.lo) {
            return Err(CliError::Usage("--x1-max must exceed --x1-min".into()));
        }

        let scan_rddi = s.scan_rddi.as_deref().map(parse_range).transpose()?;
        if scan_rddi.is_some() && s.rddi.is_some() {
            return Err(CliError::Usage("--scan-rddi cannot be combined with --rddi".into()));
        }

        Ok(Self {
            geometry,
            mode,
            init,
            t_max: s.t_max,
            t_steps,
            x1_range,
            scan_rddi,
            out: s.out,
            format: s.format.unwrap_or_default(),
            figure: s.figure.unwrap_or(Figure::Concurrence),
            full_g2: s.full_g2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_parse() {
        let s = Settings::from_text("# comment\ng1 = 1\nrddi=0.5  # trailing\nt_steps = 11\nstanding-wave = true\n")
            .unwrap();
        assert_eq!(s.g1, Some(1.0));
        assert_eq!(s.rddi, Some(0.5));
        assert_eq!(s.t_steps, Some(11));
        assert!(s.standing_wave);
    }

    #[test]
    fn file_errors() {
        assert!(Settings::from_text("bogus = 1").is_err());
        assert!(Settings::from_text("g1 = one").is_err());
        assert!(Settings::from_text("just text").is_err());
        assert!(Settings::from_text("config = other.cfg").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Settings::from_text("g1 = 1\nrddi = 0.5\nt-steps = 7").unwrap();
        let flags = Settings {
            rddi: Some(0.25),
            ..Default::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.g1, Some(1.0));
        assert_eq!(merged.rddi, Some(0.25));
        assert_eq!(merged.t_steps, Some(7));
    }

    #[test]
    fn mode_selection() {
        let direct = RunConfig::from_settings(Settings {
            g1: Some(1.0),
            ..Default::default()
        })
        .unwrap();
        assert!(matches!(direct.mode, Mode::Direct(_)));

        let position = RunConfig::from_settings(Settings {
            x1: Some(0.5),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(position.mode, Mode::Position(0.5));

        let mixed = RunConfig::from_settings(Settings {
            x1: Some(0.5),
            rddi: Some(0.1),
            ..Default::default()
        });
        assert!(matches!(mixed, Err(CliError::Usage(_))));
    }

    #[test]
    fn initial_state_must_be_normalized() {
        let bad = RunConfig::from_settings(Settings {
            alpha_re: Some(1.0),
            beta_re: Some(1.0),
            ..Default::default()
        });
        assert!(matches!(bad, Err(CliError::Usage(_))));
    }

    #[test]
    fn scan_range() {
        assert_eq!(parse_range("0.01:2:200").unwrap(), Range { lo: 0.01, hi: 2.0, n: 200 });
        assert!(parse_range("1:0:5").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
    }
}
