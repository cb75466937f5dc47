//! `key = value` run configuration with flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use xidd_core::{BathSpec, QuadratureOptions, Scheme};

use crate::error::{CliError, Result};

/// Upper end of the default time grid. Under the default bath and cycle
/// count, `P_pdd` at this time is 0.300 (found by bisection on the PDD
/// curve, which collapses once `2 pi N / T` drops below the cutoff).
pub const DEFAULT_T_MAX: f64 = 3.1118;

/// Which curves to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeChoice {
    Pdd,
    Udd,
    Custom,
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            Self::Pdd => vec![Scheme::Pdd],
            Self::Udd => vec![Scheme::Udd],
            Self::Custom => vec![Scheme::Custom],
            Self::Both => vec![Scheme::Pdd, Scheme::Udd],
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pdd" => Ok(Self::Pdd),
            "udd" => Ok(Self::Udd),
            "custom" => Ok(Self::Custom),
            "both" => Ok(Self::Both),
            other => Err(format!("expected one of pdd, udd, custom, both; got `{other}`")),
        }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pdd => "pdd",
            Self::Udd => "udd",
            Self::Custom => "custom",
            Self::Both => "both",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub cycles: usize,
    pub alpha: f64,
    pub temperature: f64,
    pub cutoff: f64,
    pub scheme: SchemeChoice,
    /// `None` means `t_max / t_points`.
    pub t_min: Option<f64>,
    pub t_max: f64,
    pub t_points: usize,
    pub quad_tolerance: f64,
    pub output_path: PathBuf,
    pub custom_fractions_path: Option<PathBuf>,
    /// Worker threads for the curve; 0 uses every available core.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 6,
            cycles: 50,
            alpha: 0.25,
            temperature: 150.0,
            cutoff: 100.0,
            scheme: SchemeChoice::Both,
            t_min: None,
            t_max: DEFAULT_T_MAX,
            t_points: 60,
            quad_tolerance: QuadratureOptions::default().rel_tol,
            output_path: PathBuf::from("coherence.csv"),
            custom_fractions_path: None,
            threads: 0,
        }
    }
}

pub const KEYS: &[&str] = &[
    "n",
    "cycles",
    "alpha",
    "temperature",
    "cutoff",
    "scheme",
    "t_min",
    "t_max",
    "t_points",
    "quad_tolerance",
    "output_path",
    "custom_fractions_path",
    "threads",
];

fn parse_value<T: FromStr>(field: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| CliError::validation(field, format!("cannot parse `{}`: {e}", value.trim())))
}

impl RunConfig {
    /// Sets one field from its textual value. Unknown keys are reported with `line`.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "n" => self.n = parse_value(key, value)?,
            "cycles" => self.cycles = parse_value(key, value)?,
            "alpha" => self.alpha = parse_value(key, value)?,
            "temperature" => self.temperature = parse_value(key, value)?,
            "cutoff" => self.cutoff = parse_value(key, value)?,
            "scheme" => self.scheme = parse_value(key, value)?,
            "t_min" => self.t_min = Some(parse_value(key, value)?),
            "t_max" => self.t_max = parse_value(key, value)?,
            "t_points" => self.t_points = parse_value(key, value)?,
            "quad_tolerance" => self.quad_tolerance = parse_value(key, value)?,
            "output_path" => self.output_path = PathBuf::from(value.trim()),
            "custom_fractions_path" => self.custom_fractions_path = Some(PathBuf::from(value.trim())),
            "threads" => self.threads = parse_value(key, value)?,
            _ => {
                return Err(CliError::UnknownKey {
                    key: key.to_string(),
                    line,
                })
            }
        }
        Ok(())
    }

    /// Lower end of the grid after applying the default.
    pub fn effective_t_min(&self) -> f64 {
        self.t_min.unwrap_or(self.t_max / self.t_points.max(1) as f64)
    }

    pub fn bath(&self) -> Result<BathSpec> {
        BathSpec::ohmic(self.alpha, self.cutoff, self.temperature).map_err(CliError::from)
    }

    pub fn quadrature(&self) -> QuadratureOptions {
        QuadratureOptions {
            rel_tol: self.quad_tolerance,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bound = |field: &str, reason: String| Err(CliError::validation(field, reason));
        if self.n < 2 {
            return bound("n", format!("must be >= 2, got {}", self.n));
        }
        if self.cycles < 1 {
            return bound("cycles", format!("must be >= 1, got {}", self.cycles));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bound("alpha", format!("must be finite and >= 0, got {}", self.alpha));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return bound(
                "temperature",
                format!("must be finite and > 0, got {}", self.temperature),
            );
        }
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return bound("cutoff", format!("must be finite and > 0, got {}", self.cutoff));
        }
        if self.t_points < 1 {
            return bound("t_points", "must be >= 1, got 0".into());
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return bound("t_max", format!("must be finite and > 0, got {}", self.t_max));
        }
        let t_min = self.effective_t_min();
        if !(t_min.is_finite() && t_min >= 0.0) {
            return bound("t_min", format!("must be finite and >= 0, got {t_min}"));
        }
        if self.t_points > 1 && t_min >= self.t_max {
            return bound(
                "t_min",
                format!("must be < t_max = {} when t_points > 1, got {t_min}", self.t_max),
            );
        }
        if self.t_points == 1 && t_min > self.t_max {
            return bound("t_min", format!("must be <= t_max = {}, got {t_min}", self.t_max));
        }
        if !(self.quad_tolerance > 0.0 && self.quad_tolerance < 1.0) {
            return bound(
                "quad_tolerance",
                format!("must lie in (0, 1), got {}", self.quad_tolerance),
            );
        }
        if self.scheme == SchemeChoice::Custom && self.custom_fractions_path.is_none() {
            return bound("custom_fractions_path", "required when scheme = custom".into());
        }
        Ok(())
    }

    /// Linear grid from `t_min` to `t_max` inclusive.
    pub fn time_grid(&self) -> Vec<f64> {
        let t_min = self.effective_t_min();
        if self.t_points == 1 {
            return vec![t_min];
        }
        let last = self.t_points - 1;
        let step = (self.t_max - t_min) / last as f64;
        (0..self.t_points)
            .map(|k| if k == last { self.t_max } else { t_min + k as f64 * step })
            .collect()
    }
}

/// Applies `key = value` lines to `config`. `#` starts a comment; blank
/// lines are skipped; a repeated key is an error.
pub fn apply_config_text(config: &mut RunConfig, text: &str) -> Result<()> {
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::validation(
                format!("line {}", idx + 1),
                format!("expected `key = value`, got `{line}`"),
            )
        })?;
        let key = key.trim();
        if seen.iter().any(|k| k == key) {
            return Err(CliError::validation(key, format!("set twice (line {})", idx + 1)));
        }
        config.set(key, value, idx + 1)?;
        seen.push(key.to_string());
    }
    Ok(())
}

/// Flag values that take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq, clap::Args)]
pub struct Overrides {
    /// Atom dimension
    #[arg(long)]
    pub n: Option<usize>,
    /// Decoupling cycles N
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Coupling strength
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Bath temperature (frequency units)
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Cutoff frequency; also the upper integration limit
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// pdd, udd, custom or both
    #[arg(long)]
    pub scheme: Option<SchemeChoice>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
    /// Relative quadrature tolerance per exponent
    #[arg(long)]
    pub quad_tolerance: Option<f64>,
    /// CSV destination
    #[arg(long = "output", alias = "out")]
    pub output_path: Option<PathBuf>,
    /// File with one interior pulse fraction per line
    #[arg(long = "custom-fractions")]
    pub custom_fractions_path: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, c: &mut RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = &self.$f { c.$f = v.clone(); } )* };
        }
        take!(
            n,
            cycles,
            alpha,
            temperature,
            cutoff,
            scheme,
            t_max,
            t_points,
            quad_tolerance,
            output_path,
            threads
        );
        if let Some(v) = self.t_min {
            c.t_min = Some(v);
        }
        if let Some(v) = &self.custom_fractions_path {
            c.custom_fractions_path = Some(v.clone());
        }
    }
}

/// Defaults, then the file (if any), then the flags; validated.
pub fn parse_config(file: Option<&Path>, overrides: &Overrides) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        apply_config_text(&mut config, &text)?;
    }
    overrides.apply(&mut config);
    config.validate()?;
    Ok(config)
}
