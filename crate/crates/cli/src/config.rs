//! Run configuration from a `key = value` file with command-line overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use quasipin_core::basis::{BasisParams, RankId};
use quasipin_core::optimize::NelderMeadOptions;

use crate::error::{CliError, CliResult};

pub const Z_MIN: u32 = 3;
pub const Z_MAX: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Config(format!("unknown format '{other}' (expected json|csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub rank: RankId,
    pub z: u32,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub optimize: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub quadrature_check: bool,
    pub z_min: u32,
    pub z_max: u32,
    pub f_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let nm = NelderMeadOptions::default();
        Self {
            rank: RankId::R6b,
            z: 3,
            alpha: None,
            gamma: None,
            optimize: false,
            out: None,
            format: Format::Json,
            quadrature_check: false,
            z_min: Z_MIN,
            z_max: Z_MAX,
            f_tolerance: nm.f_tolerance,
            max_iterations: nm.max_iterations,
        }
    }
}

/// Values given on the command line; `None` leaves the file/default value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub rank: Option<RankId>,
    pub z: Option<u32>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub optimize: bool,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub quadrature_check: bool,
    pub z_min: Option<u32>,
    pub z_max: Option<u32>,
    pub f_tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("line {line}: cannot parse '{value}' for key '{key}'")))
}

fn parse_bool(key: &str, value: &str, line: usize) -> CliResult<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(CliError::Config(format!("line {line}: '{value}' is not a boolean for key '{key}'"))),
    }
}

impl RunConfig {
    /// Applies `key = value` lines to the defaults. Keys use the flag
    /// spelling; `_` and `-` are interchangeable.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(CliError::Config(format!("line {line}: expected 'key = value', got '{content}'")));
            };
            let key = key.trim().to_ascii_lowercase().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "rank" => cfg.rank = RankId::from_str(value).map_err(|e| CliError::Config(format!("line {line}: {e}")))?,
                "z" => cfg.z = parse_value(&key, value, line)?,
                "alpha" => cfg.alpha = Some(parse_value(&key, value, line)?),
                "gamma" => cfg.gamma = Some(parse_value(&key, value, line)?),
                "optimize" => cfg.optimize = parse_bool(&key, value, line)?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = value.parse()?,
                "quadrature-check" => cfg.quadrature_check = parse_bool(&key, value, line)?,
                "z-min" => cfg.z_min = parse_value(&key, value, line)?,
                "z-max" => cfg.z_max = parse_value(&key, value, line)?,
                "f-tolerance" => cfg.f_tolerance = parse_value(&key, value, line)?,
                "max-iterations" => cfg.max_iterations = parse_value(&key, value, line)?,
                _ => return Err(CliError::Config(format!("line {line}: unknown key '{key}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// File (if any) then flags.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let mut cfg = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(overrides);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(r) = o.rank {
            self.rank = r;
        }
        if let Some(z) = o.z {
            self.z = z;
        }
        if o.alpha.is_some() {
            self.alpha = o.alpha;
        }
        if o.gamma.is_some() {
            self.gamma = o.gamma;
        }
        self.optimize |= o.optimize;
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        self.quadrature_check |= o.quadrature_check;
        if let Some(z) = o.z_min {
            self.z_min = z;
        }
        if let Some(z) = o.z_max {
            self.z_max = z;
        }
        if let Some(t) = o.f_tolerance {
            self.f_tolerance = t;
        }
        if let Some(n) = o.max_iterations {
            self.max_iterations = n;
        }
    }

    pub fn nelder_mead(&self) -> CliResult<NelderMeadOptions> {
        if !(self.f_tolerance.is_finite() && self.f_tolerance > 0.0) {
            return Err(CliError::Config(format!("f-tolerance must be positive, got {}", self.f_tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(CliError::Config("max-iterations must be positive".into()));
        }
        Ok(NelderMeadOptions { f_tolerance: self.f_tolerance, max_iterations: self.max_iterations, ..Default::default() })
    }

    /// Fixed parameters for a single solve, or `None` when optimizing.
    pub fn solve_params(&self) -> CliResult<Option<BasisParams>> {
        if self.z == 0 {
            return Err(CliError::Config("z must be positive".into()));
        }
        for (name, v) in [("alpha", self.alpha), ("gamma", self.gamma)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(CliError::Config(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if self.optimize {
            self.nelder_mead()?;
            return Ok(None);
        }
        match (self.alpha, self.gamma) {
            (Some(a), Some(g)) => Ok(Some(BasisParams::new(self.rank, a, g, self.z)?)),
            (None, None) => Err(CliError::Config("give both --alpha and --gamma, or --optimize".into())),
            _ => Err(CliError::Config("--alpha and --gamma must be given together".into())),
        }
    }

    pub fn validate_zscan(&self) -> CliResult<()> {
        if !(Z_MIN..=Z_MAX).contains(&self.z_min) || !(Z_MIN..=Z_MAX).contains(&self.z_max) || self.z_min > self.z_max {
            return Err(CliError::Config(format!(
                "z range {}..{} must satisfy {Z_MIN} <= z-min <= z-max <= {Z_MAX}",
                self.z_min, self.z_max
            )));
        }
        if self.rank.size() != 6 {
            return Err(CliError::Config(format!("zscan tracks the rank-6 constraint; rank {} given", self.rank)));
        }
        self.nelder_mead()?;
        Ok(())
    }
}
