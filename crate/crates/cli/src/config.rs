//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use pblab_core::contour::{make_grid, GridScheme};
use pblab_core::models::{CubicParams, DerivativeMode, KratzerParams};

use crate::suites::CHECK_NAMES;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub c: f64,
    pub q: i32,
    /// Replaces `alpha` and `q` by `|gamma|` and `sign(gamma)`.
    pub gamma_override: Option<f64>,
    pub cubic_epsilon: f64,
    pub grid_extent: f64,
    /// Node count of both the Gauss-Legendre and the uniform grid.
    pub grid_points: usize,
    pub trunc_n: usize,
    /// Highest level of the biorthonormality check.
    pub biortho_max_level: usize,
    pub derivative_mode: DerivativeMode,
    /// Per-check tolerance overrides, from `tolerance.<check>` keys.
    pub tolerances: BTreeMap<String, f64>,
    pub output_format: OutputFormat,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 1.3,
            c: 1.0,
            q: 1,
            gamma_override: None,
            cubic_epsilon: 1.0,
            grid_extent: 12.0,
            grid_points: 1200,
            trunc_n: 10,
            biortho_max_level: 12,
            derivative_mode: DerivativeMode::Analytic,
            tolerances: BTreeMap::new(),
            output_format: OutputFormat::Json,
            output_dir: None,
        }
    }
}

impl RunConfig {
    /// Model parameters, honouring `gamma_override`.
    pub fn params(&self) -> Result<KratzerParams, ConfigError> {
        let p = match self.gamma_override {
            Some(g) => KratzerParams::from_gamma(g, self.c),
            None => KratzerParams::new(self.alpha, self.c, self.q),
        };
        p.map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = self.params()?;
        p.check_normalizable()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        CubicParams::new(self.cubic_epsilon).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.grid_points < 64 {
            return Err(ConfigError::Invalid(format!(
                "grid_points must be at least 64, got {}",
                self.grid_points
            )));
        }
        if self.trunc_n < 3 {
            return Err(ConfigError::Invalid(format!(
                "trunc_n must be at least 3, got {}",
                self.trunc_n
            )));
        }
        if self.biortho_max_level < 1 {
            return Err(ConfigError::Invalid("biortho_max_level must be at least 1".into()));
        }
        for scheme in [GridScheme::GaussLegendre, GridScheme::Uniform] {
            make_grid(self.grid_extent, self.grid_points, scheme)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        for (k, &v) in &self.tolerances {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::Invalid(format!("tolerance.{k} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn tolerance_for(&self, check: &str) -> Option<f64> {
        self.tolerances.get(check).copied()
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen = std::collections::BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: "empty key or value".into(),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::Syntax {
                line,
                message: format!("duplicate key '{key}'"),
            });
        }
        let real = || {
            value.parse::<f64>().map_err(|_| ConfigError::Syntax {
                line,
                message: format!("'{key}' expects a number, got '{value}'"),
            })
        };
        let int = || {
            value.parse::<usize>().map_err(|_| ConfigError::Syntax {
                line,
                message: format!("'{key}' expects a non-negative integer, got '{value}'"),
            })
        };
        match key {
            "alpha" => cfg.alpha = real()?,
            "c" => cfg.c = real()?,
            "q" => {
                cfg.q = match value {
                    "1" | "+1" => 1,
                    "-1" => -1,
                    _ => {
                        return Err(ConfigError::Syntax {
                            line,
                            message: format!("q must be +1 or -1, got '{value}'"),
                        })
                    }
                }
            }
            "gamma_override" => cfg.gamma_override = Some(real()?),
            "cubic_epsilon" => cfg.cubic_epsilon = real()?,
            "grid_extent" => cfg.grid_extent = real()?,
            "grid_points" => cfg.grid_points = int()?,
            "trunc_n" => cfg.trunc_n = int()?,
            "biortho_max_level" => cfg.biortho_max_level = int()?,
            "derivative_mode" => {
                cfg.derivative_mode = value.parse().map_err(|_| ConfigError::Syntax {
                    line,
                    message: format!("derivative_mode must be 'analytic' or 'fd', got '{value}'"),
                })?
            }
            "output_format" => {
                cfg.output_format = match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    _ => {
                        return Err(ConfigError::Syntax {
                            line,
                            message: format!("output_format must be 'json' or 'csv', got '{value}'"),
                        })
                    }
                }
            }
            "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
            _ => match key.strip_prefix("tolerance.") {
                Some(check) if CHECK_NAMES.contains(&check) => {
                    cfg.tolerances.insert(check.to_string(), real()?);
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            },
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
