use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub const MIN_PRECISION: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("level {0} is too small (need l >= 2)")]
    Level(u64),
    #[error("precision {0} is too small (need N >= {MIN_PRECISION})")]
    Precision(usize),
    #[error("n-max must be positive")]
    NMax,
    #[error("no levels given")]
    NoLevels,
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("{0}")]
    Other(String),
}

/// Verification suites, listed in the order they run.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dims,
    Relations,
    Pd,
    Composition,
    Euclid,
    Theorem,
    Gamma0,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Dims,
        Suite::Relations,
        Suite::Pd,
        Suite::Composition,
        Suite::Euclid,
        Suite::Theorem,
        Suite::Gamma0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dims => "dims",
            Suite::Relations => "relations",
            Suite::Pd => "pd",
            Suite::Composition => "composition",
            Suite::Euclid => "euclid",
            Suite::Theorem => "theorem",
            Suite::Gamma0 => "gamma0",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

/// `all` or a comma-separated list of suite names.
pub fn parse_suites(s: &str) -> Result<BTreeSet<Suite>, ConfigError> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
        } else {
            out.insert(part.parse()?);
        }
    }
    if out.is_empty() {
        return Err(ConfigError::UnknownSuite(s.to_string()));
    }
    Ok(out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(ConfigError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub levels: Vec<u64>,
    pub precision: Option<usize>,
    pub n_max: Option<usize>,
    pub format: Format,
    pub suites: BTreeSet<Suite>,
}

impl RunConfig {
    pub fn new(levels: Vec<u64>) -> Self {
        Self {
            levels,
            precision: None,
            n_max: None,
            format: Format::Json,
            suites: Suite::ALL.into_iter().collect(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.levels.is_empty() {
            return Err(ConfigError::NoLevels);
        }
        if let Some(&l) = self.levels.iter().find(|&&l| l < 2) {
            return Err(ConfigError::Level(l));
        }
        check_precision(self.precision)?;
        if self.n_max == Some(0) {
            return Err(ConfigError::NMax);
        }
        Ok(())
    }

    pub fn precision_for(&self, level: u64) -> usize {
        self.precision
            .unwrap_or_else(|| wronskian_core::eisenstein::default_precision(level))
    }

    pub fn n_max_for(&self, level: u64) -> usize {
        self.n_max.unwrap_or_else(|| self.precision_for(level))
    }
}

pub fn check_precision(p: Option<usize>) -> Result<(), ConfigError> {
    match p {
        Some(p) if p < MIN_PRECISION => Err(ConfigError::Precision(p)),
        _ => Ok(()),
    }
}
