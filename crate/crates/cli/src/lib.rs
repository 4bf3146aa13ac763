//! Config-driven front end for the `gravkerr` library.
//!
//! Each [`Command`] reads a [`Config`], runs the library computations and
//! returns an [`Outcome`]: the files to write plus a status that maps to the
//! process exit code. Nothing here touches the filesystem except
//! [`Outcome::write`] and [`load_config`].

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;
pub mod units;

use std::fs;
use std::path::{Path, PathBuf};

use gravkerr::generators::Convention;

pub use config::Config;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical tolerance failure: {0}")]
    Tolerance(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<gravkerr::Error> for CliError {
    fn from(e: gravkerr::Error) -> Self {
        use gravkerr::Error::*;
        match e {
            InvalidDimension(_) | Domain(_) | Unsupported(_) | IncompleteScenario(_) | Precondition(_)
            | Parse { .. } => CliError::Config(e.to_string()),
            _ => CliError::Tolerance(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Qfim,
    Mz,
    Coupling,
    Power,
    Thg,
    Cumulants,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Qfim => "qfim",
            Command::Mz => "mz",
            Command::Coupling => "coupling",
            Command::Power => "power",
            Command::Thg => "thg",
            Command::Cumulants => "cumulants",
        }
    }
}

/// Command-line overrides applied on top of the config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub convention: Option<Convention>,
}

/// Settings shared by all commands after merging config and flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub tolerance: f64,
    pub convention: Convention,
    pub prefix: String,
}

impl Settings {
    pub fn resolve(config: &Config, overrides: &Overrides, default_prefix: &str) -> Result<Self, CliError> {
        let tolerance = match overrides.tolerance {
            Some(t) => t,
            None => config
                .number("numerics", "tolerance")?
                .unwrap_or(gravkerr::constants::DEFAULT_TRUNCATION_TOLERANCE),
        };
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(CliError::Config(format!("tolerance {tolerance} must lie in (0, 1)")));
        }
        let convention = match overrides.convention {
            Some(c) => c,
            None => match config.text("numerics", "convention")? {
                Some(s) => s.parse().map_err(|e: gravkerr::Error| CliError::Config(e.to_string()))?,
                None => Convention::default(),
            },
        };
        let prefix = config.text("output", "prefix")?.unwrap_or(default_prefix).to_string();
        if !prefix.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(CliError::Config(format!(
                "output prefix '{prefix}' may only contain letters, digits, '-' and '_'"
            )));
        }
        Ok(Settings {
            tolerance,
            convention,
            prefix,
        })
    }
}

/// How a run ended once its outputs were produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// A numerical cross-check missed its tolerance.
    ToleranceFailure(String),
    /// The scenario cannot reach the required sensitivity.
    Infeasible(String),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ToleranceFailure(_) => 3,
            Status::Infeasible(_) => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    /// File name and contents, in write order.
    pub files: Vec<(String, String)>,
    pub status: Status,
    /// One-line human summary for stderr.
    pub summary: String,
}

impl Outcome {
    pub fn file(&self, suffix: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n.ends_with(suffix)).map(|(_, c)| c.as_str())
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        self.files
            .iter()
            .map(|(name, content)| {
                let path = dir.join(name);
                fs::write(&path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                Ok(path)
            })
            .collect()
    }
}

/// Reads a config from a file, a named preset, or both (file values are
/// not merged: exactly one source must be given).
pub fn load_config(path: Option<&Path>, preset: Option<&str>) -> Result<(Config, String), CliError> {
    match (path, preset) {
        (Some(_), Some(_)) => Err(CliError::Config("give a config file or --preset, not both".into())),
        (None, None) => Err(CliError::Config("no config: give a file or --preset <name>".into())),
        (None, Some(name)) => {
            let text = presets::get(name).ok_or_else(|| {
                CliError::Config(format!("unknown preset '{name}' (known: {})", presets::names().join(", ")))
            })?;
            Ok((Config::parse(text)?, name.to_string()))
        }
        (Some(p), None) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
            let stem: String = stem
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
                .collect();
            Ok((Config::parse(&text)?, stem))
        }
    }
}

pub fn run(command: Command, config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    match command {
        Command::Qfim => commands::qfim::run(config, settings),
        Command::Mz => commands::mz::run(config, settings),
        Command::Coupling => commands::coupling::run(config, settings),
        Command::Power => commands::power::run(config, settings),
        Command::Thg => commands::thg::run(config, settings),
        Command::Cumulants => commands::cumulants::run(config, settings),
    }
}
