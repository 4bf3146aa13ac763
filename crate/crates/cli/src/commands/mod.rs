//! One module per subcommand, plus the config readers they share.

pub mod coupling;
pub mod cumulants;
pub mod mz;
pub mod power;
pub mod qfim;
pub mod thg;

use std::collections::BTreeMap;

use gravkerr::coupling::{BeamConfiguration, CavityGeometry, CouplingMode, MediatorSpec};
use gravkerr::fock::truncation::{required_dim_coherent, required_dim_squeezed, required_dim_tmsv};
use gravkerr::fock::{SingleModeState, TwoModeState};
use gravkerr::C64;

use crate::{CliError, Config, Settings};

/// Input state named in a `[state]` section.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum { dim: usize },
    Coherent { alpha: C64, dim: Option<usize> },
    SqueezedVacuum { r: f64, theta: f64, dim: Option<usize> },
    Tmsv { r: f64, phi: f64, dim: Option<usize> },
}

pub enum BuiltState {
    Single(SingleModeState),
    Pair(TwoModeState),
}

fn reject_keys(config: &Config, section: &str, kind: &str, keys: &[&str]) -> Result<(), CliError> {
    for key in keys {
        if let Some(line) = config.line(section, key) {
            return Err(CliError::Config(format!(
                "line {line}: {section}.{key} does not apply to kind '{kind}'"
            )));
        }
    }
    Ok(())
}

impl StateSpec {
    pub fn from_config(config: &Config) -> Result<Self, CliError> {
        let kind = config.require_text("state", "kind")?;
        let dim = config.integer("state", "dim")?;
        let spec = match kind {
            "vacuum" => {
                reject_keys(config, "state", kind, &["alpha_re", "alpha_im", "r", "theta", "phi"])?;
                StateSpec::Vacuum { dim: dim.unwrap_or(2) }
            }
            "coherent" => {
                reject_keys(config, "state", kind, &["r", "theta", "phi"])?;
                let re = config.require_number("state", "alpha_re")?;
                let im = config.number("state", "alpha_im")?.unwrap_or(0.0);
                StateSpec::Coherent {
                    alpha: C64::new(re, im),
                    dim,
                }
            }
            "squeezed-vacuum" => {
                reject_keys(config, "state", kind, &["alpha_re", "alpha_im", "phi"])?;
                StateSpec::SqueezedVacuum {
                    r: config.require_number("state", "r")?,
                    theta: config.number("state", "theta")?.unwrap_or(0.0),
                    dim,
                }
            }
            "tmsv" => {
                reject_keys(config, "state", kind, &["alpha_re", "alpha_im", "theta"])?;
                StateSpec::Tmsv {
                    r: config.require_number("state", "r")?,
                    phi: config.number("state", "phi")?.unwrap_or(0.0),
                    dim,
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "line {}: unknown state kind '{other}' (expected vacuum, coherent, squeezed-vacuum or tmsv)",
                    config.line("state", "kind").unwrap_or(0)
                )))
            }
        };
        Ok(spec)
    }

    pub fn build(&self, tolerance: f64) -> Result<BuiltState, CliError> {
        Ok(match *self {
            StateSpec::Vacuum { dim } => BuiltState::Single(SingleModeState::vacuum(dim)?),
            StateSpec::Coherent { alpha, dim } => {
                let dim = match dim {
                    Some(d) => d,
                    None => required_dim_coherent(alpha.norm_sqr(), tolerance)?,
                };
                BuiltState::Single(SingleModeState::coherent(alpha, dim, tolerance)?)
            }
            StateSpec::SqueezedVacuum { r, theta, dim } => {
                let dim = match dim {
                    Some(d) => d,
                    None => required_dim_squeezed(r, tolerance)?,
                };
                BuiltState::Single(SingleModeState::squeezed_vacuum(r, theta, dim, tolerance)?)
            }
            StateSpec::Tmsv { r, phi, dim } => {
                let dim = match dim {
                    Some(d) => d,
                    None => required_dim_tmsv(r, tolerance)?,
                };
                BuiltState::Pair(TwoModeState::tmsv(r, phi, dim, tolerance)?)
            }
        })
    }

    pub fn descriptor(&self) -> String {
        match self {
            StateSpec::Vacuum { .. } => "vacuum".into(),
            StateSpec::Coherent { alpha, .. } => format!("coherent alpha={}{:+}i", alpha.re, alpha.im),
            StateSpec::SqueezedVacuum { r, theta, .. } => format!("squeezed-vacuum r={r} theta={theta}"),
            StateSpec::Tmsv { r, phi, .. } => format!("tmsv r={r} phi={phi}"),
        }
    }
}

pub fn single_mode(spec: &StateSpec, tolerance: f64, command: &str) -> Result<SingleModeState, CliError> {
    match spec.build(tolerance)? {
        BuiltState::Single(s) => Ok(s),
        BuiltState::Pair(_) => Err(CliError::Config(format!("{command} needs a single-mode state"))),
    }
}

/// Geometry and coupling options from `[geometry]`.
pub struct GeometrySpec {
    pub geometry: CavityGeometry,
    pub mediator: MediatorSpec,
    pub configuration: BeamConfiguration,
    pub mode: CouplingMode,
}

impl GeometrySpec {
    pub fn from_config(config: &Config) -> Result<Self, CliError> {
        let s = "geometry";
        let mut geometry = CavityGeometry::new(
            config.require_number(s, "arm_length")?,
            config.require_number(s, "separation")?,
            config.require_number(s, "finesse")?,
            config.require_number(s, "wavelength")?,
        )?;
        if let Some(sigma) = config.number(s, "beam_width")? {
            geometry = geometry.with_beam_width(sigma)?;
        }
        let spin = config.integer(s, "mediator_spin")?.unwrap_or(2);
        let mediator = u32::try_from(spin)
            .map_err(|_| CliError::Config(format!("mediator spin {spin} out of range")))
            .and_then(|sp| MediatorSpec::from_spin(sp).map_err(CliError::from))?;
        let configuration = match config.text(s, "configuration")?.unwrap_or("counter-propagating") {
            "counter-propagating" => BeamConfiguration::CounterPropagating,
            "co-propagating" => BeamConfiguration::CoPropagating,
            "standing-wave" => BeamConfiguration::StandingWave,
            other => {
                return Err(CliError::Config(format!(
                    "unknown configuration '{other}' (expected counter-propagating, co-propagating or standing-wave)"
                )))
            }
        };
        let mode = match config.text(s, "coupling_mode")?.unwrap_or("asymptotic") {
            "asymptotic" => CouplingMode::Asymptotic,
            "exact" => CouplingMode::Exact,
            other => {
                return Err(CliError::Config(format!(
                    "unknown coupling_mode '{other}' (expected asymptotic or exact)"
                )))
            }
        };
        Ok(GeometrySpec {
            geometry,
            mediator,
            configuration,
            mode,
        })
    }
}

pub fn mediator_label(m: MediatorSpec) -> &'static str {
    match m {
        MediatorSpec::Spin0 => "spin-0",
        MediatorSpec::Spin2 => "spin-2",
    }
}

pub fn configuration_label(c: BeamConfiguration) -> &'static str {
    match c {
        BeamConfiguration::CounterPropagating => "counter-propagating",
        BeamConfiguration::CoPropagating => "co-propagating",
        BeamConfiguration::StandingWave => "standing-wave",
    }
}

pub fn mode_label(m: CouplingMode) -> &'static str {
    match m {
        CouplingMode::Asymptotic => "asymptotic",
        CouplingMode::Exact => "exact",
    }
}

/// Flags recorded in every report.
pub fn base_flags(settings: &Settings) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("convention".to_string(), settings.convention.label().to_string()),
        ("tau".to_string(), "1".to_string()),
        ("truncation_tolerance".to_string(), format!("{:e}", settings.tolerance)),
    ])
}

/// Two-point log-log slope.
pub fn log_slope(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.1.ln() - a.1.ln()) / (b.0.ln() - a.0.ln())
}
