//! Per-shot Kerr phase of a cavity and the arm-arm integral over a grid of
//! aspect ratios.

use serde::Serialize;

use gravkerr::coupling::{
    chi_q_with_mode, configuration_coefficient, geometric_factor_asymptotic, geometric_factor_exact,
    geometric_factor_quadrature, mediator_coupling, CouplingMode,
};

use super::{configuration_label, mediator_label, mode_label, GeometrySpec};
use crate::output::{json, Comparison, Table};
use crate::{CliError, Config, Outcome, Settings, Status};

/// Required agreement between quadrature and closed form.
pub const QUADRATURE_AGREEMENT: f64 = 1e-10;
pub const DEFAULT_PANELS: usize = 4096;

/// `L/w ∈ {1, 10, ..., 10⁶}`.
pub fn default_grid() -> Vec<f64> {
    (0..=6).map(|k| 10f64.powi(k)).collect()
}

#[derive(Serialize)]
struct GeometryEcho {
    arm_length: f64,
    separation: f64,
    finesse: f64,
    wavelength: f64,
    beam_width: Option<f64>,
}

#[derive(Serialize)]
struct Factors {
    exact: f64,
    asymptotic: f64,
    quadrature: f64,
}

#[derive(Serialize)]
struct CouplingReport {
    command: &'static str,
    geometry: GeometryEcho,
    mediator: &'static str,
    configuration: &'static str,
    coupling_mode: &'static str,
    angular_frequency: f64,
    interrogation_time: f64,
    geometric_factor: Factors,
    /// Coefficient of `a†a†aa` (J) after mediator and configuration.
    hamiltonian_coefficient: f64,
    /// Per-shot phase (rad) in the configured mode.
    chi_q: Comparison,
    chi_q_asymptotic: f64,
    chi_q_exact: f64,
    max_quadrature_deviation: f64,
    warnings: Vec<String>,
}

pub fn run(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    let spec = GeometrySpec::from_config(config)?;
    let g = spec.geometry;
    let panels = config.integer("geometry", "quadrature_panels")?.unwrap_or(DEFAULT_PANELS);
    let grid = match config.numbers("geometry", "grid_l_over_w")? {
        Some(v) => v.to_vec(),
        None => default_grid(),
    };
    if let Some(bad) = grid.iter().find(|x| !(**x > 0.0)) {
        return Err(CliError::Config(format!("grid_l_over_w values must be positive, got {bad}")));
    }

    // mediator and configuration multiply the counter-propagating result
    let factor = mediator_coupling(spec.mediator);
    let coefficient = configuration_coefficient(&g, spec.configuration, spec.mode)? * factor;
    let scale = |mode: CouplingMode| {
        if coefficient == 0.0 {
            0.0
        } else {
            chi_q_with_mode(&g, mode) * factor
        }
    };
    let chi = scale(spec.mode);

    let w = g.separation;
    let mut table = Table::new(&[
        "l_over_w",
        "exact",
        "asymptotic",
        "quadrature",
        "asymptotic_rel_error",
        "quadrature_rel_error",
    ]);
    let mut worst: f64 = 0.0;
    for &ratio in &grid {
        let l = ratio * w;
        let exact = geometric_factor_exact(l, w)?;
        let asym = geometric_factor_asymptotic(l, w)?;
        let quad = geometric_factor_quadrature(l, w, panels)?;
        let qerr = quad / exact - 1.0;
        worst = worst.max(qerr.abs());
        table.push(vec![
            ratio.into(),
            exact.into(),
            asym.into(),
            quad.into(),
            (asym / exact - 1.0).into(),
            qerr.into(),
        ]);
    }

    let (l, w) = (g.arm_length, g.separation);
    let report = CouplingReport {
        command: "coupling",
        geometry: GeometryEcho {
            arm_length: l,
            separation: w,
            finesse: g.finesse,
            wavelength: g.wavelength,
            beam_width: g.beam_width,
        },
        mediator: mediator_label(spec.mediator),
        configuration: configuration_label(spec.configuration),
        coupling_mode: mode_label(spec.mode),
        angular_frequency: g.angular_frequency(),
        interrogation_time: g.interrogation_time(),
        geometric_factor: Factors {
            exact: geometric_factor_exact(l, w)?,
            asymptotic: geometric_factor_asymptotic(l, w)?,
            quadrature: geometric_factor_quadrature(l, w, panels)?,
        },
        hamiltonian_coefficient: coefficient,
        chi_q: Comparison::new(chi, config.number("reference", "chi_q")?),
        chi_q_asymptotic: scale(CouplingMode::Asymptotic),
        chi_q_exact: scale(CouplingMode::Exact),
        max_quadrature_deviation: worst,
        warnings: g.warnings(),
    };
    let status = if worst <= QUADRATURE_AGREEMENT {
        Status::Ok
    } else {
        Status::ToleranceFailure(format!("quadrature deviates from the closed form by {worst:e}"))
    };
    Ok(Outcome {
        files: vec![
            (format!("{}_coupling.json", settings.prefix), json(&report)?),
            (format!("{}_coupling.csv", settings.prefix), table.render()),
        ],
        status,
        summary: format!("coupling: chi_q = {chi:e} rad"),
    })
}
