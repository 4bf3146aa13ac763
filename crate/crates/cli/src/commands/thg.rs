//! Third-harmonic channel: QFI of `a³b† + a†³b` over pump photon number and
//! the harmonic population created by a short evolution.

use rayon::prelude::*;
use serde::Serialize;

use gravkerr::fock::truncation::{required_dim_coherent, required_dim_squeezed};
use gravkerr::fock::{SingleModeState, TwoModeState};
use gravkerr::generators::{evolve_two_mode, thg_generator};
use gravkerr::metrology::{scaling_exponent, thg_qfi, ScalingFit};
use gravkerr::C64;

use super::{base_flags, log_slope};
use crate::output::{json, Table};
use crate::{CliError, Config, Outcome, Settings, Status};

const DEFAULT_PHOTONS: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];
const DEFAULT_CHI: [f64; 2] = [1e-4, 1e-3];
/// Harmonic levels kept during evolution.
const HARMONIC_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pump {
    Coherent,
    SqueezedVacuum,
}

fn pump_state(kind: Pump, n: f64, tol: f64) -> Result<SingleModeState, CliError> {
    Ok(match kind {
        Pump::Coherent => SingleModeState::coherent(C64::new(n.sqrt(), 0.0), required_dim_coherent(n, tol)?, tol)?,
        Pump::SqueezedVacuum => {
            let r = n.sqrt().asinh();
            SingleModeState::squeezed_vacuum(r, 0.0, required_dim_squeezed(r, tol)?, tol)?
        }
    })
}

#[derive(Serialize)]
struct QfiPoint {
    mean_photons: f64,
    dim: usize,
    qfi: f64,
    qfi_over_n3: f64,
    bound: f64,
}

#[derive(Serialize)]
struct EvolutionPoint {
    chi: f64,
    harmonic_population: f64,
}

#[derive(Serialize)]
struct ThgReport {
    command: &'static str,
    pump: &'static str,
    points: Vec<QfiPoint>,
    bound_fit: Option<ScalingFit>,
    evolution_mean_photons: f64,
    evolution: Vec<EvolutionPoint>,
    /// Log-log slope of the harmonic population in `χ`.
    population_slope: Option<f64>,
    convention_flags: std::collections::BTreeMap<String, String>,
}

fn harmonic_population(pump: &SingleModeState, chi: f64) -> Result<f64, CliError> {
    let padded = pump.embed(pump.dim() + 3)?;
    let state = TwoModeState::product(&padded, &SingleModeState::vacuum(HARMONIC_DIM)?);
    let g = thg_generator(padded.dim(), HARMONIC_DIM)?;
    let out = evolve_two_mode(&state, &g, chi)?;
    let (da, db) = out.dims();
    Ok((0..da)
        .flat_map(|a| (1..db).map(move |b| (a, b)))
        .map(|(a, b)| b as f64 * out.amplitude(a, b).norm_sqr())
        .sum())
}

pub fn run(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    let s = "thg";
    let kind = match config.require_text(s, "pump")? {
        "coherent" => Pump::Coherent,
        "squeezed-vacuum" => Pump::SqueezedVacuum,
        other => {
            return Err(CliError::Config(format!(
                "unknown pump '{other}' (expected coherent or squeezed-vacuum)"
            )))
        }
    };
    let photons = config.numbers(s, "mean_photons")?.map(<[f64]>::to_vec).unwrap_or(DEFAULT_PHOTONS.to_vec());
    let chis = config.numbers(s, "evolve_chi")?.map(<[f64]>::to_vec).unwrap_or(DEFAULT_CHI.to_vec());
    let n_evolve = config.number(s, "evolve_mean_photons")?.unwrap_or(4.0);
    for &x in photons.iter().chain(&chis).chain(std::iter::once(&n_evolve)) {
        if !(x > 0.0) {
            return Err(CliError::Config(format!("thg photon numbers and phases must be positive, got {x}")));
        }
    }
    let tol = settings.tolerance;

    let points: Vec<QfiPoint> = photons
        .par_iter()
        .map(|&n| {
            let pump = pump_state(kind, n, tol)?;
            let f = thg_qfi(&pump)?;
            Ok(QfiPoint {
                mean_photons: n,
                dim: pump.dim(),
                qfi: f,
                qfi_over_n3: f / n.powi(3),
                bound: 1.0 / f.sqrt(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let bound_fit = if points.len() >= 4 {
        Some(scaling_exponent(&points.iter().map(|p| (p.mean_photons, p.bound)).collect::<Vec<_>>())?)
    } else {
        None
    };

    let pump = pump_state(kind, n_evolve, tol)?;
    let evolution: Vec<EvolutionPoint> = chis
        .par_iter()
        .map(|&chi| {
            Ok(EvolutionPoint {
                chi,
                harmonic_population: harmonic_population(&pump, chi)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let slope = match evolution.as_slice() {
        [first, .., last] if first.chi != last.chi && first.harmonic_population > 0.0 => Some(log_slope(
            (first.chi, first.harmonic_population),
            (last.chi, last.harmonic_population),
        )),
        _ => None,
    };

    let mut table = Table::new(&["N", "F_Q", "bound", "dim"]);
    for p in &points {
        table.push(vec![p.mean_photons.into(), p.qfi.into(), p.bound.into(), p.dim.into()]);
    }
    let mut evo = Table::new(&["chi", "harmonic_population"]);
    for e in &evolution {
        evo.push(vec![e.chi.into(), e.harmonic_population.into()]);
    }
    let summary = match &bound_fit {
        Some(f) => format!("thg: bound exponent {:.4}", f.exponent),
        None => "thg: fewer than 4 points, no fit".to_string(),
    };
    let report = ThgReport {
        command: "thg",
        pump: match kind {
            Pump::Coherent => "coherent",
            Pump::SqueezedVacuum => "squeezed-vacuum",
        },
        points,
        bound_fit,
        evolution_mean_photons: n_evolve,
        evolution,
        population_slope: slope,
        convention_flags: base_flags(settings),
    };
    Ok(Outcome {
        files: vec![
            (format!("{}_thg.json", settings.prefix), json(&report)?),
            (format!("{}_thg.csv", settings.prefix), table.render()),
            (format!("{}_thg_evolution.csv", settings.prefix), evo.render()),
        ],
        status: Status::Ok,
        summary,
    })
}
