//! Fisher matrix of `(n(n-1), n)` on single-mode states, alone or swept over
//! the photon number with closed-form bounds alongside.

use rayon::prelude::*;
use serde::Serialize;

use gravkerr::fock::truncation::{required_dim_coherent, required_dim_squeezed};
use gravkerr::fock::SingleModeState;
use gravkerr::generators::GeneratorSet;
use gravkerr::metrology::{qfim, scaling_exponent, single_parameter_qcrb, MetrologyReport, ScalingFit};
use gravkerr::C64;

use super::{base_flags, single_mode, StateSpec};
use crate::output::{json, Table};
use crate::{CliError, Config, Outcome, Settings, Status};

/// Accepted `bound_numeric / bound_analytic` band.
pub const BOUND_RATIO_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepKind {
    SqueezedVacuum,
    Coherent,
}

#[derive(Serialize)]
struct SweepPoint {
    mean_photons: f64,
    dim: usize,
    report: MetrologyReport,
    bound_single_parameter: Option<f64>,
    bound_analytic: f64,
}

#[derive(Serialize)]
struct Fits {
    nuisance: Option<ScalingFit>,
    single_parameter: Option<ScalingFit>,
}

#[derive(Serialize)]
struct SweepReport {
    command: &'static str,
    state_kind: &'static str,
    shots: f64,
    points: Vec<SweepPoint>,
    fits: Fits,
    max_bound_deviation: f64,
    bound_deviation_tolerance: f64,
}

fn labels() -> [String; 2] {
    ["n(n-1)".to_string(), "n".to_string()]
}

fn sweep_point(kind: SweepKind, n: f64, shots: f64, settings: &Settings) -> Result<SweepPoint, CliError> {
    let tol = settings.tolerance;
    let (state, analytic, descriptor) = match kind {
        SweepKind::SqueezedVacuum => {
            let r = n.sqrt().asinh();
            let dim = required_dim_squeezed(r, tol)?;
            let s = SingleModeState::squeezed_vacuum(r, 0.0, dim, tol)?;
            let bound = 1.0 / ((96.0 * shots).sqrt() * n * (n + 1.0));
            (s, bound, format!("squeezed-vacuum r={r}"))
        }
        SweepKind::Coherent => {
            let dim = required_dim_coherent(n, tol)?;
            let s = SingleModeState::coherent(C64::new(n.sqrt(), 0.0), dim, tol)?;
            let bound = 1.0 / ((8.0 * shots).sqrt() * n);
            (s, bound, format!("coherent alpha={}", n.sqrt()))
        }
    };
    let dim = state.dim();
    let f = qfim(&state, &GeneratorSet::kerr(dim)?, 1.0)?;
    let report = MetrologyReport::new(&f, shots, labels(), descriptor, base_flags(settings))?;
    Ok(SweepPoint {
        mean_photons: n,
        dim,
        bound_single_parameter: single_parameter_qcrb(f[(0, 0)], shots)?.value(),
        report,
        bound_analytic: analytic,
    })
}

fn fit(points: &[SweepPoint], pick: impl Fn(&SweepPoint) -> Option<f64>) -> Result<Option<ScalingFit>, CliError> {
    let pts: Option<Vec<(f64, f64)>> = points.iter().map(|p| pick(p).map(|y| (p.mean_photons, y))).collect();
    match pts {
        Some(pts) if pts.len() >= 4 => Ok(Some(scaling_exponent(&pts)?)),
        _ => Ok(None),
    }
}

fn run_sweep(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    let kind = match config.require_text("sweep", "kind")? {
        "squeezed-vacuum" => SweepKind::SqueezedVacuum,
        "coherent" => SweepKind::Coherent,
        other => {
            return Err(CliError::Config(format!(
                "unknown sweep kind '{other}' (expected squeezed-vacuum or coherent)"
            )))
        }
    };
    let photons: Vec<f64> = match (config.numbers("sweep", "r")?, config.numbers("sweep", "mean_photons")?) {
        (Some(_), Some(_)) => return Err(CliError::Config("give sweep.r or sweep.mean_photons, not both".into())),
        (None, None) => return Err(CliError::Config("sweep needs r or mean_photons".into())),
        (Some(_), None) if kind == SweepKind::Coherent => {
            return Err(CliError::Config("a coherent sweep takes mean_photons, not r".into()))
        }
        (Some(rs), None) => rs.iter().map(|r| r.sinh().powi(2)).collect(),
        (None, Some(ns)) => ns.to_vec(),
    };
    if let Some(bad) = photons.iter().find(|n| !(**n > 0.0)) {
        return Err(CliError::Config(format!("sweep photon numbers must be positive, got {bad}")));
    }
    let shots = config.number("sweep", "shots")?.unwrap_or(1.0);
    if !(shots > 0.0) {
        return Err(CliError::Config(format!("sweep.shots = {shots} must be positive")));
    }

    let points: Vec<SweepPoint> = photons
        .par_iter()
        .map(|&n| sweep_point(kind, n, shots, settings))
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(&["N", "F_QQ", "F_QC", "F_CC", "bound_numeric", "bound_analytic"]);
    let mut worst: f64 = 0.0;
    for p in &points {
        let numeric = p.report.qcrb_nuisance.value().unwrap_or(f64::INFINITY);
        worst = worst.max((numeric / p.bound_analytic - 1.0).abs());
        let q = &p.report.qfim;
        table.push(vec![
            p.mean_photons.into(),
            q[0].into(),
            q[1].into(),
            q[3].into(),
            numeric.into(),
            p.bound_analytic.into(),
        ]);
    }
    let report = SweepReport {
        command: "qfim",
        state_kind: match kind {
            SweepKind::SqueezedVacuum => "squeezed-vacuum",
            SweepKind::Coherent => "coherent",
        },
        shots,
        fits: Fits {
            nuisance: fit(&points, |p| p.report.qcrb_nuisance.value())?,
            single_parameter: fit(&points, |p| p.bound_single_parameter)?,
        },
        points,
        max_bound_deviation: worst,
        bound_deviation_tolerance: BOUND_RATIO_TOLERANCE,
    };
    let status = if worst <= BOUND_RATIO_TOLERANCE {
        Status::Ok
    } else {
        Status::ToleranceFailure(format!(
            "numeric bound deviates from the closed form by {worst:e} (> {BOUND_RATIO_TOLERANCE:e})"
        ))
    };
    let summary = match (&report.fits.nuisance, &report.fits.single_parameter) {
        (Some(a), Some(b)) => format!(
            "qfim sweep: {} points, exponent {:.4} (nuisance) / {:.4} (single parameter)",
            report.points.len(),
            a.exponent,
            b.exponent
        ),
        _ => format!("qfim sweep: {} points", report.points.len()),
    };
    Ok(Outcome {
        files: vec![
            (format!("{}_qfim.json", settings.prefix), json(&report)?),
            (format!("{}_qfim.csv", settings.prefix), table.render()),
        ],
        status,
        summary,
    })
}

fn run_single(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    let spec = StateSpec::from_config(config)?;
    let state = single_mode(&spec, settings.tolerance, "qfim")?;
    let f = qfim(&state, &GeneratorSet::kerr(state.dim())?, 1.0)?;
    let report = MetrologyReport::new(&f, 1.0, labels(), spec.descriptor(), base_flags(settings))?;
    report.validate()?;
    let summary = match report.qcrb_nuisance.value() {
        Some(b) => format!("qfim: bound {b:e}"),
        None => "qfim: singular, indistinguishable".to_string(),
    };
    Ok(Outcome {
        files: vec![(format!("{}_qfim.json", settings.prefix), report.to_json())],
        status: Status::Ok,
        summary,
    })
}

pub fn run(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    match (config.has_section("sweep"), config.has_section("state")) {
        (true, true) => Err(CliError::Config("qfim takes [sweep] or [state], not both".into())),
        (true, false) => run_sweep(config, settings),
        (false, true) => run_single(config, settings),
        (false, false) => Err(CliError::Config("qfim needs a [sweep] or [state] section".into())),
    }
}
