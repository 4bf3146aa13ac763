//! Quadrature cumulants of a single-mode state after Kerr and phase
//! evolution.

use rayon::prelude::*;
use serde::Serialize;

use gravkerr::generators::evolve_kerr;
use gravkerr::metrology::quadrature_cumulants;

use super::{base_flags, log_slope, single_mode, StateSpec};
use crate::output::{json, Table};
use crate::{CliError, Config, Outcome, Settings, Status};

/// Bound on `|κ₃|, |κ₄|` for a Gaussian state without Kerr evolution.
pub const GAUSSIAN_NULL: f64 = 1e-9;

#[derive(Serialize)]
struct Row {
    chi_q: f64,
    cumulants: Vec<f64>,
}

#[derive(Serialize)]
struct CumulantReport {
    command: &'static str,
    state: String,
    theta: f64,
    chi_c: f64,
    rows: Vec<Row>,
    /// Log-log slope of `|κ₄|` between the smallest and largest nonzero `χ_Q`.
    kappa4_slope: Option<f64>,
    convention_flags: std::collections::BTreeMap<String, String>,
}

pub fn run(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    let spec = StateSpec::from_config(config)?;
    let state = single_mode(&spec, settings.tolerance, "cumulants")?;
    let s = "cumulants";
    let theta = config.number(s, "theta")?.unwrap_or(0.0);
    let chi_c = config.number(s, "chi_c")?.unwrap_or(0.0);
    let chis = config.require_numbers(s, "chi_q")?;

    let rows: Vec<Row> = chis
        .par_iter()
        .map(|&chi| {
            let evolved = evolve_kerr(&state, chi, chi_c);
            Ok(Row {
                chi_q: chi,
                cumulants: quadrature_cumulants(&evolved, theta, 4)?,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let nonzero: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.chi_q != 0.0 && r.cumulants[3] != 0.0)
        .map(|r| (r.chi_q.abs(), r.cumulants[3].abs()))
        .collect();
    let lo = nonzero.iter().copied().min_by(|a, b| a.0.total_cmp(&b.0));
    let hi = nonzero.iter().copied().max_by(|a, b| a.0.total_cmp(&b.0));
    let slope = match (lo, hi) {
        (Some(a), Some(b)) if a.0 != b.0 => Some(log_slope(a, b)),
        _ => None,
    };

    let violations: Vec<f64> = rows
        .iter()
        .filter(|r| r.chi_q == 0.0)
        .flat_map(|r| [r.cumulants[2], r.cumulants[3]])
        .filter(|k| k.abs() > GAUSSIAN_NULL)
        .collect();
    let status = if violations.is_empty() {
        Status::Ok
    } else {
        Status::ToleranceFailure(format!("Gaussian state shows higher cumulants {violations:?}"))
    };

    let mut table = Table::new(&["chi_q", "kappa1", "kappa2", "kappa3", "kappa4"]);
    for r in &rows {
        let mut cells = vec![r.chi_q.into()];
        cells.extend(r.cumulants.iter().map(|&k| k.into()));
        table.push(cells);
    }
    let summary = match slope {
        Some(x) => format!("cumulants: {} rows, kappa4 slope {x:.4}", rows.len()),
        None => format!("cumulants: {} rows", rows.len()),
    };
    let report = CumulantReport {
        command: "cumulants",
        state: spec.descriptor(),
        theta,
        chi_c,
        rows,
        kappa4_slope: slope,
        convention_flags: base_flags(settings),
    };
    Ok(Outcome {
        files: vec![
            (format!("{}_cumulants.json", settings.prefix), json(&report)?),
            (format!("{}_cumulants.csv", settings.prefix), table.render()),
        ],
        status,
        summary,
    })
}
