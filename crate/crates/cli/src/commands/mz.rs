//! Photon-counting interferometer on two-mode squeezed vacuum: outcome
//! tables, Hellinger and closed-form CFI, QFI and the selection-rule audit.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use gravkerr::fock::truncation::required_dim_tmsv;
use gravkerr::fock::{OutcomeDistribution, TwoModeState};
use gravkerr::generators::{beamsplitter_conjugation_check, Beamsplitter, Convention};
use gravkerr::metrology::{
    analytic_mz_cfi, large_n_limit, mz_cfi_estimate, mz_outcome_distribution, mz_qfi, MzAngles,
    DEFAULT_CFI_STEP,
};

use super::base_flags;
use crate::output::{json, Comparison, Table};
use crate::{CliError, Config, Outcome, Settings, Status};

/// Allowed Hellinger-vs-closed-form CFI mismatch for steps `χ ≤ 1e-3`.
pub const CFI_AGREEMENT: f64 = 1e-2;
/// Allowed beamsplitter conjugation residual at dimension 16.
pub const CONJUGATION_TOLERANCE: f64 = 1e-8;

#[derive(Serialize)]
struct Selection {
    /// Largest single probability with odd `|n₁ - n₂|`.
    max_probability_odd_difference: f64,
    /// Total probability at `|n₁ - n₂| = 0..=4`.
    mass_by_difference: [f64; 5],
}

#[derive(Serialize)]
struct PointReport {
    r: f64,
    mean_photons_per_mode: f64,
    dim: usize,
    cfi_hellinger: f64,
    cfi_hellinger_coarse: f64,
    cfi_hellinger_fine: f64,
    clamped_probabilities: usize,
    /// `4⟨G₋²⟩` in the half convention, the scale the Hellinger estimate
    /// measures.
    cfi_analytic_half: f64,
    hellinger_vs_analytic: f64,
    /// `4⟨G₋²⟩` and `4 Var(G)` in the configured convention.
    cfi_analytic: f64,
    qfi: f64,
    qfi_over_cfi: f64,
    cfi_within_qfi: bool,
    selection: Selection,
}

#[derive(Serialize)]
struct RatioPoint {
    mean_photons_per_mode: f64,
    dim: usize,
    cfi: f64,
    qfi: f64,
    qfi_over_cfi: f64,
}

#[derive(Serialize)]
struct LargeN {
    points: Vec<RatioPoint>,
    /// Extrapolated limits; the references are quoted values shown for
    /// comparison only.
    qfi_over_cfi: Option<Comparison>,
    cfi_coefficient: Option<Comparison>,
    qfi_coefficient: Option<Comparison>,
    note: &'static str,
}

#[derive(Serialize)]
struct Angles {
    chi_q: f64,
    chi_c_sym: f64,
    chi_c_asym: f64,
}

#[derive(Serialize)]
struct MzReport {
    command: &'static str,
    angles: Angles,
    points: Vec<PointReport>,
    beamsplitter_conjugation_residual: f64,
    large_n: Option<LargeN>,
    convention_flags: BTreeMap<String, String>,
}

fn table(d: &OutcomeDistribution) -> String {
    let mut t = Table::new(&["n1", "n2", "p"]);
    for ((a, b), p) in d.iter().filter(|(_, p)| *p != 0.0) {
        t.push(vec![a.into(), b.into(), p.into()]);
    }
    t.render()
}

struct PointRun {
    report: PointReport,
    d0: String,
    dchi: String,
}

fn tmsv(r: f64, dim: Option<usize>, tol: f64) -> Result<TwoModeState, CliError> {
    let dim = match dim {
        Some(d) => d,
        None => required_dim_tmsv(r, tol)?,
    };
    Ok(TwoModeState::tmsv(r, 0.0, dim, tol)?)
}

fn point(r: f64, dim: Option<usize>, angles: MzAngles, settings: &Settings) -> Result<PointRun, CliError> {
    let psi = tmsv(r, dim, settings.tolerance)?;
    let d0 = mz_outcome_distribution(&psi, MzAngles::default())?;
    let dchi = mz_outcome_distribution(&psi, angles)?;
    let est = mz_cfi_estimate(&psi, angles.chi_q)?;
    let half = analytic_mz_cfi(&psi, Convention::Half)?;
    let cfi = analytic_mz_cfi(&psi, settings.convention)?;
    let qfi = mz_qfi(&psi, settings.convention)?;
    let qfi_half = mz_qfi(&psi, Convention::Half)?;
    let slack = 1e-9 * qfi_half.abs().max(1e-300);
    let mut mass = [0.0; 5];
    for (k, m) in mass.iter_mut().enumerate() {
        *m = dchi.mass_at_difference(k);
    }
    Ok(PointRun {
        report: PointReport {
            r,
            mean_photons_per_mode: r.sinh().powi(2),
            dim: psi.dims().0,
            cfi_hellinger: est.extrapolated,
            cfi_hellinger_coarse: est.coarse,
            cfi_hellinger_fine: est.fine,
            clamped_probabilities: est.clamped,
            cfi_analytic_half: half,
            hellinger_vs_analytic: if half > 0.0 { est.extrapolated / half - 1.0 } else { 0.0 },
            cfi_analytic: cfi,
            qfi,
            qfi_over_cfi: qfi / cfi,
            cfi_within_qfi: est.extrapolated <= qfi_half + slack && cfi <= qfi + slack,
            selection: Selection {
                max_probability_odd_difference: dchi.max_where(|a, b| a.abs_diff(b) % 2 == 1),
                mass_by_difference: mass,
            },
        },
        d0: table(&d0),
        dchi: table(&dchi),
    })
}

fn ratio_point(n: f64, settings: &Settings) -> Result<RatioPoint, CliError> {
    let psi = tmsv(n.sqrt().asinh(), None, settings.tolerance)?;
    let cfi = analytic_mz_cfi(&psi, settings.convention)?;
    let qfi = mz_qfi(&psi, settings.convention)?;
    Ok(RatioPoint {
        mean_photons_per_mode: n,
        dim: psi.dims().0,
        cfi,
        qfi,
        qfi_over_cfi: qfi / cfi,
    })
}

fn limit(points: &[RatioPoint], f: impl Fn(&RatioPoint) -> f64, reference: Option<f64>) -> Result<Option<Comparison>, CliError> {
    if points.len() < 4 {
        return Ok(None);
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|p| (p.mean_photons_per_mode, f(p))).collect();
    Ok(Some(Comparison::new(large_n_limit(&pts)?, reference)))
}

fn large_n(config: &Config, settings: &Settings) -> Result<Option<LargeN>, CliError> {
    let Some(ns) = config.numbers("mz", "ratio_mean_photons")? else {
        return Ok(None);
    };
    if let Some(bad) = ns.iter().find(|n| !(**n > 0.0)) {
        return Err(CliError::Config(format!("mz.ratio_mean_photons must be positive, got {bad}")));
    }
    let points: Vec<RatioPoint> = ns.par_iter().map(|&n| ratio_point(n, settings)).collect::<Result<_, _>>()?;
    let quartic = |x: f64, p: &RatioPoint| x / p.mean_photons_per_mode.powi(4);
    Ok(Some(LargeN {
        qfi_over_cfi: limit(&points, |p| p.qfi_over_cfi, config.number("reference", "cfi_ratio")?)?,
        cfi_coefficient: limit(&points, |p| quartic(p.cfi, p), config.number("reference", "f_c_coefficient")?)?,
        qfi_coefficient: limit(&points, |p| quartic(p.qfi, p), config.number("reference", "f_q_coefficient")?)?,
        points,
        note: "limits from a fit of a + b/N + c/N^2 in the configured convention; references are not asserted",
    }))
}

pub fn run(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    let s = "mz";
    let rs = config.require_numbers(s, "r")?;
    if let Some(bad) = rs.iter().find(|r| !(**r > 0.0)) {
        return Err(CliError::Config(format!("mz.r values must be positive, got {bad}")));
    }
    let chi = config.number(s, "chi")?.unwrap_or(DEFAULT_CFI_STEP);
    if !(chi > 0.0) {
        return Err(CliError::Config(format!("mz.chi = {chi} must be positive")));
    }
    let angles = MzAngles {
        chi_q: chi,
        chi_c_sym: config.number(s, "chi_c_sym")?.unwrap_or(0.0),
        chi_c_asym: config.number(s, "chi_c_asym")?.unwrap_or(0.0),
    };
    let dim = config.integer(s, "dim")?;

    let runs: Vec<PointRun> = rs
        .par_iter()
        .map(|&r| point(r, dim, angles, settings))
        .collect::<Result<_, _>>()?;
    let residual = beamsplitter_conjugation_check(16, Beamsplitter::Symmetric)?;
    let large_n = large_n(config, settings)?;

    let mut failures = Vec::new();
    if residual > CONJUGATION_TOLERANCE {
        failures.push(format!("beamsplitter conjugation residual {residual:e}"));
    }
    let mut files = Vec::new();
    let mut points = Vec::new();
    for (i, run) in runs.into_iter().enumerate() {
        let p = &run.report;
        if !p.cfi_within_qfi {
            failures.push(format!("r = {}: CFI exceeds QFI", p.r));
        }
        if chi <= 1e-3 && p.hellinger_vs_analytic.abs() > CFI_AGREEMENT {
            failures.push(format!("r = {}: Hellinger CFI off by {:e}", p.r, p.hellinger_vs_analytic));
        }
        files.push((format!("{}_mz_{i}_chi0.csv", settings.prefix), run.d0));
        files.push((format!("{}_mz_{i}_chi.csv", settings.prefix), run.dchi));
        points.push(run.report);
    }
    let mut flags = base_flags(settings);
    flags.insert("beamsplitter".into(), "symmetric".into());
    flags.insert("hellinger_steps".into(), "chi, chi/2, richardson".into());
    let report = MzReport {
        command: "mz",
        angles: Angles {
            chi_q: angles.chi_q,
            chi_c_sym: angles.chi_c_sym,
            chi_c_asym: angles.chi_c_asym,
        },
        points,
        beamsplitter_conjugation_residual: residual,
        large_n,
        convention_flags: flags,
    };
    let summary = format!(
        "mz: {} points, worst Hellinger mismatch {:e}",
        report.points.len(),
        report.points.iter().map(|p| p.hellinger_vs_analytic.abs()).fold(0.0, f64::max)
    );
    files.insert(0, (format!("{}_mz.json", settings.prefix), json(&report)?));
    let status = if failures.is_empty() {
        Status::Ok
    } else {
        Status::ToleranceFailure(failures.join("; "))
    };
    Ok(Outcome { files, status, summary })
}
