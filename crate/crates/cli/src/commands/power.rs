//! Power needed to resolve the Kerr phase, its closure against the
//! phase-vs-bound crossing, scaling laws and an optional feasibility check.

use serde::Serialize;

use gravkerr::coupling::CavityGeometry;
use gravkerr::planner::{circulating_power_bound, feasibility_check, shots, FeasibilityReport, Scenario};

use super::{mediator_label, GeometrySpec};
use crate::output::{json, Comparison, Table};
use crate::{CliError, Config, Outcome, Settings, Status};

/// Two-point scaling ratios must match their exponents to this level.
pub const SCALING_TOLERANCE: f64 = 1e-10;

#[derive(Serialize)]
struct ScalingLaw {
    law: &'static str,
    ratio: f64,
    expected: f64,
}

#[derive(Serialize)]
struct Requirement {
    circulating_power: Comparison,
    pump_power: Comparison,
    interrogation_time: f64,
    shots: f64,
    photon_number: f64,
    chi_q: f64,
    bound_at_requirement: f64,
    marginal_power: Option<f64>,
    closure_residual: Option<f64>,
    closure_ok: bool,
    /// `P/σ²` at the required circulating power (W/m²).
    intensity: Option<Comparison>,
}

#[derive(Serialize)]
struct PowerReport {
    command: &'static str,
    label: String,
    mediator: &'static str,
    total_time: f64,
    requirement: Requirement,
    scaling_laws: Vec<ScalingLaw>,
    /// Present when the scenario names a power.
    feasibility: Option<FeasibilityReport>,
    warnings: Vec<String>,
}

fn scaling_laws(g: &CavityGeometry, t: f64) -> Result<Vec<ScalingLaw>, CliError> {
    let base = circulating_power_bound(g, t)?;
    let k = 16.0;
    let finer = CavityGeometry {
        finesse: g.finesse * k,
        ..*g
    };
    let longer = CavityGeometry {
        arm_length: g.arm_length * k,
        separation: g.separation * k,
        ..*g
    };
    Ok(vec![
        ScalingLaw {
            law: "time^-1/4",
            ratio: base / circulating_power_bound(g, k * t)?,
            expected: k.powf(0.25),
        },
        ScalingLaw {
            law: "finesse^-1/4",
            ratio: base / circulating_power_bound(&finer, t)?,
            expected: k.powf(0.25),
        },
        ScalingLaw {
            law: "length^-3/4 at fixed L/w",
            ratio: base / circulating_power_bound(&longer, t)?,
            expected: k.powf(0.75),
        },
    ])
}

pub fn run(config: &Config, settings: &Settings) -> Result<Outcome, CliError> {
    let spec = GeometrySpec::from_config(config)?;
    let g = spec.geometry;
    let s = "scenario";
    let label = config.text(s, "label")?.unwrap_or(&settings.prefix).to_string();
    let t = config.require_number(s, "total_time")?;
    let pump = config.number(s, "pump_power")?;
    let circ = config.number(s, "circulating_power")?;
    let scenario = Scenario::new(label.clone(), g, t, pump, circ)?.with_mediator(spec.mediator);

    let bound = circulating_power_bound(&g, t)?;
    let at_bound = feasibility_check(&Scenario {
        pump_power: None,
        circulating_power: Some(bound),
        ..scenario.clone()
    })?;
    let feasibility = if pump.is_some() || circ.is_some() {
        Some(feasibility_check(&scenario)?)
    } else {
        None
    };
    let laws = scaling_laws(&g, t)?;

    let sweep: Vec<f64> = match config.numbers(s, "time_sweep")? {
        Some(v) => v.to_vec(),
        None => [1.0 / 16.0, 0.25, 1.0, 4.0, 16.0].iter().map(|k| k * t).collect(),
    };
    let mut table = Table::new(&["total_time", "shots", "circulating_power_bound", "pump_power_bound"]);
    for &ti in &sweep {
        let p = circulating_power_bound(&g, ti)?;
        table.push(vec![ti.into(), shots(ti, &g)?.into(), p.into(), (p / g.finesse).into()]);
    }

    let mut warnings = at_bound.warnings.clone();
    if let Some(f) = &feasibility {
        warnings.extend(f.warnings.iter().filter(|w| !warnings.contains(w)).cloned().collect::<Vec<_>>());
    }
    let requirement = Requirement {
        circulating_power: Comparison::new(bound, config.number("reference", "circulating_power")?),
        pump_power: Comparison::new(bound / g.finesse, config.number("reference", "pump_power")?),
        interrogation_time: at_bound.interrogation_time,
        shots: at_bound.shots,
        photon_number: at_bound.photon_number,
        chi_q: at_bound.chi_q_achieved,
        bound_at_requirement: at_bound.chi_q_required,
        marginal_power: at_bound.marginal_power,
        closure_residual: at_bound.closure_residual,
        closure_ok: at_bound.closure_ok,
        intensity: match at_bound.intensity {
            Some(i) => Some(Comparison::new(i, config.number("reference", "intensity")?)),
            None => None,
        },
    };

    let status = if at_bound.chi_q_achieved == 0.0 {
        Status::Infeasible(format!("{} mediator produces no Kerr phase", mediator_label(spec.mediator)))
    } else if !at_bound.closure_ok {
        Status::ToleranceFailure(format!("closure residual {:?} above tolerance", at_bound.closure_residual))
    } else if let Some(law) = laws.iter().find(|l| (l.ratio / l.expected - 1.0).abs() > SCALING_TOLERANCE) {
        Status::ToleranceFailure(format!("{} ratio {} vs {}", law.law, law.ratio, law.expected))
    } else if feasibility.as_ref().is_some_and(|f| !f.feasible) {
        let f = feasibility.as_ref().expect("checked");
        Status::Infeasible(format!("margin {:e} below 1", f.margin))
    } else {
        Status::Ok
    };
    let summary = format!(
        "power: required circulating {bound:e} W, pump {:e} W",
        bound / g.finesse
    );
    let report = PowerReport {
        command: "power",
        label,
        mediator: mediator_label(spec.mediator),
        total_time: t,
        requirement,
        scaling_laws: laws,
        feasibility,
        warnings,
    };
    Ok(Outcome {
        files: vec![
            (format!("{}_power.json", settings.prefix), json(&report)?),
            (format!("{}_power.csv", settings.prefix), table.render()),
        ],
        status,
        summary,
    })
}
