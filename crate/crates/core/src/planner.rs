//! Conversions between laser power, integration time and the metrological
//! bound, and the feasibility check that ties them together.
//!
//! Conventions: circulating power is `ℱ` times pump power, and the photon
//! number in the cavity follows `P_circ = N ħ ω₀ c / (2L)`.

use serde::Serialize;

use crate::constants::{C, G, HBAR};
use crate::coupling::{chi_q, mediator_coupling, CavityGeometry, MediatorSpec};
use crate::{Error, Result};

/// Largest `|P*/P_bound - 1|` accepted by the closure check.
pub const CLOSURE_TOLERANCE: f64 = 0.03;

/// `τ = 2ℱL/c` (s).
pub fn interrogation_time(geometry: &CavityGeometry) -> f64 {
    geometry.interrogation_time()
}

/// `M = T/τ`, not floored.
pub fn shots(total_time: f64, geometry: &CavityGeometry) -> Result<f64> {
    if !(total_time > 0.0 && total_time.is_finite()) {
        return Err(Error::Domain(format!("total time {total_time} s must be positive")));
    }
    Ok(total_time / interrogation_time(geometry))
}

/// Warning when the run is shorter than one interrogation.
pub fn shot_warning(total_time: f64, geometry: &CavityGeometry) -> Option<String> {
    let tau = interrogation_time(geometry);
    (total_time < tau).then(|| format!("total time {total_time} s is shorter than one interrogation ({tau} s); M < 1"))
}

/// `N = 2L P / (ħ ω₀ c)`.
pub fn photon_number(circulating_power: f64, geometry: &CavityGeometry) -> Result<f64> {
    if !(circulating_power > 0.0 && circulating_power.is_finite()) {
        return Err(Error::Domain(format!("circulating power {circulating_power} W must be positive")));
    }
    Ok(2.0 * geometry.arm_length * circulating_power / (HBAR * geometry.angular_frequency() * C))
}

/// Inverse of [`photon_number`].
pub fn circulating_power(photon_number: f64, geometry: &CavityGeometry) -> f64 {
    photon_number * HBAR * geometry.angular_frequency() * C / (2.0 * geometry.arm_length)
}

/// Circulating power at which the squeezed-vacuum nuisance bound meets the
/// Kerr phase for large `N`:
/// `P ≳ (c³/16) (c ħ² / (12 G² ℱ L³ T ln²(L/w)))^{1/4}`. Independent of the
/// wavelength.
pub fn circulating_power_bound(geometry: &CavityGeometry, total_time: f64) -> Result<f64> {
    if !(total_time > 0.0 && total_time.is_finite()) {
        return Err(Error::Domain(format!("total time {total_time} s must be positive")));
    }
    let (l, w) = (geometry.arm_length, geometry.separation);
    let log = (l / w).ln();
    let inner = C * HBAR * HBAR / (12.0 * G * G * geometry.finesse * l.powi(3) * total_time * log * log);
    Ok(C.powi(3) / 16.0 * inner.powf(0.25))
}

/// Squeezed-vacuum nuisance bound `1/(√(96M) N(N+1))`.
pub fn squeezed_bound(photon_number: f64, shots: f64) -> f64 {
    1.0 / ((96.0 * shots).sqrt() * photon_number * (photon_number + 1.0))
}

/// A concrete experiment: cavity, total integration time and one power.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub geometry: CavityGeometry,
    /// Total integration time `T` (s).
    pub total_time: f64,
    pub pump_power: Option<f64>,
    pub circulating_power: Option<f64>,
    pub mediator: MediatorSpec,
}

impl Scenario {
    pub fn new(
        label: impl Into<String>,
        geometry: CavityGeometry,
        total_time: f64,
        pump_power: Option<f64>,
        circulating_power: Option<f64>,
    ) -> Result<Self> {
        if !(total_time > 0.0 && total_time.is_finite()) {
            return Err(Error::Domain(format!("total time {total_time} s must be positive")));
        }
        if pump_power.is_some() && circulating_power.is_some() {
            return Err(Error::Domain("give either pump or circulating power, not both".into()));
        }
        for p in pump_power.iter().chain(&circulating_power) {
            if !(*p > 0.0 && p.is_finite()) {
                return Err(Error::Domain(format!("power {p} W must be positive")));
            }
        }
        Ok(Scenario {
            label: label.into(),
            geometry,
            total_time,
            pump_power,
            circulating_power,
            mediator: MediatorSpec::Spin2,
        })
    }

    pub fn with_mediator(mut self, mediator: MediatorSpec) -> Self {
        self.mediator = mediator;
        self
    }

    /// Circulating power, derived from the pump when needed.
    pub fn circulating(&self) -> Result<f64> {
        match (self.circulating_power, self.pump_power) {
            (Some(p), _) => Ok(p),
            (None, Some(p)) => Ok(self.geometry.finesse * p),
            (None, None) => Err(Error::IncompleteScenario(format!(
                "scenario '{}' has neither pump nor circulating power",
                self.label
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub label: String,
    pub interrogation_time: f64,
    pub shots: f64,
    pub circulating_power: f64,
    pub pump_power: f64,
    pub photon_number: f64,
    /// Kerr phase per shot including the mediator factor (rad).
    pub chi_q_achieved: f64,
    /// Nuisance bound at this power (rad).
    pub chi_q_required: f64,
    /// `chi_q_achieved / chi_q_required`.
    pub margin: f64,
    /// Power at which the two meet; absent when the phase vanishes.
    pub marginal_power: Option<f64>,
    pub power_bound: f64,
    /// `marginal_power / power_bound - 1`.
    pub closure_residual: Option<f64>,
    pub closure_ok: bool,
    pub feasible: bool,
    /// Circulating intensity `P/σ²` (W/m²) when a beam width is set.
    pub intensity: Option<f64>,
    pub warnings: Vec<String>,
}

/// Evaluates a scenario: phase, shots, photon number, bound, the marginal
/// power solving `χ_Q = 1/(√(96M) N(N+1))` exactly in `N`, and its closure
/// against [`circulating_power_bound`].
pub fn feasibility_check(scenario: &Scenario) -> Result<FeasibilityReport> {
    let g = &scenario.geometry;
    let p_circ = scenario.circulating()?;
    let m = shots(scenario.total_time, g)?;
    let n = photon_number(p_circ, g)?;
    let achieved = chi_q(g) * mediator_coupling(scenario.mediator);
    let required = squeezed_bound(n, m);
    let power_bound = circulating_power_bound(g, scenario.total_time)?;

    let marginal_power = (achieved > 0.0).then(|| {
        // N(N+1) = k, solved without cancellation
        let k = 1.0 / (achieved * (96.0 * m).sqrt());
        let n_star = 2.0 * k / (1.0 + (1.0 + 4.0 * k).sqrt());
        circulating_power(n_star, g)
    });
    let closure_residual = marginal_power.map(|p| p / power_bound - 1.0);
    let mut warnings = g.warnings();
    warnings.extend(shot_warning(scenario.total_time, g));
    Ok(FeasibilityReport {
        label: scenario.label.clone(),
        interrogation_time: interrogation_time(g),
        shots: m,
        circulating_power: p_circ,
        pump_power: p_circ / g.finesse,
        photon_number: n,
        chi_q_achieved: achieved,
        chi_q_required: required,
        margin: achieved / required,
        marginal_power,
        power_bound,
        closure_residual,
        closure_ok: closure_residual.is_some_and(|r| r.abs() <= CLOSURE_TOLERANCE),
        feasible: achieved >= required,
        intensity: g.beam_width.map(|s| p_circ / (s * s)),
        warnings,
    })
}
