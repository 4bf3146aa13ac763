//! Gravitational self-interaction of light circulating in a rectangular
//! ring cavity.
//!
//! The two long arms carry counter-propagating beams of length `L` a
//! distance `w` apart. Treating the transverse profile as a line, the
//! interaction energy is set by
//! `I(L, w) = ∫₀ᴸ∫₀ᴸ dz dz' / √((z - z')² + w²)`. For `L ≫ w`,
//! `I ≈ 2L ln(L/w)`, which gives the per-shot Kerr phase
//! `χ_Q = 32 G ℱ ħ ω₀² ln(L/w) / c⁵`.

use std::collections::BinaryHeap;

use crate::constants::{angular_frequency, C, G, HBAR};
use crate::{Error, Result};

/// Ratio `w/λ` below which the line-source picture is flagged as doubtful.
pub const MIN_SEPARATION_OVER_WAVELENGTH: f64 = 100.0;

/// Smallest panel budget accepted by [`geometric_factor_quadrature`].
pub const MIN_PANELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    /// Long-arm length `L` (m).
    pub arm_length: f64,
    /// Separation `w` of the long arms (m).
    pub separation: f64,
    pub finesse: f64,
    /// Laser wavelength λ (m).
    pub wavelength: f64,
    /// Beam width σ (m), used only for intensity diagnostics.
    pub beam_width: Option<f64>,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("{name} = {x} must be positive and finite")));
    }
    Ok(())
}

impl CavityGeometry {
    pub fn new(arm_length: f64, separation: f64, finesse: f64, wavelength: f64) -> Result<Self> {
        positive("arm length", arm_length)?;
        positive("separation", separation)?;
        positive("wavelength", wavelength)?;
        if !(finesse >= 1.0 && finesse.is_finite()) {
            return Err(Error::Domain(format!("finesse {finesse} must be >= 1")));
        }
        if separation >= arm_length {
            return Err(Error::Domain(format!(
                "separation {separation} m must be below the arm length {arm_length} m"
            )));
        }
        if wavelength >= separation {
            return Err(Error::Domain(format!(
                "wavelength {wavelength} m must be below the separation {separation} m"
            )));
        }
        Ok(CavityGeometry {
            arm_length,
            separation,
            finesse,
            wavelength,
            beam_width: None,
        })
    }

    pub fn with_beam_width(mut self, sigma: f64) -> Result<Self> {
        positive("beam width", sigma)?;
        self.beam_width = Some(sigma);
        Ok(self)
    }

    /// `ω₀ = 2πc/λ`.
    pub fn angular_frequency(&self) -> f64 {
        angular_frequency(self.wavelength)
    }

    /// `τ = 2ℱL/c`.
    pub fn interrogation_time(&self) -> f64 {
        2.0 * self.finesse * self.arm_length / C
    }

    /// Human-readable validity warnings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let ratio = self.separation / self.wavelength;
        if ratio < MIN_SEPARATION_OVER_WAVELENGTH {
            out.push(format!(
                "separation is only {ratio:.3} wavelengths; the line-source approximation needs w >> λ"
            ));
        }
        out
    }
}

/// Closed form of `I(L, w)`, written as
/// `2L asinh(L/w) - 2L²/(w + √(L² + w²))` to avoid cancellation.
pub fn geometric_factor_exact(l: f64, w: f64) -> Result<f64> {
    positive("L", l)?;
    positive("w", w)?;
    Ok(2.0 * l * (l / w).asinh() - 2.0 * l * l / (w + l.hypot(w)))
}

/// `2L ln(L/w)`, the `L ≫ w` limit. Within 5% of the exact value for
/// `L/w >= 10³`; more than 10% off at `L/w = 10`.
pub fn geometric_factor_asymptotic(l: f64, w: f64) -> Result<f64> {
    positive("L", l)?;
    positive("w", w)?;
    Ok(2.0 * l * (l / w).ln())
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982,
    0.269_266_719_309_996_4,
    0.295_524_224_714_752_9,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

/// 21-point Kronrod estimate and its difference from the embedded 10-point
/// Gauss rule.
fn gk21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Relative accuracy targeted by [`geometric_factor_quadrature`].
pub const QUADRATURE_TOLERANCE: f64 = 1e-13;

/// Adaptive Gauss-Kronrod evaluation of `I(L, w)`: the inner integral is
/// done analytically (`asinh((L - z)/w) + asinh(z/w)`) and the outer one by
/// bisecting the panel with the largest error estimate, up to `panels`
/// panels.
pub fn geometric_factor_quadrature(l: f64, w: f64, panels: usize) -> Result<f64> {
    positive("L", l)?;
    positive("w", w)?;
    if panels < MIN_PANELS {
        return Err(Error::Domain(format!("panel budget {panels} below the minimum {MIN_PANELS}")));
    }
    let inner = |z: f64| ((l - z) / w).asinh() + (z / w).asinh();
    adaptive_gk21(&inner, 0.0, l, panels)
}

fn adaptive_gk21(inner: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let (value, error) = gk21(inner, a, b);
    heap.push(Panel { a, b, value, error });
    let (mut total, mut total_error) = (value, error);
    loop {
        if total_error <= QUADRATURE_TOLERANCE * total.abs() {
            return Ok(total);
        }
        if heap.len() >= panels {
            return Err(Error::Accuracy {
                panels: heap.len(),
                estimate: total,
                error: total_error,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk21(inner, worst.a, mid);
        let (rv, re) = gk21(inner, mid, worst.b);
        total += lv + rv - worst.value;
        total_error += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
        // resum to keep the running totals free of drift
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_error = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// Which form of the geometric factor feeds the coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingMode {
    /// `ln(L/w)` with the `(L/(L+w))²` normalization factor set to 1.
    #[default]
    Asymptotic,
    /// Full closed-form integral with the `1/(L+w)²` normalization.
    Exact,
}

/// Prefactor of `a†a†aa` in the interaction Hamiltonian (J). Asymptotic
/// mode: `-(16G/L)(ħω₀/c²)² ln(L/w)`; exact mode:
/// `-8G(ħω₀/c²)² I(L, w)/(L + w)²`.
pub fn interaction_hamiltonian_coefficient(geometry: &CavityGeometry, mode: CouplingMode) -> f64 {
    let (l, w) = (geometry.arm_length, geometry.separation);
    let mass = HBAR * geometry.angular_frequency() / (C * C);
    match mode {
        CouplingMode::Asymptotic => -16.0 * G / l * mass * mass * (l / w).ln(),
        CouplingMode::Exact => {
            let i = geometric_factor_exact(l, w).expect("geometry is validated");
            -8.0 * G * mass * mass * i / ((l + w) * (l + w))
        }
    }
}

/// Per-shot quartic phase `χ_Q = 32 G ℱ ħ ω₀² ln(L/w) / c⁵` (rad).
pub fn chi_q(geometry: &CavityGeometry) -> f64 {
    let omega = geometry.angular_frequency();
    32.0 * G * geometry.finesse * HBAR * omega * omega / C.powi(5)
        * (geometry.arm_length / geometry.separation).ln()
}

/// `|coefficient| τ / ħ` for either coupling mode; equals [`chi_q`] in the
/// asymptotic mode.
pub fn chi_q_with_mode(geometry: &CavityGeometry, mode: CouplingMode) -> f64 {
    interaction_hamiltonian_coefficient(geometry, mode).abs() * geometry.interrogation_time() / HBAR
}

/// Spin of the field mediating the interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MediatorSpec {
    Spin0,
    Spin2,
}

impl MediatorSpec {
    pub fn from_spin(spin: u32) -> Result<Self> {
        match spin {
            0 => Ok(MediatorSpec::Spin0),
            2 => Ok(MediatorSpec::Spin2),
            other => Err(Error::Domain(format!("mediator spin {other} not supported (expected 0 or 2)"))),
        }
    }
}

/// Multiplier on the coupling: light's stress-energy is traceless, so a
/// scalar mediator coupling to the trace sees nothing.
pub fn mediator_coupling(spec: MediatorSpec) -> f64 {
    match spec {
        MediatorSpec::Spin0 => 0.0,
        MediatorSpec::Spin2 => 1.0,
    }
}

/// Arrangement of the two interacting beams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamConfiguration {
    CounterPropagating,
    CoPropagating,
    StandingWave,
}

/// Interaction between co-propagating beams of a freely travelling wave:
/// identically zero.
pub fn co_propagating_interaction() -> f64 {
    0.0
}

/// Interaction coefficient (J) for a beam configuration.
pub fn configuration_coefficient(
    geometry: &CavityGeometry,
    configuration: BeamConfiguration,
    mode: CouplingMode,
) -> Result<f64> {
    match configuration {
        BeamConfiguration::CounterPropagating => Ok(interaction_hamiltonian_coefficient(geometry, mode)),
        BeamConfiguration::CoPropagating => Ok(co_propagating_interaction()),
        BeamConfiguration::StandingWave => Err(Error::Unsupported("standing-wave configuration is not modeled".into())),
    }
}
