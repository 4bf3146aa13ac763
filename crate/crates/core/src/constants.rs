//! Physical constants (CODATA 2018) shared by every module.

/// Newtonian constant of gravitation, m³ kg⁻¹ s⁻².
pub const G: f64 = 6.674_30e-11;

/// Speed of light in vacuum, m s⁻¹ (exact).
pub const C: f64 = 299_792_458.0;

/// Reduced Planck constant, J s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Julian year, s.
pub const JULIAN_YEAR: f64 = 3.155_76e7;

/// Default upper bound on probability mass discarded by Fock truncation.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-12;

/// Angular frequency for a vacuum wavelength.
pub fn angular_frequency(wavelength: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / wavelength
}
