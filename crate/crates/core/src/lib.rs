//! Truncated Fock-space simulation of the gravitational self-interaction of
//! cavity light, together with the parameter-estimation machinery used to
//! separate a quartic (quantum-gravity) phase from any quadratic (classical)
//! one.
//!
//! The crate is organised bottom-up:
//!
//! * [`fock`]: one- and two-mode pure states, sparse operators, photon-count
//!   distributions and their CSV form.
//! * [`linalg`]: dense matrix exponential and Krylov action of `exp(iθH)`.
//! * [`generators`]: Kerr, number, Mach-Zehnder and third-harmonic generators
//!   and the unitaries they produce.
//! * [`metrology`]: Fisher information, nuisance-parameter bounds, the
//!   interferometric readout, quadrature cumulants and scaling fits.
//! * [`coupling`]: cavity geometry, the arm-arm interaction integral and the
//!   per-shot Kerr phase.
//! * [`planner`]: conversions between laser power, interrogation time and the
//!   metrological bounds.

pub mod constants;
pub mod coupling;
mod error;
pub mod fock;
pub mod generators;
pub mod linalg;
pub mod metrology;
pub mod planner;

pub use error::{Error, Result};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
