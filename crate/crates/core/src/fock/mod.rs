//! Pure states of one and two optical modes in truncated Fock spaces.
//!
//! Amplitudes are indexed by photon number; a two-mode state stores
//! `(n_a, n_b)` in a `dim_a × dim_b` matrix whose column-major flattening
//! (`n_a + dim_a * n_b`) is the basis ordering used by [`OperatorMatrix`].

mod csv;
mod distribution;
mod operator;
mod state;
pub mod truncation;

pub use distribution::{number_distribution, OutcomeDistribution};
pub use operator::{expectation, OperatorMatrix, Space, Structure};
pub use state::{PureState, SingleModeState, TwoModeState};
