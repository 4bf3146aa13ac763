//! Fisher information, Cramér-Rao bounds with a nuisance parameter, the
//! photon-counting interferometer readout, quadrature cumulants and
//! power-law fits.
//!
//! Fisher matrices are per shot with the interrogation time absorbed into the
//! phases (`tau = 1`) unless a different `tau` is passed explicitly.

mod cumulants;
mod fit;
mod fisher;
mod mz;
mod report;

pub use cumulants::quadrature_cumulants;
pub use fit::{large_n_limit, scaling_exponent, ScalingFit};
pub use fisher::{
    analytic_sqvac_qfim, covariance_matrix, nuisance_qcrb, qfim, single_parameter_qcrb, thg_qfi, variance,
    NuisanceBound, SINGULARITY_THRESHOLD,
};
pub use mz::{
    analytic_mz_cfi, hellinger_cfi, mz_cfi_estimate, mz_outcome_distribution, mz_qfi, CfiEstimate, HellingerCfi,
    MzAngles, DEFAULT_CFI_STEP,
};
pub use report::MetrologyReport;

pub use nalgebra::Matrix2;
