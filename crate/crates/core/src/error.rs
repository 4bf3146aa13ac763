use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error(
        "truncation at dim {dim} leaves tail mass {tail_bound:e} above tolerance {tolerance:e}; \
         need dim >= {required_dim}"
    )]
    Truncation {
        dim: usize,
        tail_bound: f64,
        tolerance: f64,
        required_dim: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator flagged hermitian but max |O - O^dag| = {0:e}")]
    NotHermitian(f64),

    #[error("state not normalized: squared norm {norm_sqr} outside [1 - {tail_bound:e}, 1]")]
    NotNormalized { norm_sqr: f64, tail_bound: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("Krylov evolution did not converge (residual {residual:e})")]
    Series { residual: f64 },

    #[error("quadrature did not converge within {panels} panels (estimate {estimate}, error {error:e})")]
    Accuracy {
        panels: usize,
        estimate: f64,
        error: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("incomplete scenario: {0}")]
    IncompleteScenario(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
