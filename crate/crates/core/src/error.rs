use thiserror::Error;

/// Errors produced by the numerical kernels and the catalog.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid parameter `{name}` for {system}: {reason}")]
    InvalidParameter {
        system: &'static str,
        name: String,
        reason: String,
    },

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },

    #[error("operation requires a {expected}, got a {got}")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },

    #[error("singular factor at index {index}: zero on the R diagonal")]
    SingularFactor { index: usize },

    #[error("explicit product too ill-conditioned (condition number {cond:e})")]
    IllConditioned { cond: f64 },

    #[error("need at least {needed} points, have {have}")]
    InsufficientPoints { needed: usize, have: usize },

    #[error("every point failed; first failure: {0}")]
    AllPointsFailed(Box<Error>),

    #[error("no attractor to sample: {0}")]
    NoAttractor(String),
}

impl Error {
    /// Errors caused by the request itself rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidParameter { .. }
                | Error::WrongKind { .. }
                | Error::InsufficientPoints { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
