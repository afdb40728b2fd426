use thiserror::Error;

/// Everything that can go wrong while building or checking operators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TtoError {
    #[error("invalid Blaschke product: {0}")]
    InvalidBlaschke(String),

    #[error("evaluation point {re}+{im}i hits a pole")]
    PoleHit { re: f64, im: f64 },

    #[error("leading coefficient of u - alpha vanishes (|c_n| = {0:e})")]
    DegenerateLeadingCoefficient(f64),

    #[error("point with modulus {0} lies outside the closed unit disc")]
    OutsideClosedDisc(f64),

    #[error("grid tables have different lengths ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("vector or matrix of size {found} used with a space of dimension {expected}")]
    SpaceMismatch { expected: usize, found: usize },

    #[error("symbol has a pole on the unit circle")]
    PoleOnCircle,

    #[error("operator is not a truncated Toeplitz operator (defect residual {0:e})")]
    NotATto(f64),

    #[error("alpha must lie in the open unit disc (|alpha| = {0})")]
    AlphaOnCircle(f64),

    #[error("alpha must be unimodular (|alpha| = {0})")]
    AlphaNotUnimodular(f64),

    #[error("operator is not invertible (smallest singular value {0:e})")]
    NotInvertible(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical check `{check}` failed with residual {residual:e}")]
    NumericalFailure { check: String, residual: f64 },
}

pub type Result<T> = std::result::Result<T, TtoError>;

impl TtoError {
    pub(crate) fn failure(check: impl Into<String>, residual: f64) -> Self {
        TtoError::NumericalFailure {
            check: check.into(),
            residual,
        }
    }
}
