use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Variants are split roughly into malformed input (bad link data, bad norm
/// balls, parse failures) and unmet hypotheses of the decision rules. The CLI
/// maps the former to exit code 2 and the latter to exit code 3.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("the zero class has no slope")]
    ZeroClass,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("linking number lk({i},{j}) is zero")]
    DegenerateLinking { i: usize, j: usize },

    #[error("invalid link data: {0}")]
    InvalidLinkData(String),

    #[error("torsion orders of this link are unverified (produced by surgery); supply verified orders")]
    OrdersUnverified,

    #[error("degenerate norm: {0}")]
    DegenerateNorm(String),

    #[error("invalid norm ball: {0}")]
    InvalidNormBall(String),

    #[error("class {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),

    #[error("class {0:?} is a corner of the norm")]
    CornerClass(Vec<i64>),

    #[error("inconsistent data: {0}")]
    InconsistentData(String),

    #[error("boundary classes have equal slopes on torus P{torus}; minimal position fails")]
    MinimalPositionViolation { torus: usize },

    #[error("invalid arc pairing: {0}")]
    InvalidPairing(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    /// True for errors caused by malformed input rather than unmet hypotheses.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidLinkData(_)
                | Error::InvalidNormBall(_)
                | Error::DegenerateNorm(_)
                | Error::DimensionMismatch { .. }
                | Error::Parse(_)
                | Error::IndexOutOfRange { .. }
                | Error::ZeroClass
                | Error::NotPrimitive(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
