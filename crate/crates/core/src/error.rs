use thiserror::Error;

/// Errors raised by the engine.
///
/// Several variants (`NotDivisible`, `SignIncoherent`, `HMismatch`,
/// `CancellationFailure`, `NonLaurent`, `NonIntegerBlock`) can only occur if
/// an identity that is a theorem fails, i.e. they report an implementation
/// bug rather than a data condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),

    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,

    #[error("division by zero")]
    DivisionByZero,

    #[error("term count {terms} exceeds the configured ceiling {limit}")]
    TermLimit { terms: usize, limit: usize },

    #[error("integer too large for an exponent: {0}")]
    ExponentOverflow(String),

    #[error("{what} {index} is not sign-coherent")]
    SignIncoherent { what: &'static str, index: usize },

    #[error("H-matrix routes disagree at ({row}, {col})")]
    HMismatch { row: usize, col: usize },

    #[error("substituted F-polynomial did not reduce to a polynomial")]
    CancellationFailure,

    #[error("x-denominator did not clear: {0}")]
    NonLaurent(String),

    #[error("D-conjugated block has a non-integer entry at ({row}, {col})")]
    NonIntegerBlock { row: usize, col: usize },

    #[error("no assignment for generator {0}")]
    MissingGenerator(String),

    #[error("semifield mismatch: {0}")]
    SemifieldMismatch(String),

    #[error("expression is not subtraction-free")]
    NotSubtractionFree,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("identity `{identity}` failed: {detail}")]
    Verification { identity: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn verification(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Verification {
            identity: identity.into(),
            detail: detail.into(),
        }
    }
}
