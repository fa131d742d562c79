use thiserror::Error;

/// Errors raised by the algebra engines, predictors and parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("variable index {index} out of range for {n_vars} variables")]
    VariableIndex { index: usize, n_vars: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("series is not a unit (zero constant term)")]
    NonUnit,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("truncated complex is empty: {0}")]
    EmptyComplex(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// An identity that must hold by construction failed. Always a bug.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("profile is not a hard-Lefschetz Betti profile: {0}")]
    ProfileNotLefschetz(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("x-degree {found} exceeds tracked range; required bound is {required}")]
    Range { found: usize, required: usize },

    #[error("operator is not regular: {0}")]
    NotRegular(String),

    #[error("all leading constants vanish: {0}")]
    Contradiction(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
