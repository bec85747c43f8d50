//! Error type shared by the whole crate.

/// Everything that can go wrong while building or checking a configuration.
///
/// Arithmetic itself never fails; errors come from malformed inputs (mixed
/// fields, wrong dimensions, inhomogeneous data) or from degenerate random
/// draws that survive every retry.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two values from different fields met in one operation.
    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    /// Shapes or variable counts do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Input outside the domain of an operation (zero vector as a projective
    /// point, composite modulus, division by zero, ...).
    #[error("{0}")]
    Domain(String),

    /// A scenario failed one of its structural invariants.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// Random draws kept producing degenerate arrangements.
    #[error("degenerate arrangement after {attempts} attempts: {reason}")]
    Degenerate { attempts: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn field_mismatch(what: impl Into<String>) -> Self {
        Error::FieldMismatch(what.into())
    }

    pub fn dim(what: impl Into<String>) -> Self {
        Error::DimensionMismatch(what.into())
    }

    pub fn domain(what: impl Into<String>) -> Self {
        Error::Domain(what.into())
    }

    pub fn scenario(what: impl Into<String>) -> Self {
        Error::InvalidScenario(what.into())
    }
}
