use thiserror::Error;

/// Unified error type for the engine.
///
/// Everything that can go wrong falls in two families: resource exhaustion
/// (`BudgetExceeded`), and structural findings about the input or about an
/// internal certificate. Plain negative verdicts ("no displacement exists",
/// "not an opfibration") are *not* errors — those are `Option`/report values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A search or construction would exceed its configured cap.
    #[error("budget exceeded while {what}: needed {needed}, cap {cap}")]
    BudgetExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },

    /// A crossing datum is malformed at a specific index.
    #[error("malformed crossing data at index {index}: {reason}")]
    MalformedCrossing { index: usize, reason: String },

    /// Descent ran the allowed number of stages without all legs
    /// becoming invertible.
    #[error("descent did not stabilize within {stages} stages")]
    NotStabilized { stages: usize },

    /// A displacement required by a larger construction does not exist.
    #[error("required displacement missing: {what}")]
    DisplacementMissing { what: String },

    /// A colimit required by a construction does not exist in the
    /// (finite, possibly truncated) target category.
    #[error("no colimit exists: {context}")]
    NoColimit { context: String },

    /// An internally produced certificate failed re-verification.
    /// This always indicates a bug or corrupted input, never a plain
    /// negative verdict.
    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),

    /// A bridge decomposition was asked to split along an impossible
    /// partition (e.g. a morphism runs from the kept part into the
    /// collapsed part).
    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    /// A category claimed to be a join does not have join shape.
    #[error("malformed join: {0}")]
    MalformedJoin(String),

    /// Structurally invalid input (failed validation, mismatched
    /// categories, out-of-range ids, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
