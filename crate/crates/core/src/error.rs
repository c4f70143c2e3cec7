use thiserror::Error;

/// Errors produced by graph, model, encoding and solving operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A vertex or color index fell outside `1..=n` / `1..=k`.
    #[error("index out of range: {0}")]
    OutOfRange(String),

    /// Two objects that must agree on `n` and/or `k` do not.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// A structural invariant was violated at construction time.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// An enumeration would exceed the caller-supplied budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Malformed graph/matrix/sequence text.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An external solver process failed or produced unparsable output.
    #[error("solver backend error: {0}")]
    Backend(String),

    /// The encoder produced a model violating its own soundness contract.
    #[error("internal encoding error: {0}")]
    EncodingSoundness(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}
