use crate::ir::ValidationReport;

/// Crate-wide error type.
///
/// The CLI maps variants onto exit codes, so the distinction between
/// `Validation`-class errors and `SpaceTooLarge` refusals is load-bearing.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A document failed to parse. `serde_json` supplies line/column context.
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    /// An invariant violation, with the offending field spelled out.
    #[error("validation error: {0}")]
    Validation(String),

    /// A schedule failed structural validation.
    #[error("invalid schedule: {0}")]
    InvalidSchedule(ValidationReport),

    /// Enumerating the pointer space would exceed the caller's cap.
    #[error("pointer space holds {size} matrices, exceeding cap {cap}")]
    SpaceTooLarge { size: u128, cap: u64 },

    /// Results computed against different scenarios were combined.
    #[error("scenario digest mismatch: {left} vs {right}")]
    DigestMismatch { left: String, right: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
