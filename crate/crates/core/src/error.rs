use thiserror::Error;

/// Errors raised by the incidence library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a mathematical function.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// A distribution or model parameter violates its invariant.
    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    /// A requested perturbation exceeds what the table can absorb.
    #[error("cannot move {requested} incidents: only {available} shifts available")]
    Range { requested: u64, available: u64 },

    /// A declared quantity disagrees with the value derived from ward tables.
    #[error("{what}: declared {declared}, ward tables give {computed}")]
    Mismatch {
        what: String,
        declared: u64,
        computed: u64,
    },

    /// Any other invariant violation in case data or scenario documents.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A scenario document could not be parsed. The message carries the location.
    #[error("parse error: {0}")]
    Parse(String),

    /// The requested simulation does not support the configured model.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        detail: detail.into(),
    }
}
