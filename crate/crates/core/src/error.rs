use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The input does not meet the degree or structure precondition of the procedure.
    /// This is an expected outcome, not a bug.
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    /// An internal check that must hold by construction failed.
    #[error("defect: {0}")]
    Defect(String),

    #[error("input too large for the brute-force oracle: {0}")]
    OracleBound(String),

    /// A serialized object failed validation. `field` names the offending field.
    #[error("invalid `{field}`: {message}")]
    Format { field: String, message: String },

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}
