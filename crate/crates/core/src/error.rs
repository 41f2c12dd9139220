use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A ball was too wide to decide a sign, a floor or a denominator.
    /// Re-evaluating at a higher precision may resolve it.
    #[error("interval too wide to certify {0}")]
    Unresolved(&'static str),

    #[error("precision ceiling of {ceiling} bits reached while {context}")]
    ResourceLimit { ceiling: u32, context: String },

    #[error("value indistinguishable from an integer at {bits} bits while {context}")]
    Ambiguous { bits: u32, context: String },

    #[error("reduction failed for {problem}: no convergent with positive epsilon among {tried} candidates")]
    ReductionFailure { problem: String, tried: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Whether re-running at a higher precision can help.
    pub fn is_recoverable(&self) -> bool {
        matches!(self, Error::Unresolved(_))
    }
}
