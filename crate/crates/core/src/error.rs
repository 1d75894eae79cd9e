use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numeric argument is outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("vertex {vertex} is not a temporal {role}: no eligible cut edge at step {step}")]
    NotReachable {
        vertex: usize,
        role: &'static str,
        step: usize,
    },

    #[error("no good square found ({candidates} candidate squares tested{})", if *.cap_hit { ", candidate cap hit" } else { "" })]
    NoGoodSquare { candidates: usize, cap_hit: bool },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
