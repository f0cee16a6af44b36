use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("linear system has no solution")]
    NoSolution,

    #[error("linear system is underdetermined (rank {rank} < {unknowns} unknowns)")]
    Underdetermined { rank: usize, unknowns: usize },

    /// A symbolic expansion would exceed the configured term budget.
    #[error("term budget exceeded: {needed} terms > budget {budget}")]
    Budget { needed: usize, budget: usize },

    /// A proven identity or internal consistency check failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
