use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{kind} index {index} out of range (must be < {bound})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "enumeration budget exceeded: {committees} committees of size {committee_size} \
         from {candidates} candidates (limit {limit}); use a sequential rule instead"
    )]
    EnumerationBudget {
        candidates: usize,
        committee_size: usize,
        committees: u128,
        limit: u64,
    },

    #[error("verifier budget exceeded after examining {examined} witness sets (limit {limit})")]
    SearchBudget { examined: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for the desk-scale guard errors (enumeration and search budgets).
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::EnumerationBudget { .. } | Error::SearchBudget { .. }
        )
    }
}
