use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
    #[error("base algebra {0} is not commutative")]
    NonCommutativeBase(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("subspace is not closed under {0}")]
    NotClosed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("rewriting did not terminate within {0} steps")]
    RewriteLimit(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
