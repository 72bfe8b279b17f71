use thiserror::Error;

/// Errors raised by group construction and the algorithms built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("group order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: usize, cap: usize },

    #[error("not a subgroup of the parent group")]
    NotSubgroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("element index {index} out of range for a group of order {order}")]
    BadElement { index: usize, order: usize },

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("extensions have different kernels or quotient primes")]
    KernelMismatch,

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("malformed multiplication table: {0}")]
    BadTable(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;
