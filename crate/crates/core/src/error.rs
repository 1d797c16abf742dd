use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("polynomial is not invariant under {group}")]
    NotInvariant { group: String },
    #[error("polynomial is not homogeneous of degree {degree}")]
    NotHomogeneous { degree: u32 },
    #[error("odd target degree {0}")]
    OddDegree(u32),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid coordinate naming {naming} for family {family}")]
    InvalidNaming { naming: String, family: String },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {what} (limit {limit}, reached {reached})")]
    Budget { what: String, limit: usize, reached: usize },
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
