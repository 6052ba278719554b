use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnError {
    #[error("invalid position {0}")]
    InvalidPosition(String),
    #[error("ill-formed term: {0}")]
    IllFormed(String),
    #[error("ill-typed term: {0}")]
    IllTyped(String),
    #[error("condition size limit {limit} exceeded (size {size})")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("product has no unique copy exponents")]
    ExponentClash,
    #[error("not a constructor number")]
    NotConstructorNumber,
    #[error("operation refused: {0}")]
    Refused(String),
    #[error("undeclared function {0}")]
    UndeclaredFunction(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("algorithm maps have different domains")]
    DomainMismatch,
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, CnError>;
