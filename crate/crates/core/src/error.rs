use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid weight system: {0}")]
    InvalidWeight(String),
    #[error("bottom degree where a finite value is required")]
    BottomDegree,
    #[error("degree values of different rank")]
    RankMismatch,
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous for the weight")]
    NotHomogeneous,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("components are algebraically dependent")]
    Dependent,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
