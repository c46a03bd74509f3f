use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("leading coefficient `{0}` is not invertible in the coefficient ring")]
    NotInvertible(String),

    #[error("series square root needs constant term 1, found `{0}`")]
    SqrtConstantTerm(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("truncation too short: need terms through z^{needed}, series known only below z^{available}")]
    TruncationTooShort { needed: i32, available: i32 },

    #[error("divisor operator is not monic: leading coefficient `{0}`")]
    NotMonic(String),

    #[error("operators do not commute: first nonzero commutator coefficient W_{order} = {coefficient}")]
    NonCommuting { order: usize, coefficient: String },

    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),

    #[error("underdetermined linear system: {0}")]
    Underdetermined(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no branch assignment satisfies the system; smallest max residual {min_residual} at {assignment}")]
    BranchSearchExhausted { min_residual: String, assignment: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
