use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("`{var}` is not in the dependency set of `{function}`")]
    Dependency { function: String, var: String },
    #[error("invalid symbol declaration: {0}")]
    Declaration(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator `{0}` depends on jet variables")]
    JetDenominator(String),
    #[error("cannot evaluate `{0}`: no value assigned")]
    Unresolved(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("singular matrix: column {column} has no nonzero pivot after {rank} eliminations (vanishing minor: {minor})")]
    Singular {
        column: usize,
        rank: usize,
        minor: String,
    },
    #[error("pivot `{0}` depends on jets and cannot be inverted")]
    NonInvertiblePivot(String),
    #[error("inconsistent linear system: residual `{0}`")]
    Inconsistent(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-canonical dependence on lam in `{0}`")]
    NonCanonicalLambda(String),
    #[error("golden data: {0}")]
    Data(String),
}
