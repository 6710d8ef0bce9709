use thiserror::Error;

/// Errors raised by the library.
///
/// `TheoremFalsified` is reserved for dimension or divisibility assertions
/// whose failure would mean a proved statement does not hold on the computed
/// data; callers should abort rather than recover from it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("unsupported root system {family}{rank}; supported: A1-A4, B1-B4, C1-C4, D4, G2")]
    Unsupported { family: String, rank: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("arrangement does not contain the hyperplane z = 0")]
    MissingInfinity,

    #[error("derivation {index} is not in the module: {detail}")]
    NotInModule { index: usize, detail: String },

    #[error("exponent sum {got} does not match total multiplicity {expected}")]
    DegreeSumMismatch { got: usize, expected: usize },

    #[error("theorem falsified ({statement}): {detail}")]
    TheoremFalsified { statement: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
