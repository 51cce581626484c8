use thiserror::Error;

/// Errors produced by the algebra kernels and the experiment layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent overflow at position {pos} (maximum exponent is {max})")]
    ExponentOverflow { pos: usize, max: u32 },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("the zero polynomial has no initial form")]
    ZeroPolynomial,
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("not a regular sequence: Hilbert numerator {found}, expected {expected}")]
    NotRegularSequence { expected: String, found: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("nonzero remainder: {0}")]
    NonzeroRemainder(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("not minimal: {0}")]
    NotMinimal(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("surjectivity failure: {0}")]
    Surjectivity(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
