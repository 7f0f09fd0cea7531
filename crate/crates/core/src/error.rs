use thiserror::Error;

use crate::clogic::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("index {index} out of range for structure with {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("structure has {n} points, above the cap of {cap}; use the large-structure constructor")]
    TooLarge { n: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no witness ({case}): {window}")]
    NoWitness { case: String, window: String },
    #[error("evaluation error: {0}")]
    Eval(String),
}

pub type Result<T> = std::result::Result<T, Error>;
