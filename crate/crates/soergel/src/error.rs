use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// `Contract` errors mean a mathematical guarantee failed to hold on actual
/// data (for instance a traced bimodule that is not free); they point at a bug
/// rather than at bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {position} in `{input}`: {message}")]
    Parse { input: String, position: usize, message: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{module}: contract violated: {message}")]
    Contract { module: &'static str, message: String },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn contract(module: &'static str, message: impl Into<String>) -> Error {
        Error::Contract { module, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
