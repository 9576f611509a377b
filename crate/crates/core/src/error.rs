//! Crate-wide error type.

use thiserror::Error;

use crate::frontend::syntax::ParseError;
use crate::term::TermError;
use crate::unfold::Unfolding;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("incompatible configuration: {0}")]
    Incompatible(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    /// An unfolding stopped early; the rules computed so far are kept.
    #[error("unfolding truncated: {reason}")]
    Truncated { reason: String, partial: Box<Unfolding> },
}

pub type Result<T> = std::result::Result<T, Error>;
