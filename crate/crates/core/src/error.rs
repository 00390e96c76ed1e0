use thiserror::Error;

use crate::syntax::SyntaxError;
use crate::term::Path;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("path {0} does not address a marked redex")]
    InvalidPath(Path),
    #[error("term is already in normal form")]
    AlreadyNormal,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("state limit of {limit} exceeded")]
    LimitExceeded { limit: usize },
    #[error("cycle detected in the development graph")]
    CycleDetected,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
