//! Presentation files, the preset catalog, the `spbw` command line and its
//! JSON reports.

pub mod ast;
pub mod cli;
pub mod elab;
pub mod parser;
pub mod presets;
pub mod report;

use thiserror::Error;

use crate::assocprimes::AssocError;
use crate::expr::{EvalError, Pos, SyntaxError};
use crate::finring::RingError;
use crate::nilweak::NilError;
use crate::ringmaps::MapError;
use crate::spbwalg::ExtError;

pub use cli::{run_command, run_with_report};
pub use elab::{elaborate, ElabOptions, MapDecl, MapValue, Presentation, RingValue};
pub use parser::parse_ast;

/// Failure while building one declaration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeclError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShellError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("at {pos}: unresolved name `{name}`")]
    UnresolvedName { name: String, pos: Pos },
    #[error("at {pos}: `{name}` is already declared")]
    DuplicateDeclaration { name: String, pos: Pos },
    #[error("at {pos}: relation `{relation}` must have the larger variable on the left")]
    RelationNotLowerTriangular { relation: String, pos: Pos },
    #[error("unknown preset `{0}` (see `spbw presets`)")]
    UnknownPreset(String),
    #[error("at {pos}: in `{name}`: {source}")]
    Declaration {
        pos: Pos,
        name: String,
        source: Box<DeclError>,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Nil(#[from] NilError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
}

#[cfg(test)]
mod tests;
