//! Error types shared across the crate.
//!
//! Errors fall into three categories which the CLI maps onto exit codes:
//! session-text parse errors, evaluation errors (name resolution, bad
//! parameters, dimension mismatches) and image I/O errors.

use std::fmt;
use std::path::PathBuf;
use thiserror::Error;

/// A line:column position in a session file (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Loc {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Lexical or syntactic error in a session file.
#[derive(Debug, Clone, Error)]
#[error("parse error at {loc}: {message}")]
pub struct ParseError {
    pub loc: Loc,
    pub message: String,
}

/// Error raised while expanding or evaluating formulas.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{loc}: unknown name `{name}`")]
    UnknownName { name: String, loc: Loc },

    #[error("{loc}: unknown predicate `[{name}]` (only `border` is built in)")]
    UnknownPredicate { name: String, loc: Loc },

    #[error("unknown attribute `{name}`{}", loc.map(|l| format!(" at {l}")).unwrap_or_default())]
    UnknownAttribute { name: String, loc: Option<Loc> },

    #[error("{loc}: `{name}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        loc: Loc,
    },

    #[error("{loc}: recursive definition: {}", cycle.join(" -> "))]
    RecursiveDefinition { cycle: Vec<String>, loc: Loc },

    #[error("channel `{name}` has {found} values but the grid has {expected} points")]
    ChannelLength {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("channel `{name}` is already bound")]
    DuplicateChannel { name: String },

    #[error("`{name}` is a reserved predicate name")]
    ReservedName { name: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("point sets belong to different grid spaces")]
    SpaceMismatch,

    #[error("image has no significant points above the background threshold")]
    EmptySignificant,

    #[error("space with {points} points exceeds the oracle limit of {limit}")]
    SpaceTooLarge { points: usize, limit: usize },

    #[error("session declares no model")]
    NoModel,
}

/// Error raised while loading or saving image files.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    BadHeader { path: PathBuf, reason: String },

    #[error("{path}: unsupported datatype {reason}")]
    UnsupportedDatatype { path: PathBuf, reason: String },

    #[error("volumes disagree on grid geometry: {details}")]
    GridMismatch { details: String },

    #[error("{path}: unsupported file format (expected .nii or .png)")]
    UnsupportedFile { path: PathBuf },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        source: image::ImageError,
    },

    #[error("unsupported model kind `{kind}` (expected `med`)")]
    UnsupportedModelKind { kind: String },
}

/// Any error produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Load(#[from] LoadError),
}

pub type Result<T> = std::result::Result<T, Error>;
