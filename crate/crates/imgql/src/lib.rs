//! Spatial-logic model checking for 2D and 3D grayscale images.
//!
//! Images are modelled as quasi-discrete closure spaces: a regular grid
//! of points with physical spacing, related by an adjacency relation that
//! induces a closure operator. Formulas of the query language combine
//! boolean connectives with spatial operators—proximity, surroundedness,
//! distance (exact Euclidean or shortest-path), and statistical texture
//! similarity—and each formula denotes the set of all points satisfying
//! it. Session files bind image channels to attribute names, define
//! formula macros, and paint the satisfying region of each checked
//! formula into a label volume.
//!
//! The crate is organised around the pipeline:
//!
//! * [`space`] — grids, adjacency, closure, dense point sets
//! * [`model`] — named scalar channels and assertions over them
//! * [`formula`] — the core abstract syntax after desugaring
//! * [`lang`] — lexer, parser and macro expansion for session files
//! * [`checker`] — the memoizing global model checker
//! * [`distance`] — Euclidean and chamfer distance transforms
//! * [`stats`] — histograms, cross-correlation and the SCMP operator
//! * [`io`] — NIfTI/PNG volumes, normalization, Dice, session driver
//! * [`oracle`] — brute-force reference semantics for testing
//!
//! See the `examples/` directory for one runnable example per major
//! capability, and the `imgql` binary for the command-line front end.

pub mod checker;
pub mod distance;
mod error;
pub mod formula;
pub mod io;
pub mod lang;
pub mod model;
pub mod oracle;
pub mod space;
pub mod stats;
pub mod synth;

pub use error::{Error, EvalError, LoadError, Loc, ParseError, Result};
pub use formula::{Cmp, Formula, Interval, Metric};
pub use model::Model;
pub use space::{Adjacency, GridSpace, PointSet};
