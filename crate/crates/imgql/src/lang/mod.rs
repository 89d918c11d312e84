//! The ImgQL session-file language: lexer, parser, macro expansion.
//!
//! A session file declares the images to load, defines named (optionally
//! parameterised) formulas, and lists the formulas to check:
//!
//! ```text
//! Model "med:FLAIR=scan.nii";
//! Let reach(a,b) = !(!b S !a);
//! Let bright = [FLAIR > 1.7];
//! Output segmentation.nii
//! Check "8" bright;
//! ```
//!
//! [`parse`] produces the surface [`ast`], and [`expand_session`]
//! validates definitions and rewrites every checked formula into the
//! core [`crate::formula::Formula`] language.

pub mod ast;
mod expand;
mod lexer;
mod parser;

pub use expand::{desugar, expand_in_session, expand_session, ExpandedCheck};
pub use parser::{parse, parse_formula, RESERVED_WORDS};
