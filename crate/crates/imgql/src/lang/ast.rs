//! Surface syntax of session files, before macro expansion.

use crate::error::Loc;
use crate::formula::{Cmp, Interval, Metric};

/// A parsed session file: at most one model binding, formula definitions
/// in source order, an optional output declaration and the check
/// directives to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub model: Option<ModelDecl>,
    pub defs: Vec<Def>,
    pub output: Option<OutputDecl>,
    pub checks: Vec<CheckDecl>,
}

/// `Model "kind:attr1=path1,attr2=path2,...";`
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDecl {
    pub kind: String,
    pub bindings: Vec<(String, String)>,
    pub loc: Loc,
}

/// `Output some-file.nii`
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDecl {
    pub path: String,
    pub loc: Loc,
}

/// `Check "label" formula;`
#[derive(Debug, Clone, PartialEq)]
pub struct CheckDecl {
    pub label: String,
    pub expr: Expr,
    pub loc: Loc,
}

/// `Let name(params...) = body;`
#[derive(Debug, Clone, PartialEq)]
pub struct Def {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
    pub loc: Loc,
}

/// A surface formula. Derived operators are kept explicit here and
/// rewritten into the core language by expansion.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// `TT`
    True,
    /// `FF`
    False,
    /// `[name]` — an atomic predicate reference.
    Pred { name: String, loc: Loc },
    /// `[attr ⋈ c]`
    Assertion {
        attr: String,
        cmp: Cmp,
        value: f64,
        loc: Loc,
    },
    /// A reference to a defined name, possibly applied to arguments.
    Name {
        name: String,
        args: Vec<Expr>,
        loc: Loc,
    },
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Near(Box<Expr>),
    Interior(Box<Expr>),
    Surrounded(Box<Expr>, Box<Expr>),
    Reach(Box<Expr>, Box<Expr>),
    Touch(Box<Expr>, Box<Expr>),
    /// `EDT(f, ⋈c)` or `MDDT(f, ⋈c)`
    Dist {
        metric: Metric,
        interval: Interval,
        arg: Box<Expr>,
        loc: Loc,
    },
    /// `SCMP(a, fa, ρ, ⋈c, m, M, k)(b, fb)`
    Scmp {
        attr_sphere: String,
        restrict: Box<Expr>,
        radius: f64,
        cmp: Cmp,
        threshold: f64,
        min: f64,
        max: f64,
        bins: usize,
        attr_target: String,
        target: Box<Expr>,
        loc: Loc,
    },
}
