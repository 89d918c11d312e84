//! Core formula syntax after macro expansion and desugaring.
//!
//! The checker only ever sees this core language: assertions on image
//! attributes, the built-in `border` predicate, boolean connectives,
//! `near`, `surrounded`, distance predicates over an interval, and the
//! statistical-comparison operator. Everything else in the surface
//! language rewrites into these nodes.

use std::fmt;

/// A finite float with total equality, ordering and hashing, so formulas
/// can key a memoization cache and distances can sit in a binary heap.
/// Equality is by bit pattern; the parser never produces NaN.
#[derive(Debug, Clone, Copy)]
pub struct R64(pub f64);

impl PartialEq for R64 {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for R64 {}

impl PartialOrd for R64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for R64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for R64 {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl From<f64> for R64 {
    fn from(v: f64) -> Self {
        R64(v)
    }
}

impl fmt::Display for R64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Comparison operator of assertions, distance predicates and SCMP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Cmp {
    pub fn eval(self, a: f64, b: f64) -> bool {
        match self {
            Cmp::Eq => a == b,
            Cmp::Lt => a < b,
            Cmp::Gt => a > b,
            Cmp::Le => a <= b,
            Cmp::Ge => a >= b,
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cmp::Eq => "=",
            Cmp::Lt => "<",
            Cmp::Gt => ">",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
        };
        f.write_str(s)
    }
}

/// An interval of `[0, ∞]` with open/closed bounds on either side.
///
/// `+∞` is a member exactly when the upper bound is infinite; this makes
/// `d(x, ∅) = ∞` satisfy `D^{≥c}` and `D^{>c}` for every finite `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: R64,
    lo_closed: bool,
    hi: R64,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> crate::Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(crate::EvalError::Parameter(format!(
                "malformed interval: lower bound {lo} must not exceed upper bound {hi}"
            ))
            .into());
        }
        Ok(Interval {
            lo: R64(lo),
            lo_closed,
            hi: R64(hi),
            hi_closed,
        })
    }

    /// Interval denoted by a comparison against a constant:
    /// `<c → [0,c)`, `≤c → [0,c]`, `=c → [c,c]`, `≥c → [c,∞)`, `>c → (c,∞)`.
    pub fn from_cmp(cmp: Cmp, c: f64) -> crate::Result<Self> {
        match cmp {
            Cmp::Lt => Self::new(0.0, true, c, false),
            Cmp::Le => Self::new(0.0, true, c, true),
            Cmp::Eq => Self::new(c, true, c, true),
            Cmp::Ge => Self::new(c, true, f64::INFINITY, false),
            Cmp::Gt => Self::new(c, false, f64::INFINITY, false),
        }
    }

    /// Recovers the `⋈ c` shorthand if this interval is expressible as one.
    pub fn as_cmp(&self) -> Option<(Cmp, f64)> {
        let (lo, hi) = (self.lo.0, self.hi.0);
        if hi.is_infinite() {
            if lo == 0.0 && self.lo_closed {
                None // [0, ∞) is total; no single comparison spells it
            } else if self.lo_closed {
                Some((Cmp::Ge, lo))
            } else {
                Some((Cmp::Gt, lo))
            }
        } else if lo == hi && self.lo_closed && self.hi_closed {
            Some((Cmp::Eq, lo))
        } else if lo == 0.0 && self.lo_closed {
            Some((if self.hi_closed { Cmp::Le } else { Cmp::Lt }, hi))
        } else {
            None
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        let lower_ok = if self.lo_closed {
            v >= self.lo.0
        } else {
            v > self.lo.0
        };
        let upper_ok = if self.hi.0.is_infinite() {
            true
        } else if self.hi_closed {
            v <= self.hi.0
        } else {
            v < self.hi.0
        };
        lower_ok && upper_ok
    }

    pub fn bounds(&self) -> (f64, bool, f64, bool) {
        (self.lo.0, self.lo_closed, self.hi.0, self.hi_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { "[" } else { "(" },
            self.lo,
            self.hi,
            if self.hi_closed { "]" } else { ")" }
        )
    }
}

/// Which distance transform backs a distance predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Exact Euclidean distance (`EDT` syntax).
    Euclidean,
    /// Weighted shortest-path distance on the session's adjacency
    /// (`MDDT` syntax).
    Chamfer,
}

/// Parameters of the statistical-comparison operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScmpParams {
    /// Attribute sampled in the sphere around each candidate point.
    pub attr_sphere: String,
    /// Attribute sampled over the target region.
    pub attr_target: String,
    /// Sphere radius in physical units.
    pub radius: R64,
    pub cmp: Cmp,
    /// Threshold the cross-correlation is compared against.
    pub threshold: R64,
    /// Histogram range lower bound (inclusive).
    pub min: R64,
    /// Histogram range upper bound (exclusive).
    pub max: R64,
    /// Number of histogram bins.
    pub bins: usize,
}

/// A core ImgQL formula. Evaluating a formula yields the set of all grid
/// points satisfying it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `[attr ⋈ c]`
    Assertion(String, Cmp, R64),
    /// The built-in `[border]` predicate.
    Border,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `N f`: one closure step.
    Near(Box<Formula>),
    /// `f1 S f2`: points of `f1` from which every path leaving the
    /// `f1`-region first passes through `f2`.
    Surrounded(Box<Formula>, Box<Formula>),
    /// Distance from the points satisfying the child lies in the interval.
    Dist(Metric, Interval, Box<Formula>),
    /// Statistical comparison. `restrict` bounds the candidate points and
    /// `target` defines the reference region, mirroring the
    /// `SCMP(a,fa,ρ,⋈c,m,M,k)(b,fb)` surface form which denotes
    /// `fa ∧ similarity(...) fb`.
    Scmp {
        params: ScmpParams,
        restrict: Box<Formula>,
        target: Box<Formula>,
    },
}

impl Formula {
    pub fn assertion(attr: impl Into<String>, cmp: Cmp, c: f64) -> Formula {
        Formula::Assertion(attr.into(), cmp, R64(c))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn near(f: Formula) -> Formula {
        Formula::Near(Box::new(f))
    }

    pub fn surrounded(a: Formula, b: Formula) -> Formula {
        Formula::Surrounded(Box::new(a), Box::new(b))
    }

    pub fn dist(metric: Metric, interval: Interval, f: Formula) -> Formula {
        Formula::Dist(metric, interval, Box::new(f))
    }

    /// `⊥ ≜ p ∧ ¬p`, instantiated on the always-available border predicate.
    pub fn ff() -> Formula {
        Self::and(Formula::Border, Self::not(Formula::Border))
    }

    /// `⊤ ≜ ¬⊥`.
    pub fn tt() -> Formula {
        Self::not(Self::ff())
    }

    /// `f1 ∨ f2 ≜ ¬(¬f1 ∧ ¬f2)`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    /// Interior: `I f ≜ ¬N¬f`.
    pub fn interior(f: Formula) -> Formula {
        Self::not(Self::near(Self::not(f)))
    }

    /// Reachability: `f1 R f2 ≜ ¬(¬f2 S ¬f1)`.
    pub fn reach(a: Formula, b: Formula) -> Formula {
        Self::not(Self::surrounded(Self::not(b), Self::not(a.clone())))
    }

    /// From-To: `f1 T f2 ≜ f1 ∧ ((f1 ∨ f2) R f2)`.
    pub fn touch(a: Formula, b: Formula) -> Formula {
        Self::and(a.clone(), Self::reach(Self::or(a, b.clone()), b))
    }

    /// `Everywhere f ≜ f S ⊥`.
    pub fn everywhere(f: Formula) -> Formula {
        Self::surrounded(f, Self::ff())
    }

    /// `Somewhere f ≜ ¬Everywhere ¬f`.
    pub fn somewhere(f: Formula) -> Formula {
        Self::not(Self::everywhere(Self::not(f)))
    }

    /// Strong surrounded: `f1 S! f2 ≜ (f1 S f2) ∧ ¬Everywhere f1`.
    pub fn strong_surrounded(a: Formula, b: Formula) -> Formula {
        Self::and(
            Self::surrounded(a.clone(), b),
            Self::not(Self::everywhere(a)),
        )
    }

    /// Bounded surrounded:
    /// `f1 S^I f2 ≜ ((f1 ∧ ¬f2) S! f2) ∧ D^I f2`.
    pub fn bounded_surrounded(
        a: Formula,
        b: Formula,
        metric: Metric,
        interval: Interval,
    ) -> Formula {
        Self::and(
            Self::strong_surrounded(Self::and(a, Self::not(b.clone())), b.clone()),
            Self::dist(metric, interval, b),
        )
    }

    /// Radius-`c` filter: `flt_c f ≜ D^{<c}(¬ D^{<c} ¬f)`.
    pub fn flt(c: f64, metric: Metric, f: Formula) -> crate::Result<Formula> {
        let lt_c = Interval::from_cmp(Cmp::Lt, c)?;
        Ok(Self::dist(
            metric,
            lt_c,
            Self::not(Self::dist(metric, lt_c, Self::not(f))),
        ))
    }

    /// Formula size: the number of operators, counting atoms as 1.
    pub fn size(&self) -> usize {
        match self {
            Formula::Assertion(..) | Formula::Border => 1,
            Formula::Not(f) | Formula::Near(f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Surrounded(a, b) => 1 + a.size() + b.size(),
            Formula::Dist(_, _, f) => 1 + f.size(),
            Formula::Scmp {
                restrict, target, ..
            } => 1 + restrict.size() + target.size(),
        }
    }
}

// Precedence levels for printing with minimal parentheses. Binary spatial
// operators bind loosest, then `|` (never produced by the core printer),
// then `&`, then the prefix operators, then atoms.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Surrounded(..) => 0,
        Formula::And(..) => 2,
        Formula::Not(..) | Formula::Near(..) => 3,
        _ => 4,
    }
}

fn fmt_child(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(f) < min {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Assertion(attr, cmp, c) => write!(f, "[{attr} {cmp} {c}]"),
            Formula::Border => write!(f, "[border]"),
            Formula::Not(x) => {
                write!(f, "!")?;
                fmt_child(x, 3, f)
            }
            Formula::Near(x) => {
                write!(f, "N ")?;
                fmt_child(x, 3, f)
            }
            Formula::And(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, " & ")?;
                fmt_child(b, 3, f)
            }
            Formula::Surrounded(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " S ")?;
                fmt_child(b, 1, f)
            }
            Formula::Dist(metric, interval, x) => {
                let name = match metric {
                    Metric::Euclidean => "EDT",
                    Metric::Chamfer => "MDDT",
                };
                match interval.as_cmp() {
                    Some((cmp, c)) => write!(f, "{name}({x},{cmp}{c})"),
                    // No concrete syntax exists for a general interval;
                    // this form is for diagnostics only.
                    None => write!(f, "{name}({x},{interval})"),
                }
            }
            Formula::Scmp {
                params,
                restrict,
                target,
            } => write!(
                f,
                "SCMP({},{},{},{}{},{},{},{})({},{})",
                params.attr_sphere,
                restrict,
                params.radius,
                params.cmp,
                params.threshold,
                params.min,
                params.max,
                params.bins,
                params.attr_target,
                target
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_operators() {
        let p = Formula::Border;
        assert_eq!(p.size(), 1);
        assert_eq!(Formula::not(p.clone()).size(), 2);
        assert_eq!(Formula::surrounded(p.clone(), p.clone()).size(), 3);
        assert_eq!(Formula::near(Formula::and(p.clone(), p)).size(), 4);
    }

    #[test]
    fn interval_membership() {
        let i = Interval::from_cmp(Cmp::Lt, 2.0).unwrap();
        assert!(i.contains(0.0));
        assert!(i.contains(1.999));
        assert!(!i.contains(2.0));
        assert!(!i.contains(f64::INFINITY));

        let i = Interval::from_cmp(Cmp::Ge, 2.0).unwrap();
        assert!(!i.contains(1.999));
        assert!(i.contains(2.0));
        assert!(i.contains(f64::INFINITY));

        let i = Interval::from_cmp(Cmp::Gt, 0.0).unwrap();
        assert!(!i.contains(0.0));
        assert!(i.contains(f64::INFINITY));

        let i = Interval::from_cmp(Cmp::Eq, 0.0).unwrap();
        assert!(i.contains(0.0));
        assert!(!i.contains(1e-12));

        let total = Interval::new(0.0, true, f64::INFINITY, false).unwrap();
        assert!(total.contains(0.0));
        assert!(total.contains(f64::INFINITY));
    }

    #[test]
    fn malformed_intervals_are_rejected() {
        assert!(Interval::new(3.0, true, 2.0, true).is_err());
        assert!(Interval::from_cmp(Cmp::Lt, -1.0).is_err());
    }

    #[test]
    fn interval_cmp_roundtrip() {
        for (cmp, c) in [
            (Cmp::Lt, 3.0),
            (Cmp::Le, 0.5),
            (Cmp::Eq, 2.0),
            (Cmp::Ge, 1.0),
            (Cmp::Gt, 0.0),
        ] {
            let i = Interval::from_cmp(cmp, c).unwrap();
            assert_eq!(i.as_cmp(), Some((cmp, c)));
        }
    }
}
