//! Macro expansion and desugaring to the core language.
//!
//! Expansion substitutes macro calls by name: parameters shadow global
//! definitions, arguments are passed unevaluated (call-by-name), and a
//! definition may only use names defined before it, which keeps
//! expansion well-founded. Derived operators rewrite into the core
//! connectives.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{EvalError, Loc};
use crate::formula::Formula;

use super::ast::{Def, Expr, Session};

/// One expanded `Check` directive.
#[derive(Debug, Clone)]
pub struct ExpandedCheck {
    pub label: String,
    pub formula: Formula,
    pub loc: Loc,
}

/// Known attribute names for assertion validation; `None` skips the
/// check (attributes are then validated at evaluation time instead).
pub type Attrs<'a> = Option<&'a [String]>;

/// Validates every definition in the session and expands every `Check`
/// directive to a core formula.
pub fn expand_session(session: &Session, attrs: Attrs) -> crate::Result<Vec<ExpandedCheck>> {
    let env = Env::new(&session.defs, attrs);
    env.validate_defs()?;
    session
        .checks
        .iter()
        .map(|c| {
            let formula = env.expand_expr(
                &c.expr,
                &Rc::new(HashMap::new()),
                session.defs.len(),
                &mut Vec::new(),
            )?;
            Ok(ExpandedCheck {
                label: c.label.clone(),
                formula,
                loc: c.loc,
            })
        })
        .collect()
}

/// Desugars a standalone surface formula (no macro definitions in scope).
pub fn desugar(expr: &Expr) -> crate::Result<Formula> {
    let env = Env::new(&[], None);
    env.expand_expr(expr, &Rc::new(HashMap::new()), 0, &mut Vec::new())
}

/// Expands a surface formula against a session's definitions.
pub fn expand_in_session(session: &Session, expr: &Expr, attrs: Attrs) -> crate::Result<Formula> {
    let env = Env::new(&session.defs, attrs);
    env.expand_expr(
        expr,
        &Rc::new(HashMap::new()),
        session.defs.len(),
        &mut Vec::new(),
    )
}

/// An argument captured at its call site: the unevaluated expression plus
/// the parameter bindings and definition-order horizon it was written
/// under.
#[derive(Clone)]
struct Capture {
    expr: Expr,
    bindings: Rc<HashMap<String, Capture>>,
    limit: usize,
}

struct Env<'a> {
    by_name: HashMap<&'a str, (usize, &'a Def)>,
    attrs: Attrs<'a>,
}

impl<'a> Env<'a> {
    fn new(defs: &'a [Def], attrs: Attrs<'a>) -> Self {
        let by_name = defs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.name.as_str(), (i, d)))
            .collect();
        Env { by_name, attrs }
    }

    /// Expands every definition body with parameters bound to an opaque
    /// atom, so unknown names, arity errors and self-reference surface
    /// even for definitions no `Check` uses. Definitions that apply a
    /// parameter to arguments are validated at their call sites instead.
    fn validate_defs(&self) -> crate::Result<()> {
        for (i, def) in self.by_name.values().map(|&(i, d)| (i, d)) {
            let placeholder = Capture {
                expr: Expr::Pred {
                    name: "border".into(),
                    loc: def.loc,
                },
                bindings: Rc::new(HashMap::new()),
                limit: 0,
            };
            let bindings: HashMap<String, Capture> = def
                .params
                .iter()
                .map(|p| (p.clone(), placeholder.clone()))
                .collect();
            let mut stack = vec![def.name.clone()];
            match self.expand_expr(&def.body, &Rc::new(bindings), i, &mut stack) {
                Ok(_) => {}
                // a parameter used as a macro has no placeholder; such
                // definitions are checked where they are called
                Err(crate::Error::Eval(EvalError::Parameter(msg)))
                    if msg.contains("applied to arguments") => {}
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    /// Resolves a captured parameter that is being applied to arguments:
    /// it must (possibly through further parameters) name a definition.
    fn resolve_callable(&self, cap: &Capture, at: Loc) -> crate::Result<(usize, &'a Def)> {
        match &cap.expr {
            Expr::Name { name, args, loc } if args.is_empty() => {
                if let Some(inner) = cap.bindings.get(name) {
                    self.resolve_callable(inner, at)
                } else {
                    match self.by_name.get(name.as_str()) {
                        Some(&(order, def)) if order < cap.limit => Ok((order, def)),
                        _ => Err(EvalError::UnknownName {
                            name: name.clone(),
                            loc: *loc,
                        }
                        .into()),
                    }
                }
            }
            _ => Err(EvalError::Parameter(format!(
                "at {at}: a parameter bound to a non-name formula is applied to arguments"
            ))
            .into()),
        }
    }

    fn expand_expr(
        &self,
        expr: &Expr,
        bindings: &Rc<HashMap<String, Capture>>,
        limit: usize,
        stack: &mut Vec<String>,
    ) -> crate::Result<Formula> {
        Ok(match expr {
            Expr::True => Formula::tt(),
            Expr::False => Formula::ff(),
            Expr::Pred { name, loc } => {
                if name == "border" {
                    Formula::Border
                } else {
                    return Err(EvalError::UnknownPredicate {
                        name: name.clone(),
                        loc: *loc,
                    }
                    .into());
                }
            }
            Expr::Assertion {
                attr,
                cmp,
                value,
                loc,
            } => {
                if let Some(attrs) = self.attrs {
                    if !attrs.iter().any(|a| a == attr) {
                        return Err(EvalError::UnknownAttribute {
                            name: attr.clone(),
                            loc: Some(*loc),
                        }
                        .into());
                    }
                }
                Formula::assertion(attr.clone(), *cmp, *value)
            }
            Expr::Name { name, args, loc } => {
                // parameters shadow global definitions
                let target = if let Some(cap) = bindings.get(name) {
                    if args.is_empty() {
                        return self.expand_expr(
                            &cap.expr.clone(),
                            &cap.bindings.clone(),
                            cap.limit,
                            stack,
                        );
                    }
                    self.resolve_callable(cap, *loc)?
                } else {
                    match self.by_name.get(name.as_str()) {
                        None => {
                            return Err(EvalError::UnknownName {
                                name: name.clone(),
                                loc: *loc,
                            }
                            .into())
                        }
                        Some(&(order, _)) if order >= limit => {
                            // either self-reference or a forward reference
                            return Err(if stack.iter().any(|s| s == name) {
                                let mut cycle = stack.clone();
                                cycle.push(name.clone());
                                EvalError::RecursiveDefinition { cycle, loc: *loc }.into()
                            } else {
                                EvalError::UnknownName {
                                    name: name.clone(),
                                    loc: *loc,
                                }
                                .into()
                            });
                        }
                        Some(&(order, def)) => (order, def),
                    }
                };
                let (order, def) = target;
                if def.params.len() != args.len() {
                    return Err(EvalError::ArityMismatch {
                        name: name.clone(),
                        expected: def.params.len(),
                        found: args.len(),
                        loc: *loc,
                    }
                    .into());
                }
                let inner: HashMap<String, Capture> = def
                    .params
                    .iter()
                    .zip(args)
                    .map(|(p, a)| {
                        (
                            p.clone(),
                            Capture {
                                expr: a.clone(),
                                bindings: bindings.clone(),
                                limit,
                            },
                        )
                    })
                    .collect();
                stack.push(def.name.clone());
                let out = self.expand_expr(&def.body, &Rc::new(inner), order, stack)?;
                stack.pop();
                out
            }
            Expr::Not(e) => Formula::not(self.expand_expr(e, bindings, limit, stack)?),
            Expr::And(a, b) => Formula::and(
                self.expand_expr(a, bindings, limit, stack)?,
                self.expand_expr(b, bindings, limit, stack)?,
            ),
            Expr::Or(a, b) => Formula::or(
                self.expand_expr(a, bindings, limit, stack)?,
                self.expand_expr(b, bindings, limit, stack)?,
            ),
            Expr::Near(e) => Formula::near(self.expand_expr(e, bindings, limit, stack)?),
            Expr::Interior(e) => Formula::interior(self.expand_expr(e, bindings, limit, stack)?),
            Expr::Surrounded(a, b) => Formula::surrounded(
                self.expand_expr(a, bindings, limit, stack)?,
                self.expand_expr(b, bindings, limit, stack)?,
            ),
            Expr::Reach(a, b) => Formula::reach(
                self.expand_expr(a, bindings, limit, stack)?,
                self.expand_expr(b, bindings, limit, stack)?,
            ),
            Expr::Touch(a, b) => Formula::touch(
                self.expand_expr(a, bindings, limit, stack)?,
                self.expand_expr(b, bindings, limit, stack)?,
            ),
            Expr::Dist {
                metric,
                interval,
                arg,
                ..
            } => Formula::dist(
                *metric,
                *interval,
                self.expand_expr(arg, bindings, limit, stack)?,
            ),
            Expr::Scmp {
                attr_sphere,
                restrict,
                radius,
                cmp,
                threshold,
                min,
                max,
                bins,
                attr_target,
                target,
                loc,
            } => {
                if let Some(attrs) = self.attrs {
                    for attr in [attr_sphere, attr_target] {
                        if !attrs.iter().any(|a| a == attr) {
                            return Err(EvalError::UnknownAttribute {
                                name: attr.clone(),
                                loc: Some(*loc),
                            }
                            .into());
                        }
                    }
                }
                Formula::Scmp {
                    params: crate::formula::ScmpParams {
                        attr_sphere: attr_sphere.clone(),
                        attr_target: attr_target.clone(),
                        radius: (*radius).into(),
                        cmp: *cmp,
                        threshold: (*threshold).into(),
                        min: (*min).into(),
                        max: (*max).into(),
                        bins: *bins,
                    },
                    restrict: Box::new(self.expand_expr(restrict, bindings, limit, stack)?),
                    target: Box::new(self.expand_expr(target, bindings, limit, stack)?),
                }
            }
        })
    }
}
