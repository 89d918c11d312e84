//! Recursive-descent parser for session files.
//!
//! Binding strength, loosest to tightest: the spatial binaries `S R T`,
//! then `|`, then `&`, then the prefix operators `! N I`, then atoms.
//! `Let` definitions, `Model` declarations and `Check` directives end
//! with `;`; the `Output` filename stands on its own, with an optional
//! trailing `;` accepted.

use crate::error::{Loc, ParseError};
use crate::formula::{Cmp, Interval, Metric};

use super::ast::{CheckDecl, Def, Expr, ModelDecl, OutputDecl, Session};
use super::lexer::{Lexer, Tok};

/// Names with fixed meaning in formulas or at statement level; they
/// cannot be defined or used as parameters.
pub const RESERVED_WORDS: &[&str] = &[
    "Let", "Model", "Check", "Output", "N", "S", "I", "R", "T", "TT", "FF", "EDT", "MDDT", "SCMP",
    "border",
];

pub fn parse(text: &str) -> crate::Result<Session> {
    let mut p = Parser::new(text);
    let session = p.session()?;
    Ok(session)
}

/// Parses a single formula; the whole input must be consumed.
pub fn parse_formula(text: &str) -> crate::Result<Expr> {
    let mut p = Parser::new(text);
    let e = p.formula()?;
    let (tok, loc) = p.next()?;
    if tok != Tok::Eof {
        return Err(p.unexpected(&tok, loc, "end of input").into());
    }
    Ok(e)
}

struct Parser {
    lexer: Lexer,
    peeked: Option<(Tok, Loc)>,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            lexer: Lexer::new(text),
            peeked: None,
        }
    }

    fn next(&mut self) -> Result<(Tok, Loc), ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next_token(),
        }
    }

    fn peek(&mut self) -> Result<&(Tok, Loc), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn err(&self, loc: Loc, message: impl Into<String>) -> ParseError {
        ParseError {
            loc,
            message: message.into(),
        }
    }

    fn unexpected(&self, tok: &Tok, loc: Loc, expected: &str) -> ParseError {
        self.err(loc, format!("expected {expected}, found {}", tok.describe()))
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<Loc, ParseError> {
        let (tok, loc) = self.next()?;
        if tok == want {
            Ok(loc)
        } else {
            Err(self.unexpected(&tok, loc, expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, Loc), ParseError> {
        let (tok, loc) = self.next()?;
        match tok {
            Tok::Ident(s) => Ok((s, loc)),
            other => Err(self.unexpected(&other, loc, expected)),
        }
    }

    fn number(&mut self, expected: &str) -> Result<(f64, Loc), ParseError> {
        let (tok, loc) = self.next()?;
        match tok {
            Tok::Number(n) => Ok((n, loc)),
            other => Err(self.unexpected(&other, loc, expected)),
        }
    }

    fn session(&mut self) -> crate::Result<Session> {
        let mut session = Session {
            model: None,
            defs: Vec::new(),
            output: None,
            checks: Vec::new(),
        };
        loop {
            let (tok, loc) = self.next()?;
            match tok {
                Tok::Eof => break,
                Tok::Ident(kw) => match kw.as_str() {
                    "Model" => {
                        if session.model.is_some() {
                            return Err(self
                                .err(loc, "a session may declare only one `Model`")
                                .into());
                        }
                        session.model = Some(self.model_decl(loc)?);
                    }
                    "Output" => {
                        if session.output.is_some() {
                            return Err(self
                                .err(loc, "a session may declare only one `Output`")
                                .into());
                        }
                        let (path, ploc) = self.lexer.take_path()?;
                        if let (Tok::Semi, _) = self.peek()? {
                            self.next()?;
                        }
                        session.output = Some(OutputDecl { path, loc: ploc });
                    }
                    "Check" => {
                        let (tok, sloc) = self.next()?;
                        let label = match tok {
                            Tok::Str(s) => s,
                            other => {
                                return Err(self
                                    .unexpected(&other, sloc, "a quoted label after `Check`")
                                    .into())
                            }
                        };
                        let expr = self.formula()?;
                        self.expect(Tok::Semi, "`;` after the Check directive")?;
                        session.checks.push(CheckDecl { label, expr, loc });
                    }
                    "Let" => {
                        let def = self.let_def(loc)?;
                        if session.defs.iter().any(|d| d.name == def.name) {
                            return Err(self
                                .err(def.loc, format!("duplicate definition of `{}`", def.name))
                                .into());
                        }
                        session.defs.push(def);
                    }
                    other => {
                        return Err(self
                            .err(
                                loc,
                                format!(
                                    "expected `Model`, `Let`, `Output` or `Check`, found `{other}`"
                                ),
                            )
                            .into())
                    }
                },
                other => {
                    return Err(self
                        .unexpected(&other, loc, "`Model`, `Let`, `Output` or `Check`")
                        .into())
                }
            }
        }
        Ok(session)
    }

    fn model_decl(&mut self, loc: Loc) -> Result<ModelDecl, ParseError> {
        let (tok, sloc) = self.next()?;
        let spec = match tok {
            Tok::Str(s) => s,
            other => return Err(self.unexpected(&other, sloc, "a quoted model specification")),
        };
        self.expect(Tok::Semi, "`;` after the Model declaration")?;
        let Some((kind, rest)) = spec.split_once(':') else {
            return Err(self.err(
                sloc,
                "model specification must look like \"kind:name=file,...\"",
            ));
        };
        let mut bindings = Vec::new();
        for entry in rest.split(',') {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let Some((name, path)) = entry.split_once('=') else {
                return Err(self.err(
                    sloc,
                    format!("model binding `{entry}` must look like name=file"),
                ));
            };
            let name = name.trim().to_string();
            let path = path.trim().to_string();
            if bindings.iter().any(|(n, _)| *n == name) {
                return Err(self.err(sloc, format!("duplicate attribute `{name}` in Model")));
            }
            bindings.push((name, path));
        }
        if bindings.is_empty() {
            return Err(self.err(sloc, "model declaration binds no attributes"));
        }
        Ok(ModelDecl {
            kind: kind.trim().to_string(),
            bindings,
            loc,
        })
    }

    fn let_def(&mut self, loc: Loc) -> Result<Def, ParseError> {
        let (name, nloc) = self.ident("a definition name after `Let`")?;
        if RESERVED_WORDS.contains(&name.as_str()) {
            return Err(self.err(nloc, format!("`{name}` is reserved and cannot be defined")));
        }
        let mut params = Vec::new();
        if let (Tok::LParen, _) = self.peek()? {
            self.next()?;
            loop {
                let (p, ploc) = self.ident("a parameter name")?;
                if RESERVED_WORDS.contains(&p.as_str()) {
                    return Err(
                        self.err(ploc, format!("`{p}` is reserved and cannot be a parameter"))
                    );
                }
                if params.contains(&p) {
                    return Err(self.err(ploc, format!("duplicate parameter `{p}`")));
                }
                params.push(p);
                let (tok, tloc) = self.next()?;
                match tok {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    other => return Err(self.unexpected(&other, tloc, "`,` or `)`")),
                }
            }
        }
        self.expect(Tok::Eq, "`=` in the definition")?;
        let body = self.formula()?;
        self.expect(Tok::Semi, "`;` after the definition")?;
        Ok(Def {
            name,
            params,
            body,
            loc,
        })
    }

    fn formula(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.or_level()?;
        loop {
            let op = match self.peek()? {
                (Tok::Ident(s), _) if s == "S" || s == "R" || s == "T" => s.clone(),
                _ => return Ok(lhs),
            };
            self.next()?;
            let rhs = self.or_level()?;
            lhs = match op.as_str() {
                "S" => Expr::Surrounded(Box::new(lhs), Box::new(rhs)),
                "R" => Expr::Reach(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Touch(Box::new(lhs), Box::new(rhs)),
            };
        }
    }

    fn or_level(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and_level()?;
        while let (Tok::Pipe, _) = self.peek()? {
            self.next()?;
            let rhs = self.and_level()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_level(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.prefix_level()?;
        while let (Tok::Amp, _) = self.peek()? {
            self.next()?;
            let rhs = self.prefix_level()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix_level(&mut self) -> Result<Expr, ParseError> {
        match self.peek()? {
            (Tok::Bang, _) => {
                self.next()?;
                Ok(Expr::Not(Box::new(self.prefix_level()?)))
            }
            (Tok::Ident(s), _) if s == "N" => {
                self.next()?;
                Ok(Expr::Near(Box::new(self.prefix_level()?)))
            }
            (Tok::Ident(s), _) if s == "I" => {
                self.next()?;
                Ok(Expr::Interior(Box::new(self.prefix_level()?)))
            }
            _ => self.atom(),
        }
    }

    fn cmp(&mut self) -> Result<Cmp, ParseError> {
        let (tok, loc) = self.next()?;
        match tok {
            Tok::Eq => Ok(Cmp::Eq),
            Tok::Lt => Ok(Cmp::Lt),
            Tok::Gt => Ok(Cmp::Gt),
            Tok::Le => Ok(Cmp::Le),
            Tok::Ge => Ok(Cmp::Ge),
            other => Err(self.unexpected(&other, loc, "a comparison operator")),
        }
    }

    fn dist_atom(&mut self, metric: Metric, loc: Loc) -> Result<Expr, ParseError> {
        let name = match metric {
            Metric::Euclidean => "EDT",
            Metric::Chamfer => "MDDT",
        };
        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
        let arg = self.formula()?;
        self.expect(Tok::Comma, "`,` before the distance bound")?;
        let cmp = self.cmp()?;
        let (value, vloc) = self.number("a distance constant")?;
        let interval = Interval::from_cmp(cmp, value)
            .map_err(|e| self.err(vloc, format!("{e} (in `{name}`)")))?;
        self.expect(Tok::RParen, &format!("`)` closing `{name}`"))?;
        Ok(Expr::Dist {
            metric,
            interval,
            arg: Box::new(arg),
            loc,
        })
    }

    fn scmp_atom(&mut self, loc: Loc) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen, "`(` after `SCMP`")?;
        let (attr_sphere, _) = self.ident("an attribute name")?;
        self.expect(Tok::Comma, "`,`")?;
        let restrict = self.formula()?;
        self.expect(Tok::Comma, "`,`")?;
        let (radius, rloc) = self.number("the sphere radius")?;
        if !(radius >= 0.0) {
            return Err(self.err(rloc, format!("sphere radius must be >= 0, got {radius}")));
        }
        self.expect(Tok::Comma, "`,`")?;
        let cmp = self.cmp()?;
        let (threshold, _) = self.number("the correlation threshold")?;
        self.expect(Tok::Comma, "`,`")?;
        let (min, mloc) = self.number("the histogram minimum")?;
        self.expect(Tok::Comma, "`,`")?;
        let (max, _) = self.number("the histogram maximum")?;
        if !(min < max) {
            return Err(self.err(
                mloc,
                format!("histogram range must satisfy m < M, got [{min}, {max})"),
            ));
        }
        self.expect(Tok::Comma, "`,`")?;
        let (bins_f, bloc) = self.number("the number of bins")?;
        if bins_f < 1.0 || bins_f.fract() != 0.0 {
            return Err(self.err(
                bloc,
                format!("bin count must be a positive integer, got {bins_f}"),
            ));
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::LParen, "`(` starting the SCMP target")?;
        let (attr_target, _) = self.ident("an attribute name")?;
        self.expect(Tok::Comma, "`,`")?;
        let target = self.formula()?;
        self.expect(Tok::RParen, "`)` closing the SCMP target")?;
        Ok(Expr::Scmp {
            attr_sphere,
            restrict: Box::new(restrict),
            radius,
            cmp,
            threshold,
            min,
            max,
            bins: bins_f as usize,
            attr_target,
            target: Box::new(target),
            loc,
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, loc) = self.next()?;
        match tok {
            Tok::LParen => {
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::LBracket => {
                let (name, _) = self.ident("an attribute or predicate name")?;
                match self.peek()? {
                    (Tok::RBracket, _) => {
                        self.next()?;
                        Ok(Expr::Pred { name, loc })
                    }
                    _ => {
                        let cmp = self.cmp()?;
                        let (value, _) = self.number("a constant")?;
                        self.expect(Tok::RBracket, "`]`")?;
                        Ok(Expr::Assertion {
                            attr: name,
                            cmp,
                            value,
                            loc,
                        })
                    }
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "TT" => Ok(Expr::True),
                "FF" => Ok(Expr::False),
                "EDT" => self.dist_atom(Metric::Euclidean, loc),
                "MDDT" => self.dist_atom(Metric::Chamfer, loc),
                "SCMP" => self.scmp_atom(loc),
                "Let" | "Model" | "Check" | "Output" | "N" | "I" | "S" | "R" | "T" | "border" => {
                    Err(self.unexpected(&Tok::Ident(name), loc, "a formula"))
                }
                _ => {
                    let mut args = Vec::new();
                    if let (Tok::LParen, _) = self.peek()? {
                        self.next()?;
                        loop {
                            args.push(self.formula()?);
                            let (tok, tloc) = self.next()?;
                            match tok {
                                Tok::Comma => continue,
                                Tok::RParen => break,
                                other => {
                                    return Err(self.unexpected(&other, tloc, "`,` or `)`"))
                                }
                            }
                        }
                    }
                    Ok(Expr::Name { name, args, loc })
                }
            },
            other => Err(self.unexpected(&other, loc, "a formula")),
        }
    }
}
