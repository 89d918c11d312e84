//! Hand-rolled scanner for session files.
//!
//! The parser drives the lexer one token at a time; `Output` filenames
//! are scanned in a raw mode since they are not quoted in the concrete
//! syntax. Line comments start with `//`. String literals may span
//! lines (model declarations are sometimes wrapped).

use crate::error::{Loc, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Bang,
    Amp,
    Pipe,
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
}

impl Lexer {
    pub fn new(text: &str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    pub fn loc(&self) -> Loc {
        Loc {
            line: self.line,
            col: self.col,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.chars.get(self.pos + 1) == Some(&'/') => {
                    while let Some(c) = self.peek_char() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn err(&self, loc: Loc, message: impl Into<String>) -> ParseError {
        ParseError {
            loc,
            message: message.into(),
        }
    }

    pub fn next_token(&mut self) -> Result<(Tok, Loc), ParseError> {
        self.skip_trivia();
        let loc = self.loc();
        let Some(c) = self.peek_char() else {
            return Ok((Tok::Eof, loc));
        };
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = self.peek_char() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            return Ok((Tok::Ident(s), loc));
        }
        if c.is_ascii_digit() || (c == '-' && matches!(self.chars.get(self.pos + 1), Some(d) if d.is_ascii_digit()))
        {
            return Ok((self.number(loc)?, loc));
        }
        match c {
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(self.err(loc, "unterminated string literal")),
                    }
                }
                Ok((Tok::Str(s), loc))
            }
            '(' => {
                self.bump();
                Ok((Tok::LParen, loc))
            }
            ')' => {
                self.bump();
                Ok((Tok::RParen, loc))
            }
            '[' => {
                self.bump();
                Ok((Tok::LBracket, loc))
            }
            ']' => {
                self.bump();
                Ok((Tok::RBracket, loc))
            }
            ',' => {
                self.bump();
                Ok((Tok::Comma, loc))
            }
            ';' => {
                self.bump();
                Ok((Tok::Semi, loc))
            }
            '!' => {
                self.bump();
                Ok((Tok::Bang, loc))
            }
            '&' => {
                self.bump();
                Ok((Tok::Amp, loc))
            }
            '|' => {
                self.bump();
                Ok((Tok::Pipe, loc))
            }
            '=' => {
                self.bump();
                Ok((Tok::Eq, loc))
            }
            '<' => {
                self.bump();
                if self.peek_char() == Some('=') {
                    self.bump();
                    Ok((Tok::Le, loc))
                } else {
                    Ok((Tok::Lt, loc))
                }
            }
            '>' => {
                self.bump();
                if self.peek_char() == Some('=') {
                    self.bump();
                    Ok((Tok::Ge, loc))
                } else {
                    Ok((Tok::Gt, loc))
                }
            }
            other => Err(self.err(loc, format!("unexpected character `{other}`"))),
        }
    }

    fn number(&mut self, loc: Loc) -> Result<Tok, ParseError> {
        let mut s = String::new();
        if self.peek_char() == Some('-') {
            s.push('-');
            self.bump();
        }
        while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        if self.peek_char() == Some('.')
            && matches!(self.chars.get(self.pos + 1), Some(d) if d.is_ascii_digit())
        {
            s.push(self.bump().unwrap());
            while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
                s.push(self.bump().unwrap());
            }
        }
        if matches!(self.peek_char(), Some('e' | 'E')) {
            let mut ahead = self.pos + 1;
            if matches!(self.chars.get(ahead), Some('+' | '-')) {
                ahead += 1;
            }
            if matches!(self.chars.get(ahead), Some(d) if d.is_ascii_digit()) {
                s.push(self.bump().unwrap());
                if matches!(self.peek_char(), Some('+' | '-')) {
                    s.push(self.bump().unwrap());
                }
                while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
                    s.push(self.bump().unwrap());
                }
            }
        }
        s.parse::<f64>()
            .map(Tok::Number)
            .map_err(|_| self.err(loc, format!("invalid number literal `{s}`")))
    }

    /// Scans a raw filename token (used after `Output`, whose argument is
    /// unquoted): everything up to the next whitespace, `;` or EOF.
    pub fn take_path(&mut self) -> Result<(String, Loc), ParseError> {
        self.skip_trivia();
        let loc = self.loc();
        let mut s = String::new();
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() || c == ';' {
                break;
            }
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return Err(self.err(loc, "expected a file name".to_string()));
        }
        Ok((s, loc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(text: &str) -> Vec<Tok> {
        let mut lx = Lexer::new(text);
        let mut out = Vec::new();
        loop {
            let (t, _) = lx.next_token().unwrap();
            if t == Tok::Eof {
                return out;
            }
            out.push(t);
        }
    }

    #[test]
    fn scans_operators_and_idents() {
        let ts = toks("Let flt(a) = MDDT(!(MDDT(!a,<1)),<1);");
        assert_eq!(ts[0], Tok::Ident("Let".into()));
        assert_eq!(ts[1], Tok::Ident("flt".into()));
        assert!(ts.contains(&Tok::Le) == false);
        assert!(ts.contains(&Tok::Lt));
        assert_eq!(*ts.last().unwrap(), Tok::Semi);
    }

    #[test]
    fn scans_comparators() {
        assert_eq!(
            toks("<= >= < > ="),
            vec![Tok::Le, Tok::Ge, Tok::Lt, Tok::Gt, Tok::Eq]
        );
    }

    #[test]
    fn scans_numbers() {
        assert_eq!(
            toks("2 3.0 0.01 -1 1e-3"),
            vec![
                Tok::Number(2.0),
                Tok::Number(3.0),
                Tok::Number(0.01),
                Tok::Number(-1.0),
                Tok::Number(0.001)
            ]
        );
    }

    #[test]
    fn strings_may_span_lines() {
        let ts = toks("\"med:ADC=a.nii,\n  ROI=b.nii\"");
        assert_eq!(ts.len(), 1);
        match &ts[0] {
            Tok::Str(s) => assert!(s.contains('\n')),
            _ => panic!(),
        }
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(toks("// a comment\nTT // tail\n"), vec![Tok::Ident("TT".into())]);
    }

    #[test]
    fn tracks_locations() {
        let mut lx = Lexer::new("ab\n  cd");
        let (_, l1) = lx.next_token().unwrap();
        assert_eq!((l1.line, l1.col), (1, 1));
        let (_, l2) = lx.next_token().unwrap();
        assert_eq!((l2.line, l2.col), (2, 3));
    }

    #[test]
    fn takes_raw_paths() {
        let mut lx = Lexer::new("  GBM-seg.nii\nCheck");
        let (p, _) = lx.take_path().unwrap();
        assert_eq!(p, "GBM-seg.nii");
        let (t, _) = lx.next_token().unwrap();
        assert_eq!(t, Tok::Ident("Check".into()));
    }
}
