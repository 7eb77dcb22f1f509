//! Surface syntax: `\x y. body`, left-associative application, `#` comments.
//!
//! ```text
//! term  := lam | app
//! lam   := ('\' | 'λ') ident+ '.' term
//! app   := atom+
//! atom  := ident | '(' term ')'
//! ident := [A-Za-z_][A-Za-z0-9_']*
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::term::{Name, Term, TermKind, RESERVED_MARK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(String),
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char, reserved: bool) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || (reserved && c == RESERVED_MARK)
}

fn tokenize(src: &str, reserved: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        match c {
            '#' => {
                while let Some(&(_, c)) = it.peek() {
                    if c == '\n' {
                        break;
                    }
                    it.next();
                }
            }
            c if c.is_whitespace() => {
                it.next();
            }
            '\\' | 'λ' => {
                it.next();
                toks.push((pos, Tok::Lambda));
            }
            '.' => {
                it.next();
                toks.push((pos, Tok::Dot));
            }
            '(' => {
                it.next();
                toks.push((pos, Tok::LParen));
            }
            ')' => {
                it.next();
                toks.push((pos, Tok::RParen));
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if !is_ident_continue(c, reserved) {
                        break;
                    }
                    s.push(c);
                    it.next();
                }
                toks.push((pos, Tok::Ident(s)));
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: pos,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    scope: Vec<Name>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut acc = match self.atom()? {
            Some(t) => t,
            None => return self.err("expected a term"),
        };
        loop {
            if self.peek() == Some(&Tok::Lambda) {
                let body = self.lambda()?;
                return Ok(Term::app(acc, body));
            }
            match self.atom()? {
                Some(t) => acc = Term::app(acc, t),
                None => return Ok(acc),
            }
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.pos += 1;
        let mut binders = Vec::new();
        while let Some(Tok::Ident(s)) = self.peek() {
            binders.push(Name::new(s));
            self.pos += 1;
        }
        if binders.is_empty() {
            return self.err("expected a binder after lambda");
        }
        if self.peek() != Some(&Tok::Dot) {
            return self.err("expected '.' after binders");
        }
        self.pos += 1;
        let n = binders.len();
        self.scope.extend(binders.iter().cloned());
        let body = self.term();
        self.scope.truncate(self.scope.len() - n);
        let body = body?;
        Ok(binders.into_iter().rev().fold(body, |acc, b| Term::lam_db(b, acc)))
    }

    fn atom(&mut self) -> Result<Option<Term>, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let name = Name::new(s);
                self.pos += 1;
                let t = match self.scope.iter().rev().position(|b| *b == name) {
                    Some(i) => Term::bound(i as u32),
                    None => Term::var(name),
                };
                Ok(Some(t))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(Some(t))
            }
            _ => Ok(None),
        }
    }
}

fn parse_with(src: &str, reserved: bool) -> Result<Term, ParseError> {
    let toks = tokenize(src, reserved)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
        scope: Vec::new(),
    };
    let t = p.term()?;
    if p.pos != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// Parses the surface grammar.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    parse_with(src, false)
}

/// Like [`parse`] but also accepts machine-generated (reserved) names, so
/// printed witnesses can be read back.
pub fn parse_lenient(src: &str) -> Result<Term, ParseError> {
    parse_with(src, true)
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Term, ParseError> {
        parse(s)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    Top,
    Fun,
    Arg,
}

pub(crate) fn pick_name(hint: &Name, free: &BTreeSet<Name>, scope: &[Name]) -> Name {
    let mut c = hint.clone();
    while free.contains(&c) || scope.contains(&c) {
        c = c.primed();
    }
    c
}

struct Printer<'a> {
    free: &'a BTreeSet<Name>,
    scope: Vec<Name>,
}

impl Printer<'_> {
    fn write(&mut self, out: &mut fmt::Formatter<'_>, t: &Term, pos: Pos) -> fmt::Result {
        match t.kind() {
            TermKind::Bound(i) => {
                let i = *i as usize;
                match self.scope.len().checked_sub(i + 1) {
                    Some(j) => write!(out, "{}", self.scope[j]),
                    None => write!(out, "#{}", i - self.scope.len()),
                }
            }
            TermKind::Free(n) => write!(out, "{n}"),
            TermKind::Lam(..) => {
                if pos != Pos::Top {
                    out.write_str("(")?;
                }
                out.write_str("\\")?;
                let mut body = t;
                let mut n = 0;
                while let TermKind::Lam(hint, b) = body.kind() {
                    let name = pick_name(hint, self.free, &self.scope);
                    if n > 0 {
                        out.write_str(" ")?;
                    }
                    write!(out, "{name}")?;
                    self.scope.push(name);
                    body = b;
                    n += 1;
                }
                out.write_str(". ")?;
                let r = self.write(out, body, Pos::Top);
                self.scope.truncate(self.scope.len() - n);
                r?;
                if pos != Pos::Top {
                    out.write_str(")")?;
                }
                Ok(())
            }
            TermKind::App(f, a) => {
                if pos == Pos::Arg {
                    out.write_str("(")?;
                }
                self.write(out, f, Pos::Fun)?;
                out.write_str(" ")?;
                self.write(out, a, Pos::Arg)?;
                if pos == Pos::Arg {
                    out.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    /// Minimal parentheses; binder hints are primed when they would clash
    /// with a free name or an enclosing binder.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free = self.free_vars();
        Printer {
            free: &free,
            scope: Vec::new(),
        }
        .write(f, self, Pos::Top)
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let s = String::deserialize(d)?;
        parse_lenient(&s).map_err(serde::de::Error::custom)
    }
}

impl serde::Serialize for Name {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> serde::Deserialize<'de> for Name {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Name, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Name::new(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn identity() {
        assert_eq!(p("\\x. x"), Term::lam("x", Term::var("x")));
        assert_eq!(p("λx.x").to_string(), "\\x. x");
    }

    #[test]
    fn delta_prints_with_its_own_names() {
        let delta = p("\\y x. x (y x)");
        let expected = Term::lams(
            &["y", "x"],
            Term::app(Term::var("x"), Term::app(Term::var("y"), Term::var("x"))),
        );
        assert_eq!(delta, expected);
        assert_eq!(delta.to_string(), "\\y x. x (y x)");
    }

    #[test]
    fn omega() {
        let half = Term::lam("x", Term::app(Term::var("x"), Term::var("x")));
        assert_eq!(p("(\\x. x x) (\\x. x x)"), Term::app(half.clone(), half));
        assert_eq!(p("\\x. x x").to_string(), "\\x. x x");
    }

    #[test]
    fn application_is_left_associative_and_lambda_extends_right() {
        assert_eq!(
            p("a b c"),
            Term::app(Term::app(Term::var("a"), Term::var("b")), Term::var("c"))
        );
        assert_eq!(
            p("\\x. a x b"),
            Term::lam(
                "x",
                Term::app(Term::app(Term::var("a"), Term::var("x")), Term::var("b"))
            )
        );
        // trailing abstraction without parentheses
        assert_eq!(p("f \\x. x"), p("f (\\x. x)"));
    }

    #[test]
    fn comments_and_primes() {
        let t = p("# a comment\n\\x'. x' # trailing\n");
        assert_eq!(t.to_string(), "\\x'. x'");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("  # only a comment"), Err(ParseError::Empty));
        assert!(matches!(parse("\\. x"), Err(ParseError::Syntax { offset: 1, .. })));
        assert!(matches!(parse("(x"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse("x )"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse("x$"), Err(ParseError::Syntax { offset: 1, .. })));
        assert!(parse("x^").is_err());
        assert_eq!(parse_lenient("x^").unwrap(), Term::var(Name::reserved("x")));
    }

    #[test]
    fn printer_renames_to_avoid_free_names() {
        let t = Term::lam("y", Term::var("x")).substitute(&Name::new("x"), &Term::var("y"));
        assert_eq!(t.to_string(), "\\y'. y");
        assert_eq!(p("\\x. \\x. x").to_string(), "\\x x'. x'");
        assert_eq!(p("(\\x. x) (\\y. y) z").to_string(), "(\\x. x) (\\y. y) z");
        assert_eq!(p("f (g h)").to_string(), "f (g h)");
    }
}
