//! Concrete syntax for terms, goals and contexts.
//!
//! Terms are written in prefix form `f(x,g(0))`. Which identifiers denote
//! variables is decided by a [`VarNaming`]. Marked symbols (`f#`) and hole
//! symbols (`□`, `□'`) are only accepted when explicitly enabled.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{Context, Goal, Symbol, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// How identifiers are classified as variables.
#[derive(Debug, Clone)]
pub enum VarNaming {
    /// Exactly the listed identifiers are variables.
    Declared(BTreeSet<String>),
    /// Identifiers starting with an uppercase letter or `_` are variables.
    Prolog,
}

impl VarNaming {
    pub fn declared<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> VarNaming {
        VarNaming::Declared(names.into_iter().map(|s| s.as_ref().to_string()).collect())
    }

    fn is_var(&self, ident: &str) -> bool {
        match self {
            VarNaming::Declared(names) => names.contains(ident),
            VarNaming::Prolog => ident.starts_with(|c: char| c.is_ascii_uppercase() || c == '_'),
        }
    }
}

/// Lexical flavour of identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Lexicon {
    /// Anything except whitespace, parentheses, commas, `#`, `"` and `□`.
    Trs,
    /// Letters, digits and `_`.
    Prolog,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Extensions {
    pub marked: bool,
    pub holes: bool,
}

/// A character cursor tracking line and column.
pub(crate) struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    column: usize,
    comment: Option<char>,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str, comment: Option<char>) -> Cursor<'a> {
        Cursor { text, pos: 0, line: 1, column: 1, comment }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(c) if Some(c) == self.comment => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    /// Consumes `token` (after whitespace) if it comes next.
    pub(crate) fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            for _ in token.chars() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`{}", self.found())))
        }
    }

    pub(crate) fn found(&self) -> String {
        match self.peek() {
            Some(c) => format!(", found `{c}`"),
            None => ", found end of input".to_string(),
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    pub(crate) fn ident(&mut self, lexicon: Lexicon) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            let ok = match lexicon {
                Lexicon::Trs => {
                    !(c.is_whitespace() || "(),#\"□".contains(c) || self.rest().starts_with("->"))
                }
                Lexicon::Prolog => c.is_alphanumeric() || c == '_',
            };
            if !ok {
                break;
            }
            self.bump();
        }
        (self.pos > start).then(|| self.text[start..self.pos].to_string())
    }
}

/// Parses one term at the cursor.
pub(crate) fn term_at(
    cur: &mut Cursor<'_>,
    vars: &VarNaming,
    lexicon: Lexicon,
    ext: Extensions,
) -> Result<Term, ParseError> {
    cur.skip_ws();
    if ext.holes && cur.eat("□") {
        return Ok(Term::hole(cur.eat("'")));
    }
    let (line, column) = (cur.line, cur.column);
    let Some(name) = cur.ident(lexicon) else {
        return Err(cur.error(format!("expected a term{}", cur.found())));
    };
    let marked = cur.peek() == Some('#');
    if marked {
        if !ext.marked {
            return Err(cur.error(format!("marked symbol `{name}#` is not allowed here")));
        }
        cur.bump();
    }
    let has_args = cur.eat("(");
    if vars.is_var(&name) && !marked {
        if has_args {
            return Err(ParseError {
                line,
                column,
                message: format!("variable `{name}` cannot take arguments"),
            });
        }
        return Ok(Term::Var(Var::new(&name)));
    }
    let mut args = Vec::new();
    if has_args && !cur.eat(")") {
        loop {
            args.push(term_at(cur, vars, lexicon, ext)?);
            if cur.eat(")") {
                break;
            }
            cur.expect(",")?;
        }
    }
    let symbol = Symbol::new(&name, args.len());
    let symbol = if marked { symbol.marked() } else { symbol };
    Ok(Term::App(symbol, args.into()))
}

fn whole<T>(
    text: &str,
    parse: impl FnOnce(&mut Cursor<'_>) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut cur = Cursor::new(text, None);
    let value = parse(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error(format!("unexpected trailing input{}", cur.found())));
    }
    Ok(value)
}

const FULL: Extensions = Extensions { marked: true, holes: false };

/// Parses a term; identifiers listed in `vars` are variables.
pub fn parse_term(text: &str, vars: &[&str]) -> Result<Term, ParseError> {
    parse_term_with(text, &VarNaming::declared(vars.iter()))
}

/// Parses a term (marked symbols allowed) under an explicit naming.
pub fn parse_term_with(text: &str, vars: &VarNaming) -> Result<Term, ParseError> {
    whole(text, |cur| term_at(cur, vars, Lexicon::Trs, FULL))
}

/// Parses a goal written `<t1,...,tn>` (`<>` is the empty goal). Symbols
/// inside goals are restricted to letters, digits and `_`.
pub fn parse_goal(text: &str, vars: &[&str]) -> Result<Goal, ParseError> {
    parse_goal_with(text, &VarNaming::declared(vars.iter()))
}

pub fn parse_goal_with(text: &str, vars: &VarNaming) -> Result<Goal, ParseError> {
    whole(text, |cur| {
        cur.expect("<")?;
        let mut terms = Vec::new();
        if !cur.eat(">") {
            loop {
                terms.push(term_at(cur, vars, Lexicon::Prolog, FULL)?);
                if cur.eat(">") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        Ok(Goal(terms))
    })
}

/// Parses a context containing `□` and possibly `□'`.
pub fn parse_context(text: &str, vars: &[&str]) -> Result<Context, ParseError> {
    parse_context_with(text, &VarNaming::declared(vars.iter()))
}

pub fn parse_context_with(text: &str, vars: &VarNaming) -> Result<Context, ParseError> {
    let ext = Extensions { marked: true, holes: true };
    let body = whole(text, |cur| term_at(cur, vars, Lexicon::Trs, ext))?;
    Context::from_body(body).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_round_trip() {
        let t = parse_term("g(h(f(x),0),x)", &["x"]).unwrap();
        assert_eq!(t.to_string(), "g(h(f(x),0),x)");
        assert_eq!(t.size(), 6);
        let m = parse_term(" F#( x , f(x) ) ", &["x"]).unwrap();
        assert!(m.root_symbol().unwrap().is_marked());
        assert_eq!(m.to_string(), "F#(x,f(x))");
    }

    #[test]
    fn errors_carry_locations() {
        let err = parse_term("f(x,0", &["x"]).unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));
        assert!(parse_term("x(0)", &["x"]).is_err());
        assert!(parse_term("f(x) g", &["x"]).is_err());
    }

    #[test]
    fn goals_and_contexts() {
        let g = parse_goal("<p(x),q(x)>", &["x"]).unwrap();
        assert_eq!(g.len(), 2);
        assert!(parse_goal("<>", &[]).unwrap().is_empty());
        let c = parse_context("f(□,□',□)", &[]).unwrap();
        assert_eq!(c.holes(), crate::term::Holes::Two);
        assert!(parse_context("f(x)", &["x"]).is_err());
        assert!(parse_term("f(□)", &[]).is_err());
    }

    #[test]
    fn prolog_naming() {
        let t = parse_term_with("p(f(X,0),_y)", &VarNaming::Prolog).unwrap();
        assert_eq!(t.vars().len(), 2);
    }
}
