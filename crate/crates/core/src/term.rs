//! First-order terms, goals, positions and contexts.
//!
//! Terms are immutable values with structurally shared argument slices.
//! Contexts reuse the term representation with two reserved 0-ary hole
//! symbols that no signature, parser or public constructor can produce.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the number of nodes of a term built during analysis.
pub const DEFAULT_MAX_TERM_SIZE: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {position} is not a position of {term}")]
    InvalidPosition { term: String, position: Position },
    #[error("symbol {name} has arity {arity} but was given {given} arguments")]
    ArityMismatch { name: String, arity: usize, given: usize },
    #[error("hole mismatch: {0}")]
    HoleMismatch(String),
    #[error("term of {size} nodes exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("symbol {name} is used with arities {first} and {second}")]
    InconsistentSignature { name: String, first: usize, second: usize },
}

/// A variable, identified by its name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Name with any trailing `_<digits>` freshness suffix removed.
    pub fn base_name(&self) -> &str {
        let name = self.name();
        if let Some(idx) = name.rfind('_') {
            let suffix = &name[idx + 1..];
            if idx > 0 && !suffix.is_empty() && suffix.bytes().all(|b| b.is_ascii_digit()) {
                return &name[..idx];
            }
        }
        name
    }

    /// The first variable `base_k` (k = 1, 2, ...) not accepted by `taken`.
    pub fn fresh_like(&self, taken: impl Fn(&Var) -> bool) -> Var {
        let base = self.base_name();
        (1..)
            .map(|k| Var::new(&format!("{base}_{k}")))
            .find(|v| !taken(v))
            .expect("unbounded search")
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum SymbolKind {
    Base,
    /// Tuple symbol associated with a defined symbol (dependency pairs).
    Marked,
    Hole,
    HolePrime,
}

/// A function symbol with a fixed arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
    kind: SymbolKind,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Symbol {
        assert!(!name.is_empty(), "symbol names are non-empty");
        Symbol { name: Arc::from(name), arity, kind: SymbolKind::Base }
    }

    pub fn constant(name: &str) -> Symbol {
        Symbol::new(name, 0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_marked(&self) -> bool {
        self.kind == SymbolKind::Marked
    }

    fn is_hole(&self) -> bool {
        matches!(self.kind, SymbolKind::Hole | SymbolKind::HolePrime)
    }

    /// The tuple symbol `F` of the same arity associated with `f`.
    pub fn marked(&self) -> Symbol {
        Symbol { kind: SymbolKind::Marked, ..self.clone() }
    }

    /// The base symbol of a marked symbol (identity on base symbols).
    pub fn unmarked(&self) -> Symbol {
        Symbol { kind: SymbolKind::Base, ..self.clone() }
    }

    fn hole(prime: bool) -> Symbol {
        let (name, kind) = if prime {
            ("□'", SymbolKind::HolePrime)
        } else {
            ("□", SymbolKind::Hole)
        };
        Symbol { name: Arc::from(name), arity: 0, kind }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.arity)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.is_marked() {
            f.write_str("#")?;
        }
        Ok(())
    }
}

/// A finite set of symbols with pairwise distinct names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeMap<String, Symbol>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Adds a symbol, failing if its name is already bound to another arity.
    pub fn insert(&mut self, symbol: Symbol) -> Result<(), TermError> {
        let key = symbol.to_string();
        match self.symbols.get(&key) {
            Some(existing) if existing.arity != symbol.arity => {
                Err(TermError::InconsistentSignature {
                    name: key,
                    first: existing.arity,
                    second: symbol.arity,
                })
            }
            Some(_) => Ok(()),
            None => {
                self.symbols.insert(key, symbol);
                Ok(())
            }
        }
    }

    /// Adds every symbol occurring in `term`.
    pub fn extend_from(&mut self, term: &Term) -> Result<(), TermError> {
        for sym in term.symbols() {
            self.insert(sym)?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.symbols.get(&symbol.to_string()) == Some(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// A position: a path of 1-based argument indices (empty = root).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn new(path: Vec<usize>) -> Position {
        assert!(path.iter().all(|&i| i >= 1), "positions are 1-indexed");
        Position(path)
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> Position {
        let mut path = self.0.clone();
        path.push(index);
        Position(path)
    }

    /// `self` followed by `suffix`.
    pub fn concat(&self, suffix: &Position) -> Position {
        let mut path = self.0.clone();
        path.extend_from_slice(&suffix.0);
        Position(path)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn parse(text: &str) -> Option<Position> {
        if text == "eps" {
            return Some(Position::root());
        }
        text.split('.')
            .map(|part| part.parse::<usize>().ok().filter(|&i| i >= 1))
            .collect::<Option<Vec<_>>>()
            .map(Position)
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl From<Position> for String {
    fn from(p: Position) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Position {
    type Error = String;
    fn try_from(s: String) -> Result<Position, String> {
        Position::parse(&s).ok_or_else(|| format!("invalid position `{s}`"))
    }
}

/// A first-order term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Symbol, Arc<[Term]>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Symbol::constant(name), Arc::from(Vec::new()))
    }

    /// Builds `symbol(args..)`, checking the arity.
    pub fn app(symbol: Symbol, args: Vec<Term>) -> Result<Term, TermError> {
        if symbol.arity != args.len() {
            return Err(TermError::ArityMismatch {
                name: symbol.to_string(),
                arity: symbol.arity,
                given: args.len(),
            });
        }
        Ok(Term::App(symbol, Arc::from(args)))
    }

    /// Builds `name(args..)` with the arity taken from `args`.
    pub fn func(name: &str, args: Vec<Term>) -> Term {
        let symbol = Symbol::new(name, args.len());
        Term::App(symbol, Arc::from(args))
    }

    /// `symbol^n(base)` for a unary symbol.
    pub fn tower(name: &str, n: usize, base: Term) -> Term {
        (0..n).fold(base, |acc, _| Term::func(name, vec![acc]))
    }

    pub(crate) fn hole(prime: bool) -> Term {
        Term::App(Symbol::hole(prime), Arc::from(Vec::new()))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root_symbol(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn check_size(&self, limit: usize) -> Result<(), TermError> {
        let size = self.size();
        if size > limit {
            Err(TermError::TooLarge { size, limit })
        } else {
            Ok(())
        }
    }

    /// All positions in preorder, which is also lexicographic order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        for (i, arg) in self.args().iter().enumerate() {
            path.push(i + 1);
            arg.collect_positions(path, out);
            path.pop();
        }
    }

    /// Positions holding a non-variable subterm.
    pub fn non_variable_positions(&self) -> Vec<Position> {
        self.positions()
            .into_iter()
            .filter(|p| !self.get(p).is_some_and(Term::is_var))
            .collect()
    }

    pub fn get(&self, position: &Position) -> Option<&Term> {
        let mut current = self;
        for &i in &position.0 {
            current = current.args().get(i.checked_sub(1)?)?;
        }
        Some(current)
    }

    pub fn subterm_at(&self, position: &Position) -> Result<&Term, TermError> {
        self.get(position).ok_or_else(|| self.invalid(position))
    }

    pub fn replace_at(&self, position: &Position, replacement: Term) -> Result<Term, TermError> {
        self.replace_path(&position.0, replacement)
            .ok_or_else(|| self.invalid(position))
    }

    fn replace_path(&self, path: &[usize], replacement: Term) -> Option<Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(replacement);
        };
        match self {
            Term::Var(_) => None,
            Term::App(f, args) => {
                let idx = i.checked_sub(1).filter(|&k| k < args.len())?;
                let mut new_args = args.to_vec();
                new_args[idx] = args[idx].replace_path(rest, replacement)?;
                Some(Term::App(f.clone(), Arc::from(new_args)))
            }
        }
    }

    fn invalid(&self, position: &Position) -> TermError {
        TermError::InvalidPosition { term: self.to_string(), position: position.clone() }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    /// Variables in order of first occurrence (left to right).
    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        self.visit_vars(&mut |v| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        });
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Term::Var(v) => f(v),
            Term::App(_, args) => args.iter().for_each(|a| a.visit_vars(f)),
        }
    }

    pub fn contains_var(&self, var: &Var) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(var)),
        }
    }

    /// Symbols occurring in the term (holes excluded), in first-occurrence order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        self.visit_symbols(&mut |s| {
            if !s.is_hole() && !out.contains(s) {
                out.push(s.clone());
            }
        });
        out
    }

    fn visit_symbols(&self, f: &mut impl FnMut(&Symbol)) {
        if let Term::App(sym, args) = self {
            f(sym);
            args.iter().for_each(|a| a.visit_symbols(f));
        }
    }

    pub fn contains_marked(&self) -> bool {
        let mut found = false;
        self.visit_symbols(&mut |s| found |= s.is_marked());
        found
    }

    fn contains_hole(&self, prime: bool) -> bool {
        let kind = if prime { SymbolKind::HolePrime } else { SymbolKind::Hole };
        let mut found = false;
        self.visit_symbols(&mut |s| found |= s.kind == kind);
        found
    }

    /// Replaces every occurrence of a hole kind by `filler`.
    fn fill(&self, prime: bool, filler: &Term) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(sym, args) => {
                let target = if prime { SymbolKind::HolePrime } else { SymbolKind::Hole };
                if sym.kind == target {
                    return filler.clone();
                }
                if args.is_empty() {
                    return self.clone();
                }
                let new_args: Vec<Term> = args.iter().map(|a| a.fill(prime, filler)).collect();
                Term::App(sym.clone(), Arc::from(new_args))
            }
        }
    }

    /// Replaces every occurrence of `var` by `replacement`.
    pub fn replace_var(&self, var: &Var, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Var(_) => self.clone(),
            Term::App(sym, args) => {
                let new_args: Vec<Term> =
                    args.iter().map(|a| a.replace_var(var, replacement)).collect();
                Term::App(sym.clone(), Arc::from(new_args))
            }
        }
    }

    /// Replaces every occurrence of the subterm `pattern` by `replacement`.
    pub fn replace_all(&self, pattern: &Term, replacement: &Term) -> Term {
        if self == pattern {
            return replacement.clone();
        }
        match self {
            Term::Var(_) => self.clone(),
            Term::App(sym, args) => {
                let new_args: Vec<Term> =
                    args.iter().map(|a| a.replace_all(pattern, replacement)).collect();
                Term::App(sym.clone(), Arc::from(new_args))
            }
        }
    }

    /// Maps every symbol through `f`.
    pub fn map_symbols(&self, f: &impl Fn(&Symbol) -> Symbol) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(sym, args) => {
                let new_args: Vec<Term> = args.iter().map(|a| a.map_symbols(f)).collect();
                Term::App(f(sym), Arc::from(new_args))
            }
        }
    }

    /// The term with root symbol replaced by its marked counterpart.
    pub fn mark_root(&self) -> Term {
        match self {
            Term::App(sym, args) if !sym.is_marked() => Term::App(sym.marked(), args.clone()),
            _ => self.clone(),
        }
    }

    /// The term with every marked symbol replaced by its base symbol.
    pub fn unmark(&self) -> Term {
        self.map_symbols(&Symbol::unmarked)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(sym, args) => {
                write!(f, "{sym}")?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A finite, possibly empty, sequence of terms.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Goal(pub Vec<Term>);

impl Goal {
    pub fn new(terms: Vec<Term>) -> Goal {
        Goal(terms)
    }

    pub fn empty() -> Goal {
        Goal(Vec::new())
    }

    pub fn singleton(term: Term) -> Goal {
        Goal(vec![term])
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<&Term> {
        self.0.first()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().flat_map(Term::vars).collect()
    }

    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        self.0.iter().for_each(|t| t.vars_in_order(out));
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Term::size).sum()
    }
}

impl fmt::Debug for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(">")
    }
}

/// An element of the rewritten set: a term (TRS side) or a goal (LP side).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Term(Term),
    Goal(Goal),
}

impl Node {
    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Node::Term(t) => Some(t),
            Node::Goal(_) => None,
        }
    }

    pub fn as_goal(&self) -> Option<&Goal> {
        match self {
            Node::Goal(g) => Some(g),
            Node::Term(_) => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            Node::Term(t) => t.vars(),
            Node::Goal(g) => g.vars(),
        }
    }

    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Node::Term(t) => t.vars_in_order(out),
            Node::Goal(g) => g.vars_in_order(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Node::Term(t) => t.size(),
            Node::Goal(g) => g.size(),
        }
    }
}

impl From<Term> for Node {
    fn from(t: Term) -> Node {
        Node::Term(t)
    }
}

impl From<Goal> for Node {
    fn from(g: Goal) -> Node {
        Node::Goal(g)
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Term(t) => write!(f, "{t}"),
            Node::Goal(g) => write!(f, "{g}"),
        }
    }
}

/// Which hole symbols a context contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Holes {
    One,
    Two,
}

/// A term over the signature extended with the holes `□` and `□'`.
///
/// A one-hole context has at least one `□` and no `□'`; a two-hole context
/// has at least one of each.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Context {
    body: Term,
}

impl Context {
    /// The trivial context `□`.
    pub fn hole() -> Context {
        Context { body: Term::hole(false) }
    }

    /// `term` with the subterm at `position` replaced by `□`.
    pub fn at(term: &Term, position: &Position) -> Result<Context, TermError> {
        Ok(Context { body: term.replace_at(position, Term::hole(false))? })
    }

    /// `term` with every occurrence of `var` replaced by `□`.
    pub fn abstracting(term: &Term, var: &Var) -> Result<Context, TermError> {
        if !term.contains_var(var) {
            return Err(TermError::HoleMismatch(format!("{var} does not occur in {term}")));
        }
        Ok(Context { body: term.replace_var(var, &Term::hole(false)) })
    }

    /// `term` with `hole` replaced by `□` and `hole_prime` by `□'`.
    pub fn abstracting2(term: &Term, hole: &Var, hole_prime: &Var) -> Result<Context, TermError> {
        if hole == hole_prime || !term.contains_var(hole) || !term.contains_var(hole_prime) {
            return Err(TermError::HoleMismatch(format!(
                "{term} must contain the distinct variables {hole} and {hole_prime}"
            )));
        }
        let body = term
            .replace_var(hole, &Term::hole(false))
            .replace_var(hole_prime, &Term::hole(true));
        Ok(Context { body })
    }

    /// Builds a context from a body that already contains hole symbols.
    pub(crate) fn from_body(body: Term) -> Result<Context, TermError> {
        if !body.contains_hole(false) {
            return Err(TermError::HoleMismatch(format!("{body} contains no □")));
        }
        Ok(Context { body })
    }

    pub fn body(&self) -> &Term {
        &self.body
    }

    pub fn holes(&self) -> Holes {
        if self.body.contains_hole(true) {
            Holes::Two
        } else {
            Holes::One
        }
    }

    /// Positions of the `□` (or `□'`) occurrences, in lexicographic order.
    pub fn hole_positions(&self, prime: bool) -> Vec<Position> {
        let kind = if prime { SymbolKind::HolePrime } else { SymbolKind::Hole };
        self.body
            .positions()
            .into_iter()
            .filter(|p| {
                matches!(self.body.get(p), Some(Term::App(s, _)) if s.kind == kind)
            })
            .collect()
    }

    /// `c[t]`: every `□` replaced by `t`. Fails on two-hole contexts.
    pub fn plug(&self, filler: &Term) -> Result<Term, TermError> {
        if self.holes() == Holes::Two {
            return Err(TermError::HoleMismatch(format!(
                "plugging only □ into {self} would leave □'"
            )));
        }
        Ok(self.body.fill(false, filler))
    }

    /// `c[t, t']`: `□` replaced by `t` and `□'` by `t'`.
    pub fn plug2(&self, filler: &Term, filler_prime: &Term) -> Result<Term, TermError> {
        if self.holes() != Holes::Two {
            return Err(TermError::HoleMismatch(format!("{self} has no □'")));
        }
        Ok(self.body.fill(false, filler).fill(true, filler_prime))
    }

    /// `c[d]` for a one-hole context `d`, i.e. context composition.
    pub fn compose(&self, inner: &Context) -> Result<Context, TermError> {
        if self.holes() == Holes::Two || inner.holes() == Holes::Two {
            return Err(TermError::HoleMismatch("composition needs one-hole contexts".into()));
        }
        Ok(Context { body: self.body.fill(false, &inner.body) })
    }

    /// `c^n` with `c^0 = □`.
    pub fn power(&self, n: usize) -> Result<Context, TermError> {
        let mut acc = Context::hole();
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// `c^n[t]`.
    pub fn plug_power(&self, n: usize, filler: &Term) -> Result<Term, TermError> {
        let mut acc = filler.clone();
        for _ in 0..n {
            acc = self.plug(&acc)?;
        }
        Ok(acc)
    }

    /// Variables of the context body (holes excluded).
    pub fn vars(&self) -> BTreeSet<Var> {
        self.body.vars()
    }

    pub fn is_trivial(&self) -> bool {
        self.body == Term::hole(false)
    }

    /// Applies `f` to the body, keeping the holes in place.
    pub(crate) fn map_body(&self, f: impl FnOnce(&Term) -> Term) -> Context {
        Context { body: f(&self.body) }
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body)
    }
}

/// A goal with exactly one hole between `prefix` and `suffix`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GoalContext {
    pub prefix: Vec<Term>,
    pub suffix: Vec<Term>,
}

impl GoalContext {
    pub fn hole() -> GoalContext {
        GoalContext::default()
    }

    /// The goal with the hole replaced by the elements of `goal`.
    pub fn plug(&self, goal: &Goal) -> Goal {
        let mut terms = self.prefix.clone();
        terms.extend(goal.0.iter().cloned());
        terms.extend(self.suffix.iter().cloned());
        Goal(terms)
    }

    pub fn is_trivial(&self) -> bool {
        self.prefix.is_empty() && self.suffix.is_empty()
    }

    /// 0-based index at which the plugged goal starts.
    pub fn offset(&self) -> usize {
        self.prefix.len()
    }
}

impl fmt::Debug for GoalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GoalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .prefix
            .iter()
            .map(ToString::to_string)
            .chain(std::iter::once("□".to_string()))
            .chain(self.suffix.iter().map(ToString::to_string))
            .collect();
        write!(f, "<{}>", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::t;
    use proptest::prelude::*;

    fn pos(path: &[usize]) -> Position {
        Position::new(path.to_vec())
    }

    #[test]
    fn positions_follow_the_inductive_definition() {
        assert_eq!(t("x").positions(), vec![Position::root()]);
        assert_eq!(t("f(x)").positions(), vec![Position::root(), pos(&[1])]);
        let expected = vec![
            Position::root(),
            pos(&[1]),
            pos(&[1, 1]),
            pos(&[1, 1, 1]),
            pos(&[1, 2]),
            pos(&[2]),
        ];
        assert_eq!(t("g(h(f(x),0),x)").positions(), expected);
    }

    #[test]
    fn subterms_and_replacement() {
        let s = t("g(h(f(x),0),x)");
        assert_eq!(s.subterm_at(&pos(&[1])).unwrap(), &t("h(f(x),0)"));
        assert_eq!(s.subterm_at(&Position::root()).unwrap(), &s);
        assert!(matches!(
            t("f(x)").subterm_at(&pos(&[2])),
            Err(TermError::InvalidPosition { .. })
        ));
        assert_eq!(s.replace_at(&pos(&[1]), t("f(f(f(x)))")).unwrap(), t("g(f(f(f(x))),x)"));
        assert_eq!(s.replace_at(&Position::root(), t("0")).unwrap(), t("0"));
        assert_eq!(t("f(0)").replace_at(&pos(&[1]), t("1")).unwrap(), t("f(1)"));
        assert!(t("x").replace_at(&pos(&[1]), t("0")).is_err());
    }

    #[test]
    fn plugging_contexts() {
        let c = Context::abstracting(&t("g(z,x)"), &Var::new("z")).unwrap();
        assert_eq!(c.to_string(), "g(□,x)");
        assert_eq!(c.plug(&t("f(f(x))")).unwrap(), t("g(f(f(x)),x)"));
        assert_eq!(Context::hole().plug(&t("f(x)")).unwrap(), t("f(x)"));

        let c = Context::abstracting(&t("g(z,0,z)"), &Var::new("z")).unwrap();
        let c1 = Context::abstracting2(&t("f(u,w,u)"), &Var::new("u"), &Var::new("w")).unwrap();
        let c2_0 = c.plug_power(2, &t("0")).unwrap();
        let c_0 = c.plug(&t("0")).unwrap();
        let expected = Term::func("f", vec![c2_0.clone(), c_0.clone(), c2_0.clone()]);
        assert_eq!(c1.plug2(&c2_0, &c_0).unwrap(), expected);
        assert!(matches!(c1.plug(&t("0")), Err(TermError::HoleMismatch(_))));
        assert!(matches!(c.plug2(&t("0"), &t("0")), Err(TermError::HoleMismatch(_))));
    }

    #[test]
    fn context_powers() {
        let s = Context::abstracting(&t("s(z)"), &Var::new("z")).unwrap();
        assert_eq!(s.power(3).unwrap().to_string(), "s(s(s(□)))");
        assert!(s.power(0).unwrap().is_trivial());
        let c = Context::abstracting(&t("g(z,0,z)"), &Var::new("z")).unwrap();
        assert_eq!(c.power(2).unwrap().to_string(), "g(g(□,0,□),0,g(□,0,□))");
    }

    #[test]
    fn variables_of_terms_and_goals() {
        assert_eq!(t("f(x,0)").vars(), [Var::new("x")].into());
        let g = Goal::new(vec![t("p(x)"), t("q(y)")]);
        assert_eq!(g.vars(), [Var::new("x"), Var::new("y")].into());
        assert!(t("1").vars().is_empty());
    }

    #[test]
    fn fresh_names_strip_suffixes() {
        let x1 = Var::new("x_1");
        assert_eq!(x1.base_name(), "x");
        let taken = [Var::new("x_1"), Var::new("x_2")];
        assert_eq!(x1.fresh_like(|v| taken.contains(v)), Var::new("x_3"));
        assert_eq!(Var::new("_").base_name(), "_");
        assert_eq!(Var::new("x_").base_name(), "x_");
    }

    #[test]
    fn position_rendering() {
        assert_eq!(Position::root().to_string(), "eps");
        assert_eq!(pos(&[1, 2, 1]).to_string(), "1.2.1");
        assert_eq!(Position::parse("1.2.1"), Some(pos(&[1, 2, 1])));
        assert_eq!(Position::parse("eps"), Some(Position::root()));
        assert_eq!(Position::parse("0.1"), None);
    }

    #[test]
    fn signature_rejects_arity_clash() {
        let mut sig = Signature::new();
        sig.insert(Symbol::new("f", 1)).unwrap();
        assert!(sig.insert(Symbol::new("f", 2)).is_err());
        sig.insert(Symbol::new("f", 1).marked()).unwrap();
        assert_eq!(sig.len(), 2);
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(t("x")),
            Just(t("y")),
            Just(t("0")),
            Just(t("1")),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Term::func("s", vec![a])),
                (inner.clone(), inner).prop_map(|(a, b)| Term::func("g", vec![a, b])),
            ]
        })
    }

    fn arb_context() -> impl Strategy<Value = Context> {
        (arb_term(), any::<prop::sample::Index>()).prop_map(|(term, idx)| {
            let ps = term.positions();
            Context::at(&term, &ps[idx.index(ps.len())]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn replace_with_own_subterm_is_identity(term in arb_term(), idx in any::<prop::sample::Index>()) {
            let ps = term.positions();
            let p = &ps[idx.index(ps.len())];
            let sub = term.subterm_at(p).unwrap().clone();
            prop_assert_eq!(term.replace_at(p, sub).unwrap(), term);
        }

        #[test]
        fn replaced_subterm_is_readable(term in arb_term(), u in arb_term(), idx in any::<prop::sample::Index>()) {
            let ps = term.positions();
            let p = &ps[idx.index(ps.len())];
            let replaced = term.replace_at(p, u.clone()).unwrap();
            prop_assert_eq!(replaced.subterm_at(p).unwrap(), &u);
        }

        #[test]
        fn plugged_holes_hold_the_filler(c in arb_context(), u in arb_term()) {
            let plugged = c.plug(&u).unwrap();
            for p in c.hole_positions(false) {
                prop_assert_eq!(plugged.subterm_at(&p).unwrap(), &u);
            }
        }

        #[test]
        fn context_power_is_a_monoid_action(c in arb_context(), m in 0usize..4, n in 0usize..4) {
            let lhs = c.power(m + n).unwrap();
            let rhs = c.power(m).unwrap().compose(&c.power(n).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
