//! Recurrent pairs: two chains `u1 ⇒_w1 v1` and `u2 ⇒_w2 v2` where `w1`
//! moves a tower of `c2` from the `□'` slots of `c1` to its `□` slots and
//! `w2` copies it back, which yields an infinite binary chain.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::detect::Budget;
use crate::error::{Error, Result};
use crate::rewrite::{instantiate_chain, step_at, verify_chain, word_chains, Chain, Program, Semantics};
use crate::subst::{renaming_apart, Substitution};
use crate::term::{Context, Holes, Node, Position, Symbol, Term, Var};

/// Which term `t ∈ {x, s}` appears below `c2^n3` in `v2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TChoice {
    X,
    S,
}

impl fmt::Display for TChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TChoice::X => "x",
            TChoice::S => "s",
        })
    }
}

/// The decomposition `u1 = c1[x, c2[y]]`, `v1 = c1[c2^n1[x], y]`,
/// `u2 = c1[x, c2^n2[s]]`, `v2 = c1[c2^n3[t], c2^n4[x]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentPattern {
    pub c1: Context,
    pub c2: Context,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n4: usize,
    pub s: Term,
    pub t: TChoice,
    pub x: Var,
    pub y: Var,
}

impl RecurrentPattern {
    fn tower(&self, n: usize, base: &Term) -> Term {
        self.c2.plug_power(n, base).expect("c2 has one hole kind")
    }

    fn plug(&self, a: &Term, b: &Term) -> Term {
        self.c1.plug2(a, b).expect("c1 has both holes")
    }

    /// `c1[m, n] = c1[c2^m[s], c2^n[s]]`.
    pub fn term(&self, m: usize, n: usize) -> Term {
        self.plug(&self.tower(m, &self.s), &self.tower(n, &self.s))
    }

    pub fn t_term(&self) -> Term {
        match self.t {
            TChoice::X => Term::Var(self.x.clone()),
            TChoice::S => self.s.clone(),
        }
    }

    pub fn u1(&self) -> Term {
        self.plug(&Term::Var(self.x.clone()), &self.tower(1, &Term::Var(self.y.clone())))
    }

    pub fn v1(&self) -> Term {
        self.plug(&self.tower(self.n1, &Term::Var(self.x.clone())), &Term::Var(self.y.clone()))
    }

    pub fn u2(&self) -> Term {
        self.plug(&Term::Var(self.x.clone()), &self.tower(self.n2, &self.s))
    }

    pub fn v2(&self) -> Term {
        self.plug(&self.tower(self.n3, &self.t_term()), &self.tower(self.n4, &Term::Var(self.x.clone())))
    }

    /// Exponents `(m', n')` after one `(⇒*_w1 ∘ ⇒_w2)` step from `c1[m, n]`.
    /// `|c1[m, n]|`, saturating.
    pub fn term_size(&self, m: usize, n: usize) -> usize {
        let tower = |n: usize| {
            let holes = self.c2.hole_positions(false).len();
            let rest = self.c2.body().size() - holes;
            let mut size = self.s.size();
            for _ in 0..n {
                size = rest.saturating_add(holes.saturating_mul(size));
            }
            size
        };
        let (h, h2) = (self.c1.hole_positions(false).len(), self.c1.hole_positions(true).len());
        (self.c1.body().size() - h - h2)
            .saturating_add(h.saturating_mul(tower(m)))
            .saturating_add(h2.saturating_mul(tower(n)))
    }

    pub fn macro_step(&self, m: usize, n: usize) -> (usize, usize) {
        let l = m + (n - self.n2) * self.n1;
        let base = if self.t == TChoice::S { 0 } else { l };
        (base + self.n3, l + self.n4)
    }
}

impl fmt::Display for RecurrentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "c1 = {}, c2 = {}, (n1,n2,n3,n4) = ({},{},{},{}), s = {}, t = {}, x = {}, y = {}",
            self.c1, self.c2, self.n1, self.n2, self.n3, self.n4, self.s, self.t, self.x, self.y
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentPair {
    pub chain1: Chain,
    /// The second chain, instantiated to fit the pattern.
    pub chain2: Chain,
    pub pattern: RecurrentPattern,
    pub semantics: Semantics,
}

impl RecurrentPair {
    pub fn word1(&self) -> Vec<String> {
        self.chain1.word()
    }

    pub fn word2(&self) -> Vec<String> {
        self.chain2.word()
    }
}

fn hole(prime: bool) -> Term {
    Term::hole(prime)
}

fn assign(slot: &mut Option<Term>, value: &Term) -> bool {
    match slot {
        Some(v) => v == value,
        None => {
            *slot = Some(value.clone());
            true
        }
    }
}

/// Fillers `(a, b)` with `body[a, b] = term`; variables of `body` must
/// occur identically in `term`.
fn split(body: &Term, term: &Term, a: &mut Option<Term>, b: &mut Option<Term>) -> bool {
    if *body == hole(false) {
        return assign(a, term);
    }
    if *body == hole(true) {
        return assign(b, term);
    }
    match (body, term) {
        (Term::Var(x), Term::Var(y)) => x == y,
        (Term::App(f, fs), Term::App(g, gs)) => {
            f == g && fs.iter().zip(gs.iter()).all(|(s, t)| split(s, t, a, b))
        }
        _ => false,
    }
}

fn split_pair(c1: &Context, term: &Term) -> Option<(Term, Term)> {
    let (mut a, mut b) = (None, None);
    if split(c1.body(), term, &mut a, &mut b) {
        Some((a?, b?))
    } else {
        None
    }
}

/// The filler `a` with `c2[a] = term`.
fn unplug(c2: &Context, term: &Term) -> Option<Term> {
    let (mut a, mut b) = (None, None);
    if split(c2.body(), term, &mut a, &mut b) {
        a
    } else {
        None
    }
}

/// `n` with `c2^n[base] = term`.
fn peel(c2: &Context, term: &Term, base: &Term) -> Option<usize> {
    let mut current = term.clone();
    let mut n = 0;
    loop {
        if &current == base {
            return Some(n);
        }
        current = unplug(c2, &current)?;
        n += 1;
    }
}

/// Like [`split`], but variables of `term` are mapped onto those of
/// `body` (recorded in `map`) and the `□` filler must be a variable.
fn split_instance(
    body: &Term,
    term: &Term,
    map: &mut BTreeMap<Var, Term>,
    a: &mut Option<Var>,
    b: &mut Option<Term>,
) -> bool {
    if *body == hole(false) {
        let Some(w) = term.as_var() else { return false };
        return match a {
            Some(v) => v == w,
            None => {
                *a = Some(w.clone());
                true
            }
        };
    }
    if *body == hole(true) {
        return term.is_ground() && assign(b, term);
    }
    match (body, term) {
        (Term::Var(z), Term::Var(w)) => match map.get(w) {
            Some(existing) => existing == &Term::Var(z.clone()),
            None => {
                map.insert(w.clone(), Term::Var(z.clone()));
                true
            }
        },
        (Term::App(f, fs), Term::App(g, gs)) => {
            f == g && fs.iter().zip(gs.iter()).all(|(s, t)| split_instance(s, t, map, a, b))
        }
        _ => false,
    }
}

/// Tries to decompose `(u1, v1, u2, v2)` as a recurrent pair. On success
/// also returns the substitution that instantiates the second chain (whose
/// variables are independent of the first) into the required shape.
///
/// Variable pairs `(x, y)` of `u1` are tried by name, then anchors `u1|q`
/// (non-variable, with `Var(u1|q) = {y}`) in lexicographic order, then `n2`
/// ascending, then `t = x` before `t = s`.
pub fn match_recurrent_pattern(u1: &Term, v1: &Term, u2: &Term, v2: &Term) -> Option<(RecurrentPattern, Substitution)> {
    first_chain_shapes(u1, v1).iter().find_map(|shape| fit_second(shape, u1, v1, u2, v2))
}

/// The part of a pattern fixed by the first chain alone.
#[derive(Debug, Clone)]
struct Shape {
    c1: Context,
    c2: Context,
    n1: usize,
    x: Var,
    y: Var,
}

fn first_chain_shapes(u1: &Term, v1: &Term) -> Vec<Shape> {
    let vars: Vec<Var> = u1.vars().into_iter().collect();
    let mut out = Vec::new();
    for x in &vars {
        for y in &vars {
            if x == y {
                continue;
            }
            for q in u1.non_variable_positions() {
                let anchor = u1.get(&q).expect("own position");
                if anchor.vars() != BTreeSet::from([y.clone()]) {
                    continue;
                }
                if let Some(shape) = shape_at(u1, v1, x, y, anchor) {
                    out.push(shape);
                }
            }
        }
    }
    out
}

fn shape_at(u1: &Term, v1: &Term, x: &Var, y: &Var, anchor: &Term) -> Option<Shape> {
    let c2 = Context::abstracting(anchor, y).ok()?;
    let body = u1.replace_all(anchor, &hole(true)).replace_var(x, &hole(false));
    if body.contains_var(y) || !has_both_holes(&body) {
        return None;
    }
    let c1 = Context::from_body(body).ok()?;
    let (a1, b1) = split_pair(&c1, v1)?;
    if b1.as_var() != Some(y) {
        return None;
    }
    let n1 = peel(&c2, &a1, &Term::Var(x.clone()))?;
    Some(Shape { c1, c2, n1, x: x.clone(), y: y.clone() })
}

fn fit_second(shape: &Shape, u1: &Term, v1: &Term, u2: &Term, v2: &Term) -> Option<(RecurrentPattern, Substitution)> {
    let Shape { c1, c2, n1, x, y } = shape;
    let (mut map, mut slot_x, mut slot_s) = (BTreeMap::new(), None, None);
    if !split_instance(c1.body(), u2, &mut map, &mut slot_x, &mut slot_s) {
        return None;
    }
    let (w, ground) = (slot_x?, slot_s?);
    if map.contains_key(&w) {
        return None;
    }
    map.insert(w, Term::Var(x.clone()));
    let mut rest: Vec<Var> = Vec::new();
    u2.vars_in_order(&mut rest);
    v2.vars_in_order(&mut rest);
    let mut skip: BTreeSet<Var> = map.keys().cloned().collect();
    rest.retain(|v| skip.insert(v.clone()));
    let mut theta = Substitution::from_pairs(map);
    let mut avoid = u1.vars();
    avoid.extend(v1.vars());
    avoid.extend(theta.range_vars());
    let fresh = renaming_apart(&rest, &avoid);
    let pairs: Vec<(Var, Term)> = theta.iter().chain(fresh.iter()).map(|(k, v)| (k.clone(), v.clone())).collect();
    theta = Substitution::from_pairs(pairs);
    let v2 = theta.apply(v2);
    let (a2, b2) = split_pair(c1, &v2)?;
    let xt = Term::Var(x.clone());

    let mut s = ground;
    let mut n2 = 0;
    loop {
        if let Some(n4) = peel(c2, &b2, &xt).filter(|&n4| n4 >= n2) {
            let choices = [(TChoice::X, xt.clone()), (TChoice::S, s.clone())];
            for (t, base) in choices {
                if let Some(n3) = peel(c2, &a2, &base) {
                    let pattern = RecurrentPattern {
                        c1: c1.clone(),
                        c2: c2.clone(),
                        n1: *n1,
                        n2,
                        n3,
                        n4,
                        s: s.clone(),
                        t,
                        x: x.clone(),
                        y: y.clone(),
                    };
                    let u2i = theta.apply(u2);
                    if pattern.u1() == *u1 && pattern.v1() == *v1 && pattern.u2() == u2i && pattern.v2() == v2 {
                        return Some((pattern, theta));
                    }
                }
            }
        }
        s = unplug(c2, &s)?;
        n2 += 1;
    }
}

fn has_both_holes(body: &Term) -> bool {
    Context::from_body(body.clone()).is_ok_and(|c| c.holes() == Holes::Two)
}

/// One-step chains of candidates at the root, then longer chains starting
/// with a candidate, up to `max_word` steps.
fn candidate_chains(
    program: &Program,
    candidates: &[String],
    max_word: usize,
    semantics: Semantics,
    budget: &mut Budget,
) -> Result<Vec<Chain>> {
    let mut out = Vec::new();
    for id in candidates {
        let rule = program.rule(id).ok_or_else(|| Error::UnknownRule(id.clone()))?;
        let usable = match semantics {
            Semantics::LpRestricted => rule.is_restricted_usable(),
            _ => rule.is_trs_usable(),
        };
        if !usable {
            continue;
        }
        let start = Node::Term(rule.lhs.clone());
        if let Some(step) = step_at(rule, &start, &Position::root(), semantics) {
            let mut chain = Chain::new(start.clone());
            chain.steps.push(step);
            out.push(chain);
        }
        for len in 2..=max_word {
            let others: Vec<String> = program.ids();
            // Words [id, r2, ..., r_len]; enumerate all continuations.
            let mut prefixes = vec![vec![id.clone()]];
            for _ in 1..len {
                prefixes = prefixes
                    .into_iter()
                    .flat_map(|p| others.iter().map(move |o| [p.clone(), vec![o.clone()]].concat()))
                    .collect();
            }
            for word in prefixes {
                budget.spend(1)?;
                for chain in word_chains(program, &start, &word, semantics, 1_000)? {
                    out.push(chain);
                }
            }
        }
    }
    Ok(out)
}

/// The first recurrent pair among ordered pairs of candidate chains with
/// the same root symbol.
pub fn find_recurrent_pair(
    program: &Program,
    candidates: &[String],
    max_word: usize,
    semantics: Semantics,
    budget: &mut Budget,
) -> Result<Option<RecurrentPair>> {
    if !semantics.closed_under_substitutions() {
        return Err(Error::Incompatible(format!("{semantics} steps are not closed under substitutions")));
    }
    let chains = candidate_chains(program, candidates, max_word, semantics, budget)?;
    let mut groups: HashMap<Symbol, Vec<usize>> = HashMap::new();
    for (i, c) in chains.iter().enumerate() {
        if let Some(f) = c.start.as_term().and_then(Term::root_symbol) {
            groups.entry(f.clone()).or_default().push(i);
        }
    }
    for ch1 in &chains {
        let (Some(u1), Some(v1)) = (ch1.start.as_term(), ch1.end().as_term()) else { continue };
        let Some(group) = u1.root_symbol().and_then(|f| groups.get(f)) else { continue };
        budget.spend(1)?;
        let shapes = first_chain_shapes(u1, v1);
        if shapes.is_empty() {
            continue;
        }
        for &j in group {
            budget.spend(shapes.len())?;
            let ch2 = &chains[j];
            let (Some(u2), Some(v2)) = (ch2.start.as_term(), ch2.end().as_term()) else { continue };
            let Some((pattern, theta)) = shapes.iter().find_map(|sh| fit_second(sh, u1, v1, u2, v2)) else { continue };
            let Some(chain2) = instantiate_chain(program, ch2, &theta) else { continue };
            if chain2.start != Node::Term(pattern.u2())
                || chain2.end() != &Node::Term(pattern.v2())
                || !verify_chain(program, ch1)
                || !verify_chain(program, &chain2)
            {
                continue;
            }
            return Ok(Some(RecurrentPair { chain1: ch1.clone(), chain2, pattern, semantics }));
        }
    }
    Ok(None)
}

/// Terms of simulated witness chains are kept below this size.
pub const MAX_WITNESS_TERM_SIZE: usize = 100_000;

/// The first `k` macro-steps of the infinite `(⇒*_w1 ∘ ⇒_w2)`-chain from
/// `c1[m, n]`, with the exponent pair before each macro-step and after the
/// last one.
pub fn witness_chain(
    program: &Program,
    pair: &RecurrentPair,
    m: usize,
    n: usize,
    k: usize,
) -> Result<(Chain, Vec<(usize, usize)>)> {
    let p = &pair.pattern;
    if n < p.n2 {
        return Err(Error::InvalidArgument(format!("start exponent {n} is below n2 = {}", p.n2)));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("at least one macro-step is needed".into()));
    }
    let replay = |chain: &Chain, theta: Substitution| {
        instantiate_chain(program, chain, &theta)
            .ok_or_else(|| Error::InvalidArgument(format!("chain {:?} does not instantiate", chain.word())))
    };
    let (mut m, mut n) = (m, n);
    let mut out = Chain::new(Node::Term(p.term(m, n)));
    let mut exponents = vec![(m, n)];
    let too_big = |m: usize, n: usize| {
        let size = p.term_size(m, n);
        (size > MAX_WITNESS_TERM_SIZE)
            .then(|| Error::Resource(format!("c1[{m},{n}] has {size} nodes, above the simulation limit")))
    };
    for _ in 0..k {
        let expected = p.macro_step(m, n);
        if let Some(e) = too_big(m, n).or_else(|| too_big(m + (n - p.n2) * p.n1, p.n2)).or_else(|| too_big(expected.0, expected.1)) {
            return Err(e);
        }
        while n > p.n2 {
            let theta = Substitution::from_pairs([
                (p.x.clone(), p.tower(m, &p.s)),
                (p.y.clone(), p.tower(n - 1, &p.s)),
            ]);
            out.extend(replay(&pair.chain1, theta)?)?;
            m += p.n1;
            n -= 1;
        }
        out.extend(replay(&pair.chain2, Substitution::single(p.x.clone(), p.tower(m, &p.s)))?)?;
        (m, n) = expected;
        if out.end() != &Node::Term(p.term(m, n)) {
            return Err(Error::InvalidArgument(format!("macro-step ended in {}, not c1[{m},{n}]", out.end())));
        }
        exponents.push((m, n));
    }
    Ok((out, exponents))
}
