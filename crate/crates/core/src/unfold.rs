//! Depth-bounded unfoldings: dependency pairs, dependency pair unfolding
//! `Unf(R)`, binary unfolding `Binunf(P)` and the overlap closure `OC(R)`.
//!
//! Every produced rule carries a [`Provenance`] from which it can be
//! recomputed by [`replay`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rewrite::{lp_step, Mode, Program, Rule};
use crate::subst::{mgu, variant_key, Substitution};
use crate::term::{Goal, Node, Position, Symbol, Term, Var, DEFAULT_MAX_TERM_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnfoldKind {
    /// A rule of the input program.
    Base,
    Dp,
    Forward,
    Backward,
    BinunfA,
    BinunfB,
    BinunfC,
    OcForward,
    OcBackward,
}

impl fmt::Display for UnfoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnfoldKind::Base => "base",
            UnfoldKind::Dp => "dp",
            UnfoldKind::Forward => "forward",
            UnfoldKind::Backward => "backward",
            UnfoldKind::BinunfA => "binunf-A",
            UnfoldKind::BinunfB => "binunf-B",
            UnfoldKind::BinunfC => "binunf-C",
            UnfoldKind::OcForward => "oc-forward",
            UnfoldKind::OcBackward => "oc-backward",
        })
    }
}

/// How a rule was obtained.
///
/// For narrowing kinds `parents` is `[narrowed rule, narrowing rule]`.
/// For binary unfolding it is `[program rule, unit rules..., binary rule]`
/// (the binary rule only for `binunf-B`) and `position` is the index of the
/// body element that is kept or narrowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub kind: UnfoldKind,
    pub parents: Vec<String>,
    pub position: Option<Position>,
    pub unifier: Substitution,
}

impl Provenance {
    pub fn base(id: &str) -> Provenance {
        Provenance {
            kind: UnfoldKind::Base,
            parents: vec![id.to_string()],
            position: None,
            unifier: Substitution::new(),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} of {}", self.kind, self.parents.join(", "))?;
        if let Some(p) = &self.position {
            write!(f, " at {p}")?;
        }
        if !self.unifier.is_empty() {
            write!(f, " with {}", self.unifier)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldedRule {
    pub rule: Rule,
    pub depth: usize,
    pub provenance: Provenance,
}

/// A set of unfolded rules in generation order (by depth).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Unfolding {
    pub rules: Vec<UnfoldedRule>,
}

impl Unfolding {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&UnfoldedRule> {
        self.rules.iter().find(|r| r.rule.id == id)
    }

    pub fn max_depth(&self) -> usize {
        self.rules.iter().map(|r| r.depth).max().unwrap_or(0)
    }

    /// Whether some rule is a variant of `(lhs, rhs)`.
    pub fn contains_variant(&self, lhs: &Term, rhs: &Goal) -> bool {
        let probe = Rule::new("", lhs.clone(), rhs.clone());
        self.rules.iter().any(|r| r.rule.is_variant_of(&probe))
    }

    pub fn program(&self, mode: Mode) -> Result<Program> {
        Program::new(mode, self.rules.iter().map(|r| r.rule.clone()).collect())
    }
}

#[derive(Debug, Clone)]
pub struct UnfoldConfig {
    pub depth: usize,
    pub max_rules: usize,
    pub max_term_size: usize,
    pub deadline: Option<Instant>,
}

impl Default for UnfoldConfig {
    fn default() -> UnfoldConfig {
        UnfoldConfig { depth: 4, max_rules: 50_000, max_term_size: DEFAULT_MAX_TERM_SIZE, deadline: None }
    }
}

impl UnfoldConfig {
    pub fn with_depth(depth: usize) -> UnfoldConfig {
        UnfoldConfig { depth, ..UnfoldConfig::default() }
    }
}

/// Collects rules up to variants and enforces the limits.
struct Collector<'a> {
    config: &'a UnfoldConfig,
    prefix: &'static str,
    counter: usize,
    seen: HashSet<String>,
    out: Vec<UnfoldedRule>,
}

impl<'a> Collector<'a> {
    fn new(config: &'a UnfoldConfig, prefix: &'static str) -> Collector<'a> {
        Collector { config, prefix, counter: 0, seen: HashSet::new(), out: Vec::new() }
    }

    fn add(&mut self, id: Option<&str>, lhs: Term, rhs: Goal, depth: usize, provenance: Provenance) -> Result<bool> {
        if let Some(deadline) = self.config.deadline {
            if Instant::now() >= deadline {
                return Err(self.truncate("timeout".to_string()));
            }
        }
        let size = lhs.size() + rhs.size();
        if size > self.config.max_term_size {
            return Err(self.truncate(format!("rule of {size} nodes exceeds the size limit")));
        }
        let mut seq = vec![lhs.clone()];
        seq.extend(rhs.0.iter().cloned());
        if !self.seen.insert(variant_key(&seq)) {
            return Ok(false);
        }
        if self.out.len() >= self.config.max_rules {
            return Err(self.truncate(format!("more than {} rules", self.config.max_rules)));
        }
        let id = match id {
            Some(id) => id.to_string(),
            None => {
                self.counter += 1;
                format!("{}{}", self.prefix, self.counter)
            }
        };
        self.out.push(UnfoldedRule { rule: Rule::new(id, lhs, rhs), depth, provenance });
        Ok(true)
    }

    fn truncate(&mut self, reason: String) -> Error {
        Error::Truncated { reason, partial: Box::new(Unfolding { rules: std::mem::take(&mut self.out) }) }
    }

    fn finish(self) -> Unfolding {
        Unfolding { rules: self.out }
    }
}

/// Distinct root symbols: the terms cannot unify.
fn clash(s: &Term, t: &Term) -> bool {
    matches!((s, t), (Term::App(f, xs), Term::App(g, ys)) if f != g || xs.len() != ys.len())
}

/// Narrows the right-hand side of `rule` at `p` with a variant of `narrower`.
pub fn narrow_forward(rule: &Rule, p: &Position, narrower: &Rule) -> Option<(Term, Term, Substitution)> {
    let v = rule.rhs_term()?;
    narrower.rhs_term()?;
    let sub = v.get(p)?;
    if clash(sub, &narrower.lhs) {
        return None;
    }
    let (n, _) = narrower.rename_apart(&rule.vars());
    let theta = mgu(sub, &n.lhs)?;
    let rhs = v.replace_at(p, n.rhs_term()?.clone()).ok()?;
    Some((theta.apply(&rule.lhs), theta.apply(&rhs), theta))
}

/// Narrows the left-hand side of `rule` at `p` with a variant of the
/// reversed `narrower`. Narrowers with a variable right-hand side are not
/// reversible.
pub fn narrow_backward(rule: &Rule, p: &Position, narrower: &Rule) -> Option<(Term, Term, Substitution)> {
    let v = rule.rhs_term()?;
    let sub = rule.lhs.get(p)?;
    if clash(sub, narrower.rhs_term()?) {
        return None;
    }
    let (n, _) = narrower.rename_apart(&rule.vars());
    let reversed_lhs = n.rhs_term()?;
    if reversed_lhs.is_var() {
        return None;
    }
    let theta = mgu(sub, reversed_lhs)?;
    let lhs = rule.lhs.replace_at(p, n.lhs.clone()).ok()?;
    Some((theta.apply(&lhs), theta.apply(v), theta))
}

/// Root symbols of left-hand sides, in order of first occurrence.
pub fn defined_symbols(program: &Program) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    for r in program.rules() {
        if let Some(f) = r.lhs.root_symbol() {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
    }
    out
}

/// `(F(s..), G(t..))` for each rule `(f(s..), t)` and each subterm
/// `g(t..)` of `t` with `g` defined, in preorder. Identifiers are `dp1`, ...
pub fn dependency_pairs(program: &Program) -> Vec<UnfoldedRule> {
    let defined = defined_symbols(program);
    let mut out = Vec::new();
    for r in program.rules() {
        let (Some(_), Some(v)) = (r.lhs.root_symbol(), r.rhs_term()) else {
            continue;
        };
        let mut seen = HashSet::new();
        for p in v.positions() {
            let sub = v.get(&p).expect("own position");
            if !sub.root_symbol().is_some_and(|g| defined.contains(g)) || !seen.insert(sub.clone()) {
                continue;
            }
            out.push(UnfoldedRule {
                rule: Rule::trs(format!("dp{}", out.len() + 1), r.lhs.mark_root(), sub.mark_root()),
                depth: 0,
                provenance: Provenance {
                    kind: UnfoldKind::Dp,
                    parents: vec![r.id.clone()],
                    position: Some(p),
                    unifier: Substitution::new(),
                },
            });
        }
    }
    out
}

fn narrowing_provenance(kind: UnfoldKind, rule: &Rule, narrower: &Rule, p: &Position, theta: Substitution) -> Provenance {
    Provenance { kind, parents: vec![rule.id.clone(), narrower.id.clone()], position: Some(p.clone()), unifier: theta }
}

/// The depth-bounded fragment of `Unf(R)`: dependency pairs at depth 0,
/// then forward and backward narrowing, with rules of `R` below the root
/// and dependency pairs at the root. Identifiers are `u1`, ...
pub fn unfold_trs(program: &Program, config: &UnfoldConfig) -> Result<Unfolding> {
    let base: Vec<&Rule> = program.rules().iter().filter(|r| r.is_trs_usable() && !r.lhs.is_var()).collect();
    let dps = dependency_pairs(program);
    let mut col = Collector::new(config, "u");
    for dp in &dps {
        col.add(Some(&dp.rule.id), dp.rule.lhs.clone(), dp.rule.rhs.clone(), 0, dp.provenance.clone())?;
    }
    let mut frontier: Vec<usize> = (0..col.out.len()).collect();
    for depth in 1..=config.depth {
        let start = col.out.len();
        for idx in frontier {
            let parent = col.out[idx].rule.clone();
            let Some(v) = parent.rhs_term() else { continue };
            for p in v.positions() {
                let narrowers: Vec<&Rule> =
                    if p.is_root() { dps.iter().map(|d| &d.rule).collect() } else { base.clone() };
                for n in narrowers {
                    if let Some((l, r, theta)) = narrow_forward(&parent, &p, n) {
                        let prov = narrowing_provenance(UnfoldKind::Forward, &parent, n, &p, theta);
                        col.add(None, l, Goal::singleton(r), depth, prov)?;
                    }
                }
            }
            for p in parent.lhs.non_variable_positions() {
                let narrowers: Vec<&Rule> =
                    if p.is_root() { dps.iter().map(|d| &d.rule).collect() } else { base.clone() };
                for n in narrowers {
                    if let Some((l, r, theta)) = narrow_backward(&parent, &p, n) {
                        let prov = narrowing_provenance(UnfoldKind::Backward, &parent, n, &p, theta);
                        col.add(None, l, Goal::singleton(r), depth, prov)?;
                    }
                }
            }
        }
        frontier = (start..col.out.len()).collect();
        if frontier.is_empty() {
            break;
        }
    }
    Ok(col.finish())
}

/// The depth-bounded fragment of `OC(R)`: `R` itself at depth 0 (keeping
/// its identifiers), then forward and backward narrowing at non-variable
/// positions between rules of the closure. Identifiers are `o1`, ...
pub fn overlap_closure(program: &Program, config: &UnfoldConfig) -> Result<Unfolding> {
    let mut col = Collector::new(config, "o");
    for r in program.rules().iter().filter(|r| r.is_trs_usable()) {
        col.add(Some(&r.id), r.lhs.clone(), r.rhs.clone(), 0, Provenance::base(&r.id))?;
    }
    for depth in 1..=config.depth {
        let old = col.out.len();
        let newest: Vec<bool> = col.out.iter().map(|r| r.depth + 1 == depth).collect();
        for i in 0..old {
            for j in 0..old {
                if !newest[i] && !newest[j] {
                    continue;
                }
                let r1 = col.out[i].rule.clone();
                let r2 = col.out[j].rule.clone();
                let Some(v1) = r1.rhs_term() else { continue };
                for p in v1.non_variable_positions() {
                    if let Some((l, r, theta)) = narrow_forward(&r1, &p, &r2) {
                        let prov = narrowing_provenance(UnfoldKind::OcForward, &r1, &r2, &p, theta);
                        col.add(None, l, Goal::singleton(r), depth, prov)?;
                    }
                }
                for p in r2.lhs.non_variable_positions() {
                    if let Some((l, r, theta)) = narrow_backward(&r2, &p, &r1) {
                        let prov = narrowing_provenance(UnfoldKind::OcBackward, &r2, &r1, &p, theta);
                        col.add(None, l, Goal::singleton(r), depth, prov)?;
                    }
                }
            }
        }
        if col.out.len() == old {
            break;
        }
    }
    Ok(col.finish())
}

/// A partial resolvent of a program rule: the instantiated head, the body
/// still to be proved, and what was used so far.
#[derive(Clone)]
struct Partial {
    head: Term,
    body: Vec<Term>,
    parents: Vec<String>,
    used_depth: Option<usize>,
    unifier: Substitution,
}

impl Partial {
    fn vars(&self) -> BTreeSet<Var> {
        let mut vs = self.head.vars();
        for t in &self.body {
            vs.extend(t.vars());
        }
        vs
    }

    /// Resolves the first body element with a variant of `rule`.
    fn resolve(&self, rule: &Rule) -> Option<(Substitution, Rule)> {
        let (renamed, _) = rule.rename_apart(&self.vars());
        let theta = mgu(self.body.first()?, &renamed.lhs)?;
        Some((theta, renamed))
    }

    fn depth(&self, extra: Option<usize>) -> usize {
        self.used_depth.max(extra).map_or(0, |d| d + 1)
    }

    fn index(&self) -> Position {
        // Parents are the program rule followed by the erasing unit rules.
        Position::new(vec![self.parents.len()])
    }
}

/// The depth-bounded fragment of `Binunf(P)` built from clauses (A), (B)
/// and (C) under the leftmost selection rule. A rule built without derived
/// rules has depth 0; otherwise its depth is one more than the deepest
/// derived rule used. Identifiers are `b1`, ...
pub fn binary_unfold(program: &Program, config: &UnfoldConfig) -> Result<Unfolding> {
    let mut col = Collector::new(config, "b");
    for level in 0..=config.depth {
        let before = col.out.len();
        let units: Vec<UnfoldedRule> = col.out.iter().filter(|r| r.rule.rhs.is_empty()).cloned().collect();
        let binaries: Vec<UnfoldedRule> = col.out.iter().filter(|r| r.rule.rhs.len() == 1).cloned().collect();
        for base in program.rules() {
            let start = Partial {
                head: base.lhs.clone(),
                body: base.rhs.0.clone(),
                parents: vec![base.id.clone()],
                used_depth: None,
                unifier: Substitution::new(),
            };
            let mut stack = vec![start];
            while let Some(state) = stack.pop() {
                let Some(first) = state.body.first() else {
                    let prov = Provenance {
                        kind: UnfoldKind::BinunfC,
                        parents: state.parents.clone(),
                        position: None,
                        unifier: state.unifier.clone(),
                    };
                    col.add(None, state.head.clone(), Goal::empty(), state.depth(None), prov)?;
                    continue;
                };
                let prov = Provenance {
                    kind: UnfoldKind::BinunfA,
                    parents: state.parents.clone(),
                    position: Some(state.index()),
                    unifier: state.unifier.clone(),
                };
                col.add(None, state.head.clone(), Goal::singleton(first.clone()), state.depth(None), prov)?;
                for b in &binaries {
                    if let Some((theta, renamed)) = state.resolve(&b.rule) {
                        let mut parents = state.parents.clone();
                        parents.push(b.rule.id.clone());
                        let prov = Provenance {
                            kind: UnfoldKind::BinunfB,
                            parents,
                            position: Some(state.index()),
                            unifier: state.unifier.compose(&theta),
                        };
                        let rhs = theta.apply_goal(&renamed.rhs);
                        col.add(None, theta.apply(&state.head), rhs, state.depth(Some(b.depth)), prov)?;
                    }
                }
                // Push in reverse so that earlier units are explored first.
                for u in units.iter().rev() {
                    if let Some((theta, _)) = state.resolve(&u.rule) {
                        let mut parents = state.parents.clone();
                        parents.push(u.rule.id.clone());
                        stack.push(Partial {
                            head: theta.apply(&state.head),
                            body: state.body[1..].iter().map(|t| theta.apply(t)).collect(),
                            parents,
                            used_depth: state.used_depth.max(Some(u.depth)),
                            unifier: state.unifier.compose(&theta),
                        });
                    }
                }
            }
        }
        if level > 0 && col.out.len() == before {
            break;
        }
    }
    Ok(col.finish())
}

fn lookup<'a>(base: &'a Program, derived: &'a [UnfoldedRule], id: &str) -> Option<&'a Rule> {
    derived.iter().map(|r| &r.rule).find(|r| r.id == id).or_else(|| base.rule(id))
}

/// Recomputes `rule` from its provenance, looking parents up in `derived`
/// first and then in `base`. True iff the result is a variant of the rule.
pub fn replay(base: &Program, derived: &[UnfoldedRule], rule: &UnfoldedRule) -> bool {
    recompute(base, derived, &rule.provenance).is_some_and(|r| r.is_variant_of(&rule.rule))
}

/// The rule described by a provenance record.
pub fn recompute(base: &Program, derived: &[UnfoldedRule], prov: &Provenance) -> Option<Rule> {
    let parent = |i: usize| prov.parents.get(i).and_then(|id| lookup(base, derived, id));
    match prov.kind {
        UnfoldKind::Base => base.rule(prov.parents.first()?).cloned(),
        UnfoldKind::Dp => {
            let r = base.rule(prov.parents.first()?)?;
            let sub = r.rhs_term()?.get(prov.position.as_ref()?)?;
            let defined = defined_symbols(base);
            if r.lhs.is_var() || !sub.root_symbol().is_some_and(|g| defined.contains(g)) {
                return None;
            }
            Some(Rule::trs("", r.lhs.mark_root(), sub.mark_root()))
        }
        UnfoldKind::Forward | UnfoldKind::OcForward => {
            let (l, r, _) = narrow_forward(parent(0)?, prov.position.as_ref()?, parent(1)?)?;
            Some(Rule::trs("", l, r))
        }
        UnfoldKind::Backward | UnfoldKind::OcBackward => {
            let (l, r, _) = narrow_backward(parent(0)?, prov.position.as_ref()?, parent(1)?)?;
            Some(Rule::trs("", l, r))
        }
        UnfoldKind::BinunfA | UnfoldKind::BinunfB | UnfoldKind::BinunfC => {
            let b = base.rule(prov.parents.first()?)?;
            let binary = usize::from(prov.kind == UnfoldKind::BinunfB);
            let units = prov.parents.len().checked_sub(1 + binary)?;
            let mut state = Partial {
                head: b.lhs.clone(),
                body: b.rhs.0.clone(),
                parents: vec![b.id.clone()],
                used_depth: None,
                unifier: Substitution::new(),
            };
            for i in 1..=units {
                let u = parent(i)?;
                if !u.rhs.is_empty() {
                    return None;
                }
                let (theta, _) = state.resolve(u)?;
                state.head = theta.apply(&state.head);
                state.body = state.body[1..].iter().map(|t| theta.apply(t)).collect();
            }
            match prov.kind {
                UnfoldKind::BinunfA => Some(Rule::new("", state.head, Goal::singleton(state.body.first()?.clone()))),
                UnfoldKind::BinunfC => state.body.is_empty().then(|| Rule::new("", state.head, Goal::empty())),
                _ => {
                    let bin = parent(units + 1)?;
                    if bin.rhs.len() != 1 {
                        return None;
                    }
                    let (theta, renamed) = state.resolve(bin)?;
                    Some(Rule::new("", theta.apply(&state.head), theta.apply_goal(&renamed.rhs)))
                }
            }
        }
    }
}

/// The program rules of a binary unfolding, in the order they are applied
/// by a leftmost derivation that the rule compresses.
pub fn leftmost_expansion(base: &Program, derived: &[UnfoldedRule], id: &str) -> Option<Vec<String>> {
    let index: HashMap<&str, &UnfoldedRule> = derived.iter().map(|r| (r.rule.id.as_str(), r)).collect();
    fn go(id: &str, base: &Program, index: &HashMap<&str, &UnfoldedRule>, out: &mut Vec<String>) -> Option<()> {
        match index.get(id) {
            Some(r) => {
                for p in &r.provenance.parents {
                    go(p, base, index, out)?;
                }
            }
            None => out.push(base.rule(id)?.id.clone()),
        }
        Some(())
    }
    let mut out = Vec::new();
    go(id, base, &index, &mut out)?;
    Some(out)
}

/// Runs the leftmost derivation of [`leftmost_expansion`] from `<u>`.
pub fn leftmost_replay(base: &Program, derived: &[UnfoldedRule], rule: &UnfoldedRule) -> Option<Goal> {
    let word = leftmost_expansion(base, derived, &rule.rule.id)?;
    let mut goal = Goal::singleton(rule.rule.lhs.clone());
    for id in word {
        let step = lp_step(base.rule(&id)?, &goal, 1)?;
        goal = match step.target {
            Node::Goal(g) => g,
            Node::Term(_) => return None,
        };
    }
    Some(goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::is_variant;
    use crate::testutil::{g, t};

    fn trs(rules: &[(&str, &str)]) -> Program {
        Program::new(
            Mode::Trs,
            rules.iter().enumerate().map(|(i, (l, r))| Rule::trs(format!("r{}", i + 1), t(l), t(r))).collect(),
        )
        .unwrap()
    }

    fn lp(rules: &[(&str, &str)]) -> Program {
        Program::new(
            Mode::Lp,
            rules.iter().enumerate().map(|(i, (l, r))| Rule::new(format!("r{}", i + 1), t(l), g(r))).collect(),
        )
        .unwrap()
    }

    fn looping_trs() -> Program {
        trs(&[("f(x)", "g(h(x,1),x)"), ("1", "0"), ("h(x,0)", "f(f(x))")])
    }

    fn branching_tower() -> Program {
        trs(&[
            ("f(x,g(y,0,y),x)", "h(x,y)"),
            ("h(x,y)", "f(g(x,0,x),y,g(x,0,x))"),
            ("f(x,0,x)", "f(g(x,0,x),g(x,1,x),g(x,0,x))"),
            ("1", "0"),
        ])
    }

    fn has(u: &Unfolding, lhs: &str, rhs: &str) -> bool {
        u.contains_variant(&t(lhs), &Goal::singleton(t(rhs)))
    }

    #[test]
    fn defined_and_dependency_pairs() {
        let p = looping_trs();
        let names: Vec<String> = defined_symbols(&p).iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["f", "1", "h"]);
        assert!(defined_symbols(&Program::empty(Mode::Trs)).is_empty());
        let dps = dependency_pairs(&p);
        let shown: Vec<String> = dps.iter().map(|d| d.rule.to_string()).collect();
        assert!(shown.contains(&"dp1: f#(x) -> h#(x,1)".to_string()));
        assert!(shown.iter().any(|s| s.ends_with("h#(x,0) -> f#(f(x))")));
        assert!(shown.iter().any(|s| s.ends_with("h#(x,0) -> f#(x)")));
        let q = trs(&[("f(x)", "x")]);
        assert!(dependency_pairs(&q).is_empty());
    }

    #[test]
    fn dependency_pairs_unfold_to_the_loop() {
        let u = unfold_trs(&looping_trs(), &UnfoldConfig::with_depth(2)).unwrap();
        assert!(has(&u, "f#(x)", "h#(x,0)"));
        assert!(has(&u, "f#(x)", "f#(f(x))"));
        let p = looping_trs();
        for r in &u.rules {
            assert!(replay(&p, &u.rules, r), "{}", r.rule);
            let marked_below_root = r.rule.lhs.args().iter().chain(r.rule.rhs_term().unwrap().args()).any(Term::contains_marked);
            assert!(!marked_below_root);
        }
    }

    #[test]
    fn branching_tower_unfolding() {
        let u = unfold_trs(&branching_tower(), &UnfoldConfig::with_depth(1)).unwrap();
        assert!(has(&u, "f#(x,g(y,0,y),x)", "f#(g(x,0,x),y,g(x,0,x))"));
        assert!(has(&u, "f#(x,0,x)", "f#(g(x,0,x),g(x,0,x),g(x,0,x))"));
    }

    #[test]
    fn binary_unfolding_examples() {
        let p = lp(&[("p(f(x,0))", "<p(x),q(x)>")]);
        let u = binary_unfold(&p, &UnfoldConfig::with_depth(2)).unwrap();
        assert!(u.contains_variant(&t("p(f(x,0))"), &g("<p(x)>")));
        assert!(u.rules.iter().all(|r| r.rule.rhs.len() <= 1));

        let p = lp(&[("p(x)", "<q(x),p(s(x))>"), ("q(0)", "<>")]);
        let u = binary_unfold(&p, &UnfoldConfig::with_depth(2)).unwrap();
        assert!(u.contains_variant(&t("q(0)"), &Goal::empty()));
        let r = u.rules.iter().find(|r| r.rule.is_variant_of(&Rule::new("", t("p(0)"), g("<p(s(0))>")))).unwrap();
        assert_eq!(r.provenance.kind, UnfoldKind::BinunfA);
        for r in &u.rules {
            assert!(replay(&p, &u.rules, r), "{}", r.rule);
        }
        let reached = leftmost_replay(&p, &u.rules, r).unwrap();
        assert!(is_variant(reached.first().unwrap(), &t("p(s(0))")));
    }

    #[test]
    fn overlap_closure_diverges() {
        let p = trs(&[("f(s(x),y)", "f(x,s(y))")]);
        let u = overlap_closure(&p, &UnfoldConfig::with_depth(0)).unwrap();
        assert_eq!(u.len(), 1);
        let u = overlap_closure(&p, &UnfoldConfig::with_depth(2)).unwrap();
        assert!(has(&u, "f(s(s(x)),y)", "f(x,s(s(y)))"));
        assert!(has(&u, "f(s(s(s(x))),y)", "f(x,s(s(s(y))))"));
        for r in &u.rules {
            assert!(replay(&p, &u.rules, r), "{}", r.rule);
        }
        let again = overlap_closure(&u.program(Mode::Trs).unwrap(), &UnfoldConfig::with_depth(0)).unwrap();
        assert_eq!(again.len(), u.len());
    }

    #[test]
    fn cap_keeps_partial_set() {
        let config = UnfoldConfig { max_rules: 3, ..UnfoldConfig::with_depth(4) };
        match unfold_trs(&looping_trs(), &config) {
            Err(Error::Truncated { partial, .. }) => assert_eq!(partial.len(), 3),
            other => panic!("expected truncation, got {other:?}"),
        }
    }
}
