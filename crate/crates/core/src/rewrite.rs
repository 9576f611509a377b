//! Rules, programs and the three rewrite semantics: term rewriting,
//! narrowing of goals and restricted (root, singleton) narrowing.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subst::{match_term, mgu, renaming_apart, Substitution};
use crate::term::{Goal, Node, Position, Signature, Term, Var, DEFAULT_MAX_TERM_SIZE};

/// Default bound on the number of results of [`run_word`].
pub const DEFAULT_RESULT_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Trs,
    Lp,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Trs => "trs",
            Mode::Lp => "lp",
        })
    }
}

/// Which rewrite relation a step belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// `s|p = uθ`, `t = s[vθ]p`.
    Trs,
    /// Narrowing of a goal element with a renamed rule.
    LpNarrow,
    /// `uθ ↪ vθ` for rules with `Var(v) ⊆ Var(u)`.
    LpRestricted,
}

impl Semantics {
    /// Whether nodes of this semantics are goals (otherwise terms).
    pub fn on_goals(self) -> bool {
        self == Semantics::LpNarrow
    }

    /// Whether the semantics is closed under substitutions.
    pub fn closed_under_substitutions(self) -> bool {
        self != Semantics::LpNarrow
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Trs => "trs",
            Semantics::LpNarrow => "lp-narrow",
            Semantics::LpRestricted => "lp-restricted",
        })
    }
}

/// A rule `(u, <v1,...,vn>)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    pub lhs: Term,
    pub rhs: Goal,
}

impl Rule {
    pub fn new(id: impl Into<String>, lhs: Term, rhs: Goal) -> Rule {
        Rule { id: id.into(), lhs, rhs }
    }

    /// A rule with a singleton right-hand side.
    pub fn trs(id: impl Into<String>, lhs: Term, rhs: Term) -> Rule {
        Rule::new(id, lhs, Goal::singleton(rhs))
    }

    /// The right-hand side term of a rule with a singleton right-hand side.
    pub fn rhs_term(&self) -> Option<&Term> {
        match self.rhs.terms() {
            [v] => Some(v),
            _ => None,
        }
    }

    pub fn is_trs_usable(&self) -> bool {
        self.rhs.len() == 1
    }

    pub fn is_restricted_usable(&self) -> bool {
        self.rhs_term().is_some_and(|v| v.vars().is_subset(&self.lhs.vars()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.lhs.vars();
        out.extend(self.rhs.vars());
        out
    }

    /// Variables in order of first occurrence, lhs first.
    pub fn vars_in_order(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.lhs.vars_in_order(&mut out);
        self.rhs.vars_in_order(&mut out);
        out
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }

    pub fn apply(&self, theta: &Substitution) -> Rule {
        Rule::new(self.id.clone(), theta.apply(&self.lhs), theta.apply_goal(&self.rhs))
    }

    /// A variant whose variables are disjoint from `avoid`, with the renaming used.
    pub fn rename_apart(&self, avoid: &BTreeSet<Var>) -> (Rule, Substitution) {
        let rho = renaming_apart(&self.vars_in_order(), avoid);
        (self.apply(&rho), rho)
    }

    /// Lhs followed by the rhs elements, for variant comparisons.
    pub fn as_sequence(&self) -> Vec<Term> {
        std::iter::once(self.lhs.clone()).chain(self.rhs.0.iter().cloned()).collect()
    }

    pub fn is_variant_of(&self, other: &Rule) -> bool {
        crate::subst::is_variant_seq(&self.as_sequence(), &other.as_sequence())
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rhs_term() {
            Some(v) => write!(f, "{}: {} -> {}", self.id, self.lhs, v),
            None => write!(f, "{}: {} -> {}", self.id, self.lhs, self.rhs),
        }
    }
}

/// An ordered set of rules with unique ids.
#[derive(Debug, Clone)]
pub struct Program {
    mode: Mode,
    rules: Vec<Rule>,
    signature: Signature,
    index: HashMap<String, usize>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Program) -> bool {
        self.mode == other.mode && self.rules == other.rules
    }
}

impl Eq for Program {}

impl Program {
    pub fn new(mode: Mode, rules: Vec<Rule>) -> Result<Program> {
        let mut signature = Signature::new();
        let mut index = HashMap::with_capacity(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            if index.insert(rule.id.clone(), i).is_some() {
                return Err(Error::InvalidProgram(format!("duplicate rule id `{}`", rule.id)));
            }
            signature.extend_from(&rule.lhs)?;
            for t in rule.rhs.terms() {
                signature.extend_from(t)?;
            }
        }
        Ok(Program { mode, rules, signature, index })
    }

    pub fn empty(mode: Mode) -> Program {
        Program { mode, rules: Vec::new(), signature: Signature::new(), index: HashMap::new() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.index.get(id).map(|&i| &self.rules[i])
    }

    pub fn ids(&self) -> Vec<String> {
        self.rules.iter().map(|r| r.id.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// One rewrite step, recorded so that it can be re-executed.
#[derive(Clone, PartialEq, Eq)]
pub struct Step {
    pub source: Node,
    pub rule: String,
    /// Term position, or the 1-based goal index `<i>` for narrowing.
    pub position: Position,
    /// The matcher for rewriting, the mgu for narrowing.
    pub binder: Substitution,
    pub target: Node,
    pub semantics: Semantics,
}

impl fmt::Debug for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} => {} [{} at {} with {}]",
            self.source, self.target, self.rule, self.position, self.binder
        )
    }
}

/// A finite chain `start => ... => end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub start: Node,
    pub steps: Vec<Step>,
}

impl Chain {
    pub fn new(start: Node) -> Chain {
        Chain { start, steps: Vec::new() }
    }

    pub fn end(&self) -> &Node {
        self.steps.last().map_or(&self.start, |s| &s.target)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends a step that starts at the current end.
    pub fn push(&mut self, step: Step) -> Result<()> {
        if &step.source != self.end() {
            return Err(Error::InvalidArgument(format!(
                "step from {} does not continue a chain ending in {}",
                step.source,
                self.end()
            )));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn extend(&mut self, other: Chain) -> Result<()> {
        other.steps.into_iter().try_for_each(|s| self.push(s))
    }

    pub fn is_consecutive(&self) -> bool {
        let mut current = &self.start;
        for step in &self.steps {
            if &step.source != current {
                return false;
            }
            current = &step.target;
        }
        true
    }

    /// The rule ids applied, in order.
    pub fn word(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.rule.clone()).collect()
    }

    /// Start followed by every step target.
    pub fn nodes(&self) -> Vec<&Node> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.target)).collect()
    }
}

/// `s ->(r,p) s[vθ]p` when `s|p = uθ`.
pub fn trs_step(rule: &Rule, s: &Term, p: &Position) -> Option<Step> {
    let v = rule.rhs_term()?;
    let theta = match_term(&rule.lhs, s.get(p)?)?;
    let target = s.replace_at(p, theta.apply(v)).ok()?;
    Some(Step {
        source: Node::Term(s.clone()),
        rule: rule.id.clone(),
        position: p.clone(),
        binder: theta,
        target: Node::Term(target),
        semantics: Semantics::Trs,
    })
}

/// Narrowing of the `index`-th (1-based) element of `goal`.
pub fn lp_step(rule: &Rule, goal: &Goal, index: usize) -> Option<Step> {
    let selected = goal.terms().get(index.checked_sub(1)?)?;
    let (renamed, _) = rule.rename_apart(&goal.vars());
    let theta = mgu(selected, &renamed.lhs)?;
    let mut terms = Vec::with_capacity(goal.len() + renamed.rhs.len());
    terms.extend_from_slice(&goal.terms()[..index - 1]);
    terms.extend(renamed.rhs.0.iter().cloned());
    terms.extend_from_slice(&goal.terms()[index..]);
    Some(Step {
        source: Node::Goal(goal.clone()),
        rule: rule.id.clone(),
        position: Position::new(vec![index]),
        binder: theta.clone(),
        target: Node::Goal(theta.apply_goal(&Goal(terms))),
        semantics: Semantics::LpNarrow,
    })
}

/// `uθ ↪ vθ` for a restricted-usable rule.
pub fn restricted_step(rule: &Rule, s: &Term) -> Option<Step> {
    if !rule.is_restricted_usable() {
        return None;
    }
    let v = rule.rhs_term()?;
    let theta = match_term(&rule.lhs, s)?;
    Some(Step {
        source: Node::Term(s.clone()),
        rule: rule.id.clone(),
        position: Position::root(),
        target: Node::Term(theta.apply(v)),
        binder: theta,
        semantics: Semantics::LpRestricted,
    })
}

/// Re-executes a step for `rule` at `position` from `source`.
pub fn step_at(rule: &Rule, source: &Node, position: &Position, semantics: Semantics) -> Option<Step> {
    match (semantics, source) {
        (Semantics::Trs, Node::Term(s)) => trs_step(rule, s, position),
        (Semantics::LpRestricted, Node::Term(s)) if position.is_root() => restricted_step(rule, s),
        (Semantics::LpNarrow, Node::Goal(g)) => match position.path() {
            [i] => lp_step(rule, g, *i),
            _ => None,
        },
        _ => None,
    }
}

/// All steps with one rule, positions in lexicographic order.
pub fn rule_successors(rule: &Rule, source: &Node, semantics: Semantics) -> Vec<Step> {
    match (semantics, source) {
        (Semantics::Trs, Node::Term(s)) => {
            if !rule.is_trs_usable() {
                return Vec::new();
            }
            s.positions().iter().filter_map(|p| trs_step(rule, s, p)).collect()
        }
        (Semantics::LpRestricted, Node::Term(s)) => restricted_step(rule, s).into_iter().collect(),
        (Semantics::LpNarrow, Node::Goal(g)) => {
            (1..=g.len()).filter_map(|i| lp_step(rule, g, i)).collect()
        }
        _ => Vec::new(),
    }
}

/// All steps from `source`, by rule order then position.
pub fn successors(program: &Program, source: &Node, semantics: Semantics) -> Vec<Step> {
    program.rules().iter().flat_map(|r| rule_successors(r, source, semantics)).collect()
}

pub fn trs_successors(program: &Program, s: &Term) -> Vec<Step> {
    successors(program, &Node::Term(s.clone()), Semantics::Trs)
}

pub fn lp_successors(program: &Program, g: &Goal) -> Vec<Step> {
    successors(program, &Node::Goal(g.clone()), Semantics::LpNarrow)
}

pub fn restricted_successors(program: &Program, s: &Term) -> Vec<Step> {
    successors(program, &Node::Term(s.clone()), Semantics::LpRestricted)
}

/// Every chain from `start` applying the rules of `word` in order, one
/// chain per distinct end node, breadth-first.
pub fn word_chains(
    program: &Program,
    start: &Node,
    word: &[String],
    semantics: Semantics,
    cap: usize,
) -> Result<Vec<Chain>> {
    let mut frontier = vec![Chain::new(start.clone())];
    for id in word {
        let rule = program.rule(id).ok_or_else(|| Error::UnknownRule(id.clone()))?;
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for chain in &frontier {
            for step in rule_successors(rule, chain.end(), semantics) {
                if step.target.size() > DEFAULT_MAX_TERM_SIZE {
                    return Err(Error::Resource(format!(
                        "term of {} nodes exceeds the size limit",
                        step.target.size()
                    )));
                }
                if seen.insert(step.target.clone()) {
                    let mut extended = chain.clone();
                    extended.steps.push(step);
                    next.push(extended);
                    if next.len() > cap {
                        return Err(Error::Resource(format!(
                            "more than {cap} results while running a word"
                        )));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(frontier)
}

/// All nodes reachable from `start` by `=>_w`; `{start}` for the empty word.
pub fn run_word(
    program: &Program,
    start: &Node,
    word: &[String],
    semantics: Semantics,
) -> Result<Vec<Node>> {
    Ok(word_chains(program, start, word, semantics, DEFAULT_RESULT_CAP)?
        .into_iter()
        .map(|c| c.end().clone())
        .collect())
}

/// Whether `step` re-executes exactly under `program`.
pub fn verify_step(program: &Program, step: &Step) -> bool {
    let Some(rule) = program.rule(&step.rule) else {
        return false;
    };
    step_at(rule, &step.source, &step.position, step.semantics).is_some_and(|s| &s == step)
}

/// Whether the chain is consecutive and each step re-executes.
pub fn verify_chain(program: &Program, chain: &Chain) -> bool {
    chain.is_consecutive() && chain.steps.iter().all(|s| verify_step(program, s))
}

/// Re-executes `chain` from `start θ` with the same rules at the same
/// positions. Succeeds for semantics closed under substitutions.
pub fn instantiate_chain(program: &Program, chain: &Chain, theta: &Substitution) -> Option<Chain> {
    let mut out = Chain::new(theta.apply_node(&chain.start));
    for step in &chain.steps {
        let rule = program.rule(&step.rule)?;
        let next = step_at(rule, out.end(), &step.position, step.semantics)?;
        out.steps.push(next);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{g, t};

    fn looping_trs() -> Program {
        Program::new(
            Mode::Trs,
            vec![
                Rule::trs("r1", t("f(x)"), t("g(h(x,1),x)")),
                Rule::trs("r2", t("1"), t("0")),
                Rule::trs("r3", t("h(x,0)"), t("f(f(x))")),
            ],
        )
        .unwrap()
    }

    fn ids(word: &[&str]) -> Vec<String> {
        word.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rewriting_successors() {
        let p = looping_trs();
        let steps = trs_successors(&p, &t("g(h(f(x),0),x)"));
        assert!(steps.iter().any(|s| s.rule == "r3"
            && s.position == Position::new(vec![1])
            && s.target == Node::Term(t("g(f(f(f(x))),x)"))));
        assert!(trs_successors(&p, &t("0")).is_empty());
        let steps = trs_successors(&p, &t("f(x)"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].target, Node::Term(t("g(h(x,1),x)")));
        assert!(steps[0].position.is_root());
    }

    #[test]
    fn narrowing_successors() {
        let r = Rule::new("r", t("p(f(x,0))"), g("<p(x),q(x)>"));
        let p = Program::new(Mode::Lp, vec![r]).unwrap();
        let steps = lp_successors(&p, &g("<p(0),p(f(x,x)),p(x)>"));
        let at2: Vec<_> = steps.iter().filter(|s| s.position == Position::new(vec![2])).collect();
        assert_eq!(at2.len(), 1);
        assert_eq!(at2[0].target, Node::Goal(g("<p(0),p(0),q(0),p(0)>")));
        assert!(lp_successors(&p, &Goal::empty()).is_empty());

        let r = Rule::new("r", t("f(s(x),y)"), g("<f(x,s(y))>"));
        let p = Program::new(Mode::Lp, vec![r]).unwrap();
        let steps = lp_successors(&p, &g("<f(x,y)>"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].target, Node::Goal(g("<f(x_1,s(y))>")));
        assert_eq!(steps[0].binder.to_string(), "{x -> s(x_1), y_1 -> y}");
    }

    #[test]
    fn restricted_successors_root_only() {
        let p = Program::new(
            Mode::Lp,
            vec![
                Rule::trs("r1", t("f(x,s(y))"), t("f(s(x),y)")),
                Rule::trs("r2", t("f(x,0)"), t("f(s(0),x)")),
                Rule::trs("bad", t("f(x,0)"), t("f(y,x)")),
            ],
        )
        .unwrap();
        let steps = restricted_successors(&p, &t("f(s(0),0)"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].target, Node::Term(t("f(s(0),s(0))")));
        let q = Program::new(Mode::Lp, vec![Rule::trs("r", t("f(x,1)"), t("f(1,x)"))]).unwrap();
        assert!(restricted_successors(&q, &t("f(0,y)")).is_empty());
        for s in restricted_successors(&p, &t("f(s(0),s(0))")) {
            assert!(trs_step(p.rule(&s.rule).unwrap(), &t("f(s(0),s(0))"), &Position::root())
                .is_some_and(|x| x.target == s.target));
        }
    }

    #[test]
    fn running_words() {
        let p = looping_trs();
        let out = run_word(&p, &Node::Term(t("f(x)")), &ids(&["r1", "r2", "r3"]), Semantics::Trs).unwrap();
        assert!(out.contains(&Node::Term(t("g(f(f(x)),x)"))));
        let start = Node::Term(t("f(x)"));
        assert_eq!(run_word(&p, &start, &[], Semantics::Trs).unwrap(), vec![start.clone()]);
        let q = Program::new(
            Mode::Lp,
            vec![
                Rule::trs("r1", t("f(x,s(y))"), t("f(s(x),y)")),
                Rule::trs("r2", t("f(x,0)"), t("f(s(0),x)")),
            ],
        )
        .unwrap();
        let out = run_word(&q, &Node::Term(t("f(s(0),s(0))")), &ids(&["r1"]), Semantics::LpRestricted).unwrap();
        assert_eq!(out, vec![Node::Term(t("f(s(s(0)),0)"))]);
        assert!(matches!(
            run_word(&p, &start, &ids(&["nope"]), Semantics::Trs),
            Err(Error::UnknownRule(_))
        ));
    }

    #[test]
    fn chain_verification() {
        let p = looping_trs();
        let chains =
            word_chains(&p, &Node::Term(t("f(x)")), &ids(&["r1", "r2", "r3"]), Semantics::Trs, 100).unwrap();
        let chain = chains
            .into_iter()
            .find(|c| c.end() == &Node::Term(t("g(f(f(x)),x)")))
            .unwrap();
        assert!(verify_chain(&p, &chain));
        let mut forged = chain.clone();
        forged.steps[2].target = Node::Term(t("g(f(x),x)"));
        assert!(!verify_chain(&p, &forged));
        assert!(verify_chain(&p, &Chain::new(Node::Term(t("f(x)")))));
    }

    #[test]
    fn instantiating_chains() {
        let p = looping_trs();
        let chain = word_chains(&p, &Node::Term(t("f(x)")), &ids(&["r1", "r2", "r3"]), Semantics::Trs, 100)
            .unwrap()
            .remove(0);
        let theta = Substitution::single(Var::new("x"), t("0"));
        let inst = instantiate_chain(&p, &chain, &theta).unwrap();
        assert_eq!(inst.end(), &theta.apply_node(chain.end()));
        assert!(verify_chain(&p, &inst));
    }
}
