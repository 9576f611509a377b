//! The analysis pipeline: unfold, search for a witness, simulate and
//! verify its infinite chain.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::detect::{
    find_loop, find_recurrent_pair, infinite_chain_prefix, witness_chain, Budget, LoopRelation, LoopWitness,
    RecurrentPair,
};
use crate::error::{Error, Result};
use crate::rewrite::{verify_chain, Chain, Mode, Program, Semantics};
use crate::term::{Goal, Node};
use crate::unfold::{binary_unfold, replay, unfold_trs, Provenance, UnfoldConfig, UnfoldedRule, Unfolding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technique {
    Loop,
    #[serde(rename = "recpair")]
    RecurrentPair,
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technique::Loop => "loop",
            Technique::RecurrentPair => "recpair",
        })
    }
}

impl std::str::FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Technique> {
        match s {
            "loop" => Ok(Technique::Loop),
            "recpair" => Ok(Technique::RecurrentPair),
            _ => Err(Error::InvalidArgument(format!("unknown technique `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub techniques: Vec<Technique>,
    pub depth: usize,
    /// `None` means 1 on unfolded rules and 3 in raw search.
    pub max_word: Option<usize>,
    pub simulate: usize,
    /// Wall-clock limit of each technique, and of the unfolding.
    pub timeout: Duration,
    pub raw: bool,
    pub max_rules: usize,
    pub max_nodes: usize,
}

impl Default for AnalysisConfig {
    fn default() -> AnalysisConfig {
        AnalysisConfig {
            techniques: vec![Technique::Loop, Technique::RecurrentPair],
            depth: 4,
            max_word: None,
            simulate: 5,
            timeout: Duration::from_secs(10),
            raw: false,
            max_rules: 50_000,
            max_nodes: 1_000_000,
        }
    }
}

impl AnalysisConfig {
    pub fn max_word(&self) -> usize {
        self.max_word.unwrap_or(if self.raw { 3 } else { 1 }).max(1)
    }

    fn unfold_config(&self, depth: usize) -> UnfoldConfig {
        UnfoldConfig {
            depth,
            max_rules: self.max_rules,
            deadline: Some(Instant::now() + self.timeout),
            ..UnfoldConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    #[serde(rename = "NO")]
    No,
    #[serde(rename = "MAYBE")]
    Maybe,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::No => "NO",
            Answer::Maybe => "MAYBE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Loop(LoopWitness),
    /// The pair and the exponents `(m, n)` the simulation starts from.
    Recurrent { pair: RecurrentPair, m: usize, n: usize },
}

impl Witness {
    pub fn technique(&self) -> Technique {
        match self {
            Witness::Loop(_) => Technique::Loop,
            Witness::Recurrent { .. } => Technique::RecurrentPair,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub input_rules: usize,
    pub unfolded_rules: usize,
    pub depth_reached: usize,
    pub loop_nodes: usize,
    pub recpair_nodes: usize,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    pub mode: Mode,
    pub witness: Option<Witness>,
    pub simulated_prefix: Option<Chain>,
    /// The node whose computation is infinite in the input program; for
    /// witnesses on dependency pairs, the unmarked start term.
    pub start: Option<Node>,
    /// The rules the witness uses and their ancestors, in generation order.
    pub rules: Vec<UnfoldedRule>,
    pub stats: Stats,
}

impl Verdict {
    fn maybe(mode: Mode, stats: Stats) -> Verdict {
        Verdict { answer: Answer::Maybe, mode, witness: None, simulated_prefix: None, start: None, rules: vec![], stats }
    }
}

/// One search pass over a fixed rule set.
struct Search<'a> {
    config: &'a AnalysisConfig,
    /// Each technique's budget and remaining search time.
    budgets: Vec<(Technique, Option<(Budget, Duration)>)>,
    stats: Stats,
}

impl Search<'_> {
    fn run(&mut self, program: &Program, raw: bool) -> Option<(Witness, Chain)> {
        let max_word = self.config.max_word();
        let mode = program.mode();
        for (technique, slot) in &mut self.budgets {
            let Some((budget, remaining)) = slot else { continue };
            let started = Instant::now();
            budget.deadline = Some(started + *remaining);
            let found = match technique {
                Technique::Loop => search_loop(program, mode, raw, max_word, budget)
                    .and_then(|w| w.map(|w| simulate_loop(program, w, self.config.simulate)).transpose()),
                Technique::RecurrentPair => search_recpair(program, mode, max_word, budget)
                    .and_then(|p| p.map(|p| simulate_recpair(program, p, self.config.simulate)).transpose()),
            };
            *remaining = remaining.saturating_sub(started.elapsed());
            match technique {
                Technique::Loop => self.stats.loop_nodes = budget.spent(),
                Technique::RecurrentPair => self.stats.recpair_nodes = budget.spent(),
            }
            match found {
                Ok(Some(Some(hit))) => return Some(hit),
                Ok(Some(None)) => self.stats.diagnostics.push(format!("{technique}: witness failed verification")),
                Ok(None) => {}
                Err(e) => {
                    self.stats.diagnostics.push(format!("{technique}: {e}"));
                    if matches!(e, Error::Resource(_)) {
                        *slot = None;
                    }
                }
            }
        }
        None
    }
}

fn search_loop(
    program: &Program,
    mode: Mode,
    raw: bool,
    max_word: usize,
    budget: &mut Budget,
) -> Result<Option<LoopWitness>> {
    let (relation, semantics) = match mode {
        Mode::Trs => (LoopRelation::ins(), Semantics::Trs),
        Mode::Lp => (LoopRelation::mg(), Semantics::LpNarrow),
    };
    let (relation, candidates) = if raw {
        (relation, program.ids())
    } else {
        // Unfolded rules are tried alone, without context.
        let ids = program.rules().iter().filter(|r| mode == Mode::Trs || r.rhs.len() == 1).map(|r| r.id.clone());
        (relation.root_only(), ids.collect())
    };
    find_loop(program, &candidates, max_word, relation, semantics, budget)
}

fn search_recpair(program: &Program, mode: Mode, max_word: usize, budget: &mut Budget) -> Result<Option<RecurrentPair>> {
    let semantics = match mode {
        Mode::Trs => Semantics::Trs,
        Mode::Lp => Semantics::LpRestricted,
    };
    let candidates: Vec<String> = program
        .rules()
        .iter()
        .filter(|r| if mode == Mode::Trs { r.is_trs_usable() } else { r.is_restricted_usable() })
        .map(|r| r.id.clone())
        .collect();
    find_recurrent_pair(program, &candidates, max_word, semantics, budget)
}

fn simulate_loop(program: &Program, witness: LoopWitness, simulate: usize) -> Result<Option<(Witness, Chain)>> {
    let chain = infinite_chain_prefix(program, &witness, simulate.max(1))?;
    Ok(verify_chain(program, &chain).then_some((Witness::Loop(witness), chain)))
}

fn simulate_recpair(program: &Program, pair: RecurrentPair, simulate: usize) -> Result<Option<(Witness, Chain)>> {
    let (m, n) = (1, pair.pattern.n2);
    // Towers may grow exponentially; fall back to fewer macro-steps.
    let mut k = simulate.max(1);
    let chain = loop {
        match witness_chain(program, &pair, m, n, k) {
            Ok((chain, _)) => break chain,
            Err(Error::Resource(_)) if k > 1 => k -= 1,
            Err(e) => return Err(e),
        }
    };
    let ok = verify_chain(program, &chain) && verify_chain(program, &pair.chain1) && verify_chain(program, &pair.chain2);
    Ok(ok.then_some((Witness::Recurrent { pair, m, n }, chain)))
}

fn used_ids(witness: &Witness) -> BTreeSet<String> {
    match witness {
        Witness::Loop(w) => w.word.iter().cloned().collect(),
        Witness::Recurrent { pair, .. } => pair.word1().into_iter().chain(pair.word2()).collect(),
    }
}

/// The used rules and all their ancestors within `unfolding`.
fn with_ancestors(unfolding: &Unfolding, ids: BTreeSet<String>) -> Vec<UnfoldedRule> {
    let mut keep = ids;
    let mut todo: Vec<String> = keep.iter().cloned().collect();
    while let Some(id) = todo.pop() {
        let Some(r) = unfolding.get(&id) else { continue };
        for parent in &r.provenance.parents {
            if parent != &id && unfolding.get(parent).is_some() && keep.insert(parent.clone()) {
                todo.push(parent.clone());
            }
        }
    }
    unfolding.rules.iter().filter(|r| keep.contains(&r.rule.id)).cloned().collect()
}

fn base_unfolding(program: &Program) -> Unfolding {
    Unfolding {
        rules: program
            .rules()
            .iter()
            .map(|r| UnfoldedRule { rule: r.clone(), depth: 0, provenance: Provenance::base(&r.id) })
            .collect(),
    }
}

/// The node of the input program whose computation is infinite.
fn original_start(witness: &Witness, chain: &Chain) -> Node {
    match (&chain.start, witness) {
        (Node::Term(t), Witness::Recurrent { pair, .. }) if pair.semantics == Semantics::LpRestricted => {
            Node::Goal(Goal::singleton(t.clone()))
        }
        (Node::Term(t), _) => Node::Term(t.unmark()),
        (node, _) => node.clone(),
    }
}

/// The unfolding `analyze` searches at `depth` (the input rules in raw mode).
pub fn unfold_for(program: &Program, config: &AnalysisConfig, depth: usize) -> Result<Unfolding> {
    if config.raw {
        return Ok(base_unfolding(program));
    }
    let uc = config.unfold_config(depth);
    match program.mode() {
        Mode::Trs => unfold_trs(program, &uc),
        Mode::Lp => binary_unfold(program, &uc),
    }
}

/// Runs the pipeline. Resource limits and internal failures yield `MAYBE`
/// with a diagnostic; `NO` is only returned with a verified prefix.
pub fn analyze(program: &Program, config: &AnalysisConfig) -> Verdict {
    let mode = program.mode();
    let mut techniques = config.techniques.clone();
    techniques.dedup();
    let mut search = Search {
        config,
        budgets: techniques
            .iter()
            .map(|&t| (t, Some((Budget::new(None, config.max_nodes), config.timeout))))
            .collect(),
        stats: Stats { input_rules: program.len(), ..Stats::default() },
    };
    if program.rules().iter().any(|r| r.as_sequence().iter().any(|t| t.contains_marked())) {
        search.stats.diagnostics.push("marked symbols are reserved for dependency pairs".into());
        return Verdict::maybe(mode, search.stats);
    }
    let depths = if config.raw { 0..=0 } else { 0..=config.depth };
    for depth in depths {
        let (unfolding, truncated) = match unfold_for(program, config, depth) {
            Ok(u) => (u, false),
            Err(Error::Truncated { reason, partial }) => {
                search.stats.diagnostics.push(format!("unfolding at depth {depth} truncated: {reason}"));
                (*partial, true)
            }
            Err(e) => {
                search.stats.diagnostics.push(e.to_string());
                break;
            }
        };
        search.stats.unfolded_rules = unfolding.len();
        search.stats.depth_reached = depth;
        let unfolded = match unfolding.program(mode) {
            Ok(p) => p,
            Err(e) => {
                search.stats.diagnostics.push(e.to_string());
                break;
            }
        };
        if let Some((witness, chain)) = search.run(&unfolded, config.raw) {
            let rules = with_ancestors(&unfolding, used_ids(&witness));
            if !rules.iter().all(|r| replay(program, &unfolding.rules, r)) {
                search.stats.diagnostics.push("a witness rule failed to replay".into());
                break;
            }
            return Verdict {
                answer: Answer::No,
                mode,
                start: Some(original_start(&witness, &chain)),
                witness: Some(witness),
                simulated_prefix: Some(chain),
                rules,
                stats: search.stats,
            };
        }
        let exhausted = search.budgets.iter().all(|(_, b)| b.is_none());
        let saturated = !truncated && unfolding.max_depth() < depth;
        if truncated || exhausted || saturated {
            break;
        }
    }
    Verdict::maybe(mode, search.stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::program::{parse_lp, parse_trs};

    #[test]
    fn looping_trs_is_no() {
        let p = parse_trs("(VAR x)(RULES f(x) -> g(h(x,1),x)  1 -> 0  h(x,0) -> f(f(x)))").unwrap();
        let v = analyze(&p, &AnalysisConfig::default());
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.start.unwrap().to_string(), "f(x)");
        assert_eq!(v.simulated_prefix.unwrap().len(), 5);
        let raw = analyze(&p, &AnalysisConfig { raw: true, ..AnalysisConfig::default() });
        assert_eq!(raw.answer, Answer::No);
        assert_eq!(raw.simulated_prefix.unwrap().len(), 15);
    }

    #[test]
    fn looping_lp_is_no() {
        let p = parse_lp("p(f(X,0)) :- p(X), q(X).").unwrap();
        let v = analyze(&p, &AnalysisConfig::default());
        assert_eq!(v.answer, Answer::No);
        let Some(Witness::Loop(w)) = &v.witness else { panic!("expected a loop") };
        assert_eq!(w.word.len(), 1);
    }

    #[test]
    fn shift_reset_is_no_by_recurrent_pair() {
        let p = parse_trs("(VAR x y)(RULES f(x,s(y)) -> f(s(x),y)  f(x,0) -> f(s(0),x))").unwrap();
        let v = analyze(&p, &AnalysisConfig::default());
        assert_eq!(v.answer, Answer::No);
        assert!(matches!(v.witness, Some(Witness::Recurrent { .. })));
        let lp = parse_lp("f(X,s(Y)) :- f(s(X),Y).\nf(X,0) :- f(s(0),X).").unwrap();
        assert_eq!(analyze(&lp, &AnalysisConfig::default()).answer, Answer::No);
    }

    #[test]
    fn terminating_is_maybe() {
        let p = parse_trs("(VAR x)(RULES f(s(x)) -> f(x))").unwrap();
        let v = analyze(&p, &AnalysisConfig::default());
        assert_eq!(v.answer, Answer::Maybe);
        assert!(v.simulated_prefix.is_none());
    }

    #[test]
    fn self_loop() {
        let p = parse_trs("(VAR)(RULES a -> a)").unwrap();
        let v = analyze(&p, &AnalysisConfig { raw: true, ..AnalysisConfig::default() });
        assert_eq!(v.answer, Answer::No);
        let Some(Witness::Loop(w)) = &v.witness else { panic!("expected a loop") };
        assert_eq!(w.word, ["r1"]);
        assert!(w.embedding.binder.is_empty());
    }
}
