//! Certificates: a self-contained record of a verdict that can be checked
//! against the input program alone.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detect::{find_embedding, EmbeddingKind, LoopRelation, RecurrentPattern, TChoice};
use crate::error::{Error, Result};
use crate::frontend::analyze::{Answer, Stats, Technique, Verdict, Witness};
use crate::frontend::syntax::{parse_context_with, parse_goal_with, parse_term_with, VarNaming};
use crate::rewrite::{step_at, Chain, Mode, Program, Rule, Semantics};
use crate::term::{Goal, Holes, Node, Position, Term, Var};
use crate::unfold::{replay, Provenance, UnfoldKind, UnfoldedRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub rule: String,
    pub position: String,
    pub source: String,
    pub target: String,
    pub binder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub semantics: Semantics,
    pub start: String,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRecord {
    pub id: String,
    pub lhs: String,
    pub rhs: Vec<String>,
    pub depth: usize,
    pub kind: UnfoldKind,
    pub parents: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<String>,
    pub unifier: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessRecord {
    Loop {
        word: Vec<String>,
        relation: EmbeddingKind,
        root_only: bool,
        chain: ChainRecord,
        context: String,
        binder: String,
        position: String,
    },
    RecurrentPair {
        c1: String,
        c2: String,
        n1: usize,
        n2: usize,
        n3: usize,
        n4: usize,
        s: String,
        t: TChoice,
        x: String,
        y: String,
        chain1: ChainRecord,
        chain2: ChainRecord,
        m: usize,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub answer: Answer,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub technique: Option<Technique>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    /// Every variable name occurring in the certificate's terms.
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    pub rules: Vec<RuleRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulated_prefix: Option<ChainRecord>,
    pub stats: Stats,
}

fn chain_record(chain: &Chain, semantics: Semantics, vars: &mut BTreeSet<Var>) -> ChainRecord {
    vars.extend(chain.start.vars());
    ChainRecord {
        semantics,
        start: chain.start.to_string(),
        steps: chain
            .steps
            .iter()
            .map(|s| {
                vars.extend(s.target.vars());
                StepRecord {
                    rule: s.rule.clone(),
                    position: s.position.to_string(),
                    source: s.source.to_string(),
                    target: s.target.to_string(),
                    binder: s.binder.to_string(),
                }
            })
            .collect(),
    }
}

fn rule_record(u: &UnfoldedRule, vars: &mut BTreeSet<Var>) -> RuleRecord {
    vars.extend(u.rule.vars());
    RuleRecord {
        id: u.rule.id.clone(),
        lhs: u.rule.lhs.to_string(),
        rhs: u.rule.rhs.terms().iter().map(ToString::to_string).collect(),
        depth: u.depth,
        kind: u.provenance.kind,
        parents: u.provenance.parents.clone(),
        position: u.provenance.position.as_ref().map(ToString::to_string),
        unifier: u.provenance.unifier.to_string(),
    }
}

/// Builds the certificate of a verdict. For `MAYBE` only the stats are kept.
pub fn certificate(verdict: &Verdict) -> Certificate {
    let mut vars = BTreeSet::new();
    let mut cert = Certificate {
        answer: verdict.answer,
        mode: verdict.mode,
        technique: None,
        start: None,
        variables: Vec::new(),
        witness: None,
        rules: Vec::new(),
        simulated_prefix: None,
        stats: verdict.stats.clone(),
    };
    if verdict.answer == Answer::Maybe {
        return cert;
    }
    if let Some(w) = &verdict.witness {
        cert.technique = Some(w.technique());
        cert.witness = Some(match w {
            Witness::Loop(lw) => WitnessRecord::Loop {
                word: lw.word.clone(),
                relation: lw.relation.kind,
                root_only: lw.relation.root_only,
                chain: chain_record(&lw.chain, lw.semantics, &mut vars),
                context: lw.embedding.context.to_string(),
                binder: lw.embedding.binder.to_string(),
                position: lw.embedding.position.to_string(),
            },
            Witness::Recurrent { pair, m, n } => {
                let p = &pair.pattern;
                WitnessRecord::RecurrentPair {
                    c1: p.c1.to_string(),
                    c2: p.c2.to_string(),
                    n1: p.n1,
                    n2: p.n2,
                    n3: p.n3,
                    n4: p.n4,
                    s: p.s.to_string(),
                    t: p.t,
                    x: p.x.name().to_string(),
                    y: p.y.name().to_string(),
                    chain1: chain_record(&pair.chain1, pair.semantics, &mut vars),
                    chain2: chain_record(&pair.chain2, pair.semantics, &mut vars),
                    m: *m,
                    n: *n,
                }
            }
        });
    }
    if let Some(start) = &verdict.start {
        vars.extend(start.vars());
        cert.start = Some(start.to_string());
    }
    cert.rules = verdict.rules.iter().map(|r| rule_record(r, &mut vars)).collect();
    if let (Some(chain), Some(w)) = (&verdict.simulated_prefix, &verdict.witness) {
        let semantics = match w {
            Witness::Loop(lw) => lw.semantics,
            Witness::Recurrent { pair, .. } => pair.semantics,
        };
        cert.simulated_prefix = Some(chain_record(chain, semantics, &mut vars));
    }
    cert.variables = vars.iter().map(|v| v.name().to_string()).collect();
    cert
}

fn text_chain(out: &mut String, chain: &ChainRecord) {
    let _ = writeln!(out, "  {}", chain.start);
    for s in &chain.steps {
        let _ = writeln!(out, "  => {}   [{} at {} with {}]", s.target, s.rule, s.position, s.binder);
    }
}

/// Human-readable rendering; the first line is the answer.
pub fn render_text(cert: &Certificate) -> String {
    let mut out = format!("{}\n", cert.answer);
    let _ = writeln!(out, "mode: {}", cert.mode);
    if let Some(start) = &cert.start {
        let _ = writeln!(out, "infinite computation from: {start}");
    }
    match &cert.witness {
        Some(WitnessRecord::Loop { word, relation, root_only, chain, context, binder, position }) => {
            let scope = if *root_only { " without context" } else { "" };
            let _ = writeln!(out, "technique: loop ({relation}{scope}, {} steps)", chain.semantics);
            let _ = writeln!(out, "word: {}", word.join(" "));
            text_chain(&mut out, chain);
            let _ = writeln!(out, "embedding: context {context}, binder {binder}, position {position}");
        }
        Some(WitnessRecord::RecurrentPair { c1, c2, n1, n2, n3, n4, s, t, x, y, chain1, chain2, m, n }) => {
            let _ = writeln!(out, "technique: recurrent pair ({} steps)", chain1.semantics);
            let _ = writeln!(out, "c1 = {c1}, c2 = {c2}, (n1,n2,n3,n4) = ({n1},{n2},{n3},{n4}), s = {s}, t = {t}");
            let _ = writeln!(out, "x = {x}, y = {y}");
            let _ = writeln!(out, "first chain:");
            text_chain(&mut out, chain1);
            let _ = writeln!(out, "second chain:");
            text_chain(&mut out, chain2);
            let _ = writeln!(out, "simulated from c1[{m},{n}]");
        }
        None => {}
    }
    if !cert.rules.is_empty() {
        let _ = writeln!(out, "rules:");
        for r in &cert.rules {
            let rhs = if r.rhs.len() == 1 && cert.mode == Mode::Trs { r.rhs[0].clone() } else { format!("<{}>", r.rhs.join(",")) };
            let at = r.position.as_ref().map(|p| format!(" at {p}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "  {}: {} -> {}   [depth {}, {} of {}{at}]",
                r.id,
                r.lhs,
                rhs,
                r.depth,
                r.kind,
                r.parents.join(", ")
            );
        }
    }
    if let Some(prefix) = &cert.simulated_prefix {
        let _ = writeln!(out, "simulated prefix ({} steps):", prefix.steps.len());
        text_chain(&mut out, prefix);
    }
    let st = &cert.stats;
    let _ = writeln!(
        out,
        "stats: {} input rules, {} unfolded rules, depth {}, {} loop nodes, {} recpair nodes",
        st.input_rules, st.unfolded_rules, st.depth_reached, st.loop_nodes, st.recpair_nodes
    );
    for d in &st.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    out
}

pub fn render_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificates serialize") + "\n"
}

/// Renders the certificate of a verdict.
pub fn emit_certificate(verdict: &Verdict, format: Format) -> String {
    let cert = certificate(verdict);
    match format {
        Format::Text => render_text(&cert),
        Format::Json => render_json(&cert),
    }
}

pub fn parse_certificate(json: &str) -> Result<Certificate> {
    serde_json::from_str(json).map_err(|e| Error::InvalidArgument(format!("certificate: {e}")))
}

fn bad(message: impl Into<String>) -> Error {
    Error::InvalidArgument(format!("certificate: {}", message.into()))
}

struct Reader {
    naming: VarNaming,
}

impl Reader {
    fn term(&self, text: &str) -> Result<Term> {
        Ok(parse_term_with(text, &self.naming)?)
    }

    fn node(&self, text: &str) -> Result<Node> {
        if text.starts_with('<') {
            Ok(Node::Goal(parse_goal_with(text, &self.naming)?))
        } else {
            Ok(Node::Term(self.term(text)?))
        }
    }

    fn position(text: &str) -> Result<Position> {
        Position::parse(text).ok_or_else(|| bad(format!("bad position `{text}`")))
    }

    fn rule(&self, r: &RuleRecord) -> Result<UnfoldedRule> {
        let rhs = r.rhs.iter().map(|t| self.term(t)).collect::<Result<Vec<_>>>()?;
        Ok(UnfoldedRule {
            rule: Rule::new(r.id.clone(), self.term(&r.lhs)?, Goal::new(rhs)),
            depth: r.depth,
            provenance: Provenance {
                kind: r.kind,
                parents: r.parents.clone(),
                position: r.position.as_deref().map(Reader::position).transpose()?,
                unifier: Default::default(),
            },
        })
    }

    /// Re-executes every recorded step and compares the results.
    fn chain(&self, program: &Program, rec: &ChainRecord) -> Result<Chain> {
        let mut chain = Chain::new(self.node(&rec.start)?);
        for s in &rec.steps {
            let rule = program.rule(&s.rule).ok_or_else(|| Error::UnknownRule(s.rule.clone()))?;
            if chain.end().to_string() != s.source {
                return Err(bad(format!("step source {} does not continue the chain", s.source)));
            }
            let position = Reader::position(&s.position)?;
            let step = step_at(rule, chain.end(), &position, rec.semantics)
                .ok_or_else(|| bad(format!("{} does not apply to {} at {position}", s.rule, s.source)))?;
            if step.target.to_string() != s.target || step.binder.to_string() != s.binder {
                return Err(bad(format!("step with {} yields {}, not {}", s.rule, step.target, s.target)));
            }
            chain.steps.push(step);
        }
        Ok(chain)
    }
}

/// Checks a certificate against the input program: the rules are rebuilt
/// from their provenance, every step is re-executed and the witness
/// conditions are re-established.
pub fn check_certificate(program: &Program, cert: &Certificate) -> Result<()> {
    if cert.mode != program.mode() {
        return Err(bad("mode does not match the program"));
    }
    if cert.answer == Answer::Maybe {
        return match (&cert.witness, &cert.simulated_prefix) {
            (None, None) => Ok(()),
            _ => Err(bad("a MAYBE certificate carries a witness")),
        };
    }
    let reader = Reader { naming: VarNaming::declared(&cert.variables) };
    let mut rebuilt: Vec<UnfoldedRule> = Vec::new();
    for r in &cert.rules {
        let u = reader.rule(r)?;
        if !replay(program, &rebuilt, &u) {
            return Err(bad(format!("rule {} cannot be rebuilt from its provenance", r.id)));
        }
        rebuilt.push(u);
    }
    let rules = Program::new(program.mode(), rebuilt.iter().map(|u| u.rule.clone()).collect())?;
    let (Some(witness), Some(prefix)) = (&cert.witness, &cert.simulated_prefix) else {
        return Err(bad("a NO certificate needs a witness and a simulated prefix"));
    };
    let prefix_chain = reader.chain(&rules, prefix)?;
    if prefix_chain.is_empty() {
        return Err(bad("the simulated prefix is empty"));
    }
    match witness {
        WitnessRecord::Loop { word, relation, root_only, chain, context, binder, position } => {
            let rel = LoopRelation { kind: *relation, root_only: *root_only };
            rel.check(chain.semantics)?;
            let c = reader.chain(&rules, chain)?;
            if &c.word() != word || c.is_empty() || c.start != prefix_chain.start || prefix.semantics != chain.semantics {
                return Err(bad("loop chain does not match its word or the prefix"));
            }
            let e = find_embedding(rel.kind, &c.start, c.end(), rel.root_only)
                .ok_or_else(|| bad("the loop end does not embed its start"))?;
            if &e.context.to_string() != context || &e.binder.to_string() != binder || &e.position.to_string() != position {
                return Err(bad("recorded embedding differs from the recomputed one"));
            }
        }
        WitnessRecord::RecurrentPair { c1, c2, n1, n2, n3, n4, s, t, x, y, chain1, chain2, m, n } => {
            let pattern = RecurrentPattern {
                c1: parse_context_with(c1, &reader.naming)?,
                c2: parse_context_with(c2, &reader.naming)?,
                n1: *n1,
                n2: *n2,
                n3: *n3,
                n4: *n4,
                s: reader.term(s)?,
                t: *t,
                x: Var::new(x),
                y: Var::new(y),
            };
            if pattern.c1.holes() != Holes::Two || pattern.c2.holes() != Holes::One || !pattern.s.is_ground() {
                return Err(bad("malformed recurrent pattern"));
            }
            if !chain1.semantics.closed_under_substitutions() || chain2.semantics != chain1.semantics {
                return Err(bad("recurrent pairs need a semantics closed under substitutions"));
            }
            let ch1 = reader.chain(&rules, chain1)?;
            let ch2 = reader.chain(&rules, chain2)?;
            let ends = [
                (&ch1.start, pattern.u1()),
                (ch1.end(), pattern.v1()),
                (&ch2.start, pattern.u2()),
                (ch2.end(), pattern.v2()),
            ];
            if ch1.is_empty() || ch2.is_empty() || ends.iter().any(|(a, b)| *a != &Node::Term(b.clone())) {
                return Err(bad("chains do not fit the recurrent pattern"));
            }
            if *n < pattern.n2 || prefix_chain.start != Node::Term(pattern.term(*m, *n)) {
                return Err(bad("the simulated prefix does not start at the recorded c1[m,n]"));
            }
        }
    }
    if let Some(start) = &cert.start {
        let expected = match (&prefix_chain.start, prefix.semantics) {
            (Node::Term(t), Semantics::LpRestricted) => Node::Goal(Goal::singleton(t.clone())),
            (Node::Term(t), _) => Node::Term(t.unmark()),
            (g, _) => g.clone(),
        };
        if &expected.to_string() != start {
            return Err(bad(format!("start {start} is not the unmarked prefix start")));
        }
    }
    Ok(())
}
