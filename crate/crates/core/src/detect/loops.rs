//! `(w, φ)`-loops: `a ⇒_w a'` with `a'` related to `a` by a relation
//! compatible with the rewrite relation, and their unrolling.

use std::collections::HashSet;

use crate::detect::embedding::{find_embedding, Embedding, EmbeddingContext, EmbeddingKind};
use crate::detect::Budget;
use crate::error::{Error, Result};
use crate::rewrite::{rule_successors, step_at, Chain, Program, Semantics};
use crate::term::{Goal, Node, Position};

/// The relation `φ` of a loop. With `root_only`, contexts are trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopRelation {
    pub kind: EmbeddingKind,
    pub root_only: bool,
}

impl LoopRelation {
    pub fn ins() -> LoopRelation {
        LoopRelation { kind: EmbeddingKind::Ins, root_only: false }
    }

    pub fn mg() -> LoopRelation {
        LoopRelation { kind: EmbeddingKind::Mg, root_only: false }
    }

    pub fn root_only(self) -> LoopRelation {
        LoopRelation { root_only: true, ..self }
    }

    /// Fails unless the relation is compatible with the semantics.
    pub fn check(self, semantics: Semantics) -> Result<()> {
        let ok = match (semantics, self.kind) {
            (Semantics::Trs, EmbeddingKind::Ins) | (Semantics::LpNarrow, EmbeddingKind::Mg) => true,
            (Semantics::LpRestricted, EmbeddingKind::Ins) => self.root_only,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Incompatible(format!(
                "{}{} is not compatible with {semantics} steps",
                self.kind,
                if self.root_only { " without context" } else { "" }
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopWitness {
    pub word: Vec<String>,
    pub start: Node,
    pub end: Node,
    pub embedding: Embedding,
    pub semantics: Semantics,
    pub relation: LoopRelation,
    /// The chain `start ⇒_w end`.
    pub chain: Chain,
}

fn start_node(program: &Program, id: &str, semantics: Semantics) -> Result<Node> {
    let rule = program.rule(id).ok_or_else(|| Error::UnknownRule(id.to_string()))?;
    Ok(if semantics.on_goals() { Node::Goal(Goal::singleton(rule.lhs.clone())) } else { Node::Term(rule.lhs.clone()) })
}

/// Iterative deepening over words `w` with `|w| <= max_word` whose first
/// rule is a candidate, starting from that candidate's left-hand side.
/// Returns the first loop found, or `None` when the space is exhausted.
pub fn find_loop(
    program: &Program,
    candidates: &[String],
    max_word: usize,
    relation: LoopRelation,
    semantics: Semantics,
    budget: &mut Budget,
) -> Result<Option<LoopWitness>> {
    relation.check(semantics)?;
    let starts: Vec<Node> = candidates.iter().map(|c| start_node(program, c, semantics)).collect::<Result<_>>()?;
    let mut frontiers: Vec<Vec<Chain>> = starts.iter().map(|s| vec![Chain::new(s.clone())]).collect();
    for len in 1..=max_word {
        for (ci, cand) in candidates.iter().enumerate() {
            let rules: Vec<_> = if len == 1 {
                vec![program.rule(cand).expect("checked above")]
            } else {
                program.rules().iter().collect()
            };
            let mut next = Vec::new();
            let mut seen = HashSet::new();
            for chain in &frontiers[ci] {
                for rule in &rules {
                    for step in rule_successors(rule, chain.end(), semantics) {
                        budget.spend(1)?;
                        if seen.insert(step.target.clone()) {
                            let mut longer = chain.clone();
                            longer.steps.push(step);
                            next.push(longer);
                        }
                    }
                }
            }
            for chain in &next {
                if let Some(embedding) = find_embedding(relation.kind, &starts[ci], chain.end(), relation.root_only) {
                    return Ok(Some(LoopWitness {
                        word: chain.word(),
                        start: starts[ci].clone(),
                        end: chain.end().clone(),
                        embedding,
                        semantics,
                        relation,
                        chain: chain.clone(),
                    }));
                }
            }
            frontiers[ci] = next;
        }
    }
    Ok(None)
}

/// Where a step of the previous iteration is replayed in the embedding
/// target.
fn lift(embedding: &Embedding, position: &Position) -> Result<Position> {
    match (&embedding.context, embedding.kind) {
        (EmbeddingContext::Term(_), EmbeddingKind::Ins) => Ok(embedding.position.concat(position)),
        (EmbeddingContext::Goal(c), _) => match position.path() {
            [i] => Ok(Position::new(vec![i + c.offset()])),
            _ => Err(Error::InvalidArgument(format!("{position} is not a goal index"))),
        },
        (EmbeddingContext::Term(_), EmbeddingKind::Mg) => {
            Err(Error::Incompatible("mg embeddings of terms cannot be unrolled".into()))
        }
    }
}

/// The first `k * |w|` steps of the infinite chain of a loop. Each
/// iteration replays the previous one through the embedding (inside the
/// context and under the binder for `ins`, shifted by the goal prefix for
/// `mg`); then the embedding between consecutive ends is found again.
pub fn infinite_chain_prefix(program: &Program, witness: &LoopWitness, k: usize) -> Result<Chain> {
    if k == 0 {
        return Err(Error::InvalidArgument("at least one iteration is needed".into()));
    }
    let mut chain = witness.chain.clone();
    let mut segment = witness.chain.steps.clone();
    let mut embedding = witness.embedding.clone();
    for _ in 1..k {
        let from = chain.end().clone();
        let mut current = from.clone();
        let mut next_segment = Vec::with_capacity(segment.len());
        for step in &segment {
            let position = lift(&embedding, &step.position)?;
            let rule = program.rule(&step.rule).ok_or_else(|| Error::UnknownRule(step.rule.clone()))?;
            let lifted = step_at(rule, &current, &position, witness.semantics).ok_or_else(|| {
                Error::InvalidArgument(format!("{} does not apply to {current} at {position}", step.rule))
            })?;
            current = lifted.target.clone();
            next_segment.push(lifted);
        }
        embedding = find_embedding(witness.relation.kind, &from, &current, witness.relation.root_only)
            .ok_or_else(|| Error::InvalidArgument(format!("{current} does not embed {from}")))?;
        chain.steps.extend(next_segment.iter().cloned());
        segment = next_segment;
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{verify_chain, Mode, Rule};
    use crate::subst::is_variant_seq;
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

    #[test]
    fn rewriting_loop_and_unrolling() {
        let p = looping_trs();
        let lw = find_loop(&p, &p.ids(), 3, LoopRelation::ins(), Semantics::Trs, &mut Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(lw.word, ["r1", "r2", "r3"]);
        assert_eq!(lw.end, Node::Term(t("g(f(f(x)),x)")));
        let chain = infinite_chain_prefix(&p, &lw, 2).unwrap();
        assert_eq!(chain.len(), 6);
        assert_eq!(chain.end(), &Node::Term(t("g(g(f(f(f(x))),f(x)),x)")));
        assert!(verify_chain(&p, &chain));
        assert_eq!(infinite_chain_prefix(&p, &lw, 1).unwrap(), lw.chain);
        assert!(verify_chain(&p, &infinite_chain_prefix(&p, &lw, 5).unwrap()));
    }

    #[test]
    fn narrowing_loop_and_unrolling() {
        let p = Program::new(Mode::Lp, vec![Rule::new("r", t("p(f(x,0))"), g("<p(x),q(x)>"))]).unwrap();
        let lw = find_loop(&p, &p.ids(), 1, LoopRelation::mg(), Semantics::LpNarrow, &mut Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(lw.end, Node::Goal(g("<p(x),q(x)>")));
        let chain = infinite_chain_prefix(&p, &lw, 2).unwrap();
        let end = chain.end().as_goal().unwrap().clone();
        assert!(is_variant_seq(&end.0, &g("<p(x_1),q(x_1),q(f(x_1,0))>").0));
        assert!(verify_chain(&p, &chain));
    }

    #[test]
    fn incompatible_pairs_are_rejected() {
        let p = looping_trs();
        let mut b = Budget::unlimited();
        assert!(matches!(
            find_loop(&p, &p.ids(), 1, LoopRelation::mg(), Semantics::Trs, &mut b),
            Err(Error::Incompatible(_))
        ));
        assert!(matches!(
            find_loop(&p, &p.ids(), 1, LoopRelation::ins(), Semantics::LpRestricted, &mut b),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn trivial_self_loop() {
        let p = Program::new(Mode::Trs, vec![Rule::trs("r1", t("a"), t("a"))]).unwrap();
        let lw = find_loop(&p, &p.ids(), 1, LoopRelation::ins(), Semantics::Trs, &mut Budget::unlimited())
            .unwrap()
            .unwrap();
        assert!(lw.embedding.binder.is_empty());
        assert!(lw.embedding.position.is_root());
    }
}
