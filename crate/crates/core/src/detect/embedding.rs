//! The relations `ins` ("embeds an instance of") and `mg` ("embeds a more
//! general term than") and a search for their witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::subst::{match_goal, match_term, Substitution};
use crate::term::{Context, Goal, GoalContext, Node, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Ins,
    Mg,
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingKind::Ins => "ins",
            EmbeddingKind::Mg => "mg",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingContext {
    Term(Context),
    Goal(GoalContext),
}

impl fmt::Display for EmbeddingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingContext::Term(c) => c.fmt(f),
            EmbeddingContext::Goal(c) => c.fmt(f),
        }
    }
}

/// Evidence that `target` is related to `source`.
///
/// For `ins`, `target = context[source binder]`. For `mg`,
/// `target = context[g]` for the subterm or window `g` at `position`, and
/// `g binder = source`. For goals `position` is the 1-based index `<i>` of
/// the window's first element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub kind: EmbeddingKind,
    pub context: EmbeddingContext,
    pub binder: Substitution,
    pub position: Position,
}

impl Embedding {
    /// Re-checks the defining equation against `source` and `target`.
    pub fn relates(&self, source: &Node, target: &Node) -> bool {
        match (&self.context, source, target) {
            (EmbeddingContext::Term(c), Node::Term(s), Node::Term(t)) => match self.kind {
                EmbeddingKind::Ins => c.plug(&self.binder.apply(s)).is_ok_and(|x| &x == t),
                EmbeddingKind::Mg => t
                    .get(&self.position)
                    .is_some_and(|g| &self.binder.apply(g) == s && c.plug(g).is_ok_and(|x| &x == t)),
            },
            (EmbeddingContext::Goal(c), Node::Goal(s), Node::Goal(t)) => {
                let off = c.offset();
                let Some(window) = t.terms().get(off..off + s.len()) else {
                    return false;
                };
                let window = Goal::new(window.to_vec());
                let equation = match self.kind {
                    EmbeddingKind::Ins => self.binder.apply_goal(s) == window,
                    EmbeddingKind::Mg => &self.binder.apply_goal(&window) == s,
                };
                equation && &c.plug(&window) == t
            }
            _ => false,
        }
    }
}

/// The embedding at the smallest position (window offset for goals), or
/// `None`. With `root_only` only the empty context is tried.
pub fn find_embedding(kind: EmbeddingKind, source: &Node, target: &Node, root_only: bool) -> Option<Embedding> {
    match (source, target) {
        (Node::Term(s), Node::Term(t)) => {
            let positions = if root_only { vec![Position::root()] } else { t.positions() };
            positions.into_iter().find_map(|p| {
                let sub = t.get(&p)?;
                let binder = match kind {
                    EmbeddingKind::Ins => match_term(s, sub)?,
                    EmbeddingKind::Mg => match_term(sub, s)?,
                };
                let context = Context::at(t, &p).ok()?;
                Some(Embedding { kind, context: EmbeddingContext::Term(context), binder, position: p })
            })
        }
        (Node::Goal(s), Node::Goal(t)) => {
            if t.len() < s.len() {
                return None;
            }
            let last = if root_only { 0 } else { t.len() - s.len() };
            if root_only && t.len() != s.len() {
                return None;
            }
            (0..=last).find_map(|off| {
                let window = Goal::new(t.terms()[off..off + s.len()].to_vec());
                let binder = match kind {
                    EmbeddingKind::Ins => match_goal(s, &window)?,
                    EmbeddingKind::Mg => match_goal(&window, s)?,
                };
                let context = GoalContext {
                    prefix: t.terms()[..off].to_vec(),
                    suffix: t.terms()[off + s.len()..].to_vec(),
                };
                Some(Embedding {
                    kind,
                    context: EmbeddingContext::Goal(context),
                    binder,
                    position: Position::new(vec![off + 1]),
                })
            })
        }
        _ => None,
    }
}
