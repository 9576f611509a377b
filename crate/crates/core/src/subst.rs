//! Substitutions, matching, renaming apart and most general unifiers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::term::{Context, Goal, Node, Term, Var};

/// A finite map from variables to terms with no identity bindings.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    /// Builds a substitution from bindings, dropping identity bindings.
    /// Later bindings for the same variable win.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Substitution {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.insert(v, t);
        }
        s
    }

    /// Single binding `{var -> term}`.
    pub fn single(var: Var, term: Term) -> Substitution {
        Substitution::from_pairs([(var, term)])
    }

    fn insert(&mut self, var: Var, term: Term) {
        if term.as_var() == Some(&var) {
            self.map.remove(&var);
        } else {
            self.map.insert(var, term);
        }
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    /// Bindings in domain order (sorted by variable name).
    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    /// Variables occurring in the binding targets.
    pub fn range_vars(&self) -> BTreeSet<Var> {
        self.map.values().flat_map(Term::vars).collect()
    }

    pub fn apply(&self, term: &Term) -> Term {
        if self.map.is_empty() {
            return term.clone();
        }
        self.apply_changed(term).unwrap_or_else(|| term.clone())
    }

    /// `None` when the term is left unchanged, so unchanged subterms stay shared.
    fn apply_changed(&self, term: &Term) -> Option<Term> {
        match term {
            Term::Var(v) => self.map.get(v).cloned(),
            Term::App(sym, args) => {
                let mut changed: Option<Vec<Term>> = None;
                for (i, arg) in args.iter().enumerate() {
                    if let Some(new) = self.apply_changed(arg) {
                        changed.get_or_insert_with(|| args[..i].to_vec()).push(new);
                    } else if let Some(acc) = changed.as_mut() {
                        acc.push(arg.clone());
                    }
                }
                changed.map(|new_args| Term::App(sym.clone(), Arc::from(new_args)))
            }
        }
    }

    pub fn apply_goal(&self, goal: &Goal) -> Goal {
        Goal(goal.0.iter().map(|t| self.apply(t)).collect())
    }

    pub fn apply_node(&self, node: &Node) -> Node {
        match node {
            Node::Term(t) => Node::Term(self.apply(t)),
            Node::Goal(g) => Node::Goal(self.apply_goal(g)),
        }
    }

    /// Holes are constants, hence fixed points.
    pub fn apply_context(&self, context: &Context) -> Context {
        context.map_body(|b| self.apply(b))
    }

    /// `self` followed by `other`: `x(self other) = (x self) other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.insert(v.clone(), other.apply(t));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    /// `θ^n` with `θ^0` the identity.
    pub fn power(&self, n: usize) -> Substitution {
        (0..n).fold(Substitution::new(), |acc, _| acc.compose(self))
    }

    /// The bindings whose variable is in `vars`.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| vars.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    /// Whether the substitution maps the variables of `vars` to pairwise
    /// distinct variables.
    pub fn is_injective_on<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> bool {
        let mut images = BTreeSet::new();
        for v in vars {
            match self.apply(&Term::Var(v.clone())) {
                Term::Var(w) if images.insert(w.clone()) => {}
                _ => return false,
            }
        }
        true
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// Extends `subst` so that `pattern subst = target`.
fn match_into(pattern: &Term, target: &Term, subst: &mut BTreeMap<Var, Term>) -> bool {
    match (pattern, target) {
        (Term::Var(v), _) => match subst.get(v) {
            Some(bound) => bound == target,
            None => {
                subst.insert(v.clone(), target.clone());
                true
            }
        },
        (Term::App(f, fs), Term::App(g, gs)) => {
            f == g && fs.iter().zip(gs.iter()).all(|(a, b)| match_into(a, b, subst))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

fn finish_match(map: BTreeMap<Var, Term>) -> Substitution {
    Substitution::from_pairs(map)
}

/// `θ` with `pattern θ = target` and `Dom(θ) ⊆ Var(pattern)`, if any.
pub fn match_term(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut map = BTreeMap::new();
    match_into(pattern, target, &mut map).then(|| finish_match(map))
}

/// Simultaneous matching of several pattern/target pairs.
pub fn match_terms<'a>(
    pairs: impl IntoIterator<Item = (&'a Term, &'a Term)>,
) -> Option<Substitution> {
    let mut map = BTreeMap::new();
    for (p, t) in pairs {
        if !match_into(p, t, &mut map) {
            return None;
        }
    }
    Some(finish_match(map))
}

pub fn match_goal(pattern: &Goal, target: &Goal) -> Option<Substitution> {
    if pattern.len() != target.len() {
        return None;
    }
    match_terms(pattern.0.iter().zip(target.0.iter()))
}

pub fn match_node(pattern: &Node, target: &Node) -> Option<Substitution> {
    match (pattern, target) {
        (Node::Term(p), Node::Term(t)) => match_term(p, t),
        (Node::Goal(p), Node::Goal(t)) => match_goal(p, t),
        _ => None,
    }
}

pub fn is_instance(general: &Term, instance: &Term) -> bool {
    match_term(general, instance).is_some()
}

/// Whether the two term sequences are equal up to a variable renaming.
pub fn is_variant_seq(a: &[Term], b: &[Term]) -> bool {
    a.len() == b.len() && variant_key(a) == variant_key(b)
}

pub fn is_variant(a: &Term, b: &Term) -> bool {
    is_variant_seq(std::slice::from_ref(a), std::slice::from_ref(b))
}

/// Canonical rendering of a term sequence with variables numbered by
/// first occurrence; two sequences are variants iff their keys agree.
pub fn variant_key(terms: &[Term]) -> String {
    let mut order = Vec::new();
    for t in terms {
        t.vars_in_order(&mut order);
    }
    let renaming =
        Substitution::from_pairs(order.iter().enumerate().map(|(i, v)| (v.clone(), Term::var(&format!("?{i}")))));
    let parts: Vec<String> = terms.iter().map(|t| renaming.apply(t).to_string()).collect();
    parts.join(" | ")
}

/// A renaming sending each variable of `vars` to a fresh variable outside
/// `avoid` and `vars`. Fresh names reuse the base name with the first free
/// numeric suffix, so results are deterministic.
pub fn renaming_apart(vars: &[Var], avoid: &BTreeSet<Var>) -> Substitution {
    let own: BTreeSet<&Var> = vars.iter().collect();
    let mut chosen: BTreeSet<Var> = BTreeSet::new();
    let mut pairs = Vec::with_capacity(vars.len());
    for v in vars {
        let fresh = v.fresh_like(|c| avoid.contains(c) || own.contains(c) || chosen.contains(c));
        chosen.insert(fresh.clone());
        pairs.push((v.clone(), Term::Var(fresh)));
    }
    Substitution::from_pairs(pairs)
}

fn bind(sigma: &mut Substitution, var: Var, term: Term) {
    let single = Substitution::single(var, term);
    *sigma = sigma.compose(&single);
}

/// Most general unifier of a list of equations, in idempotent solved form.
///
/// When both sides of an equation are variables, the variable of the
/// right-hand side is bound.
pub fn mgu_pairs(pairs: Vec<(Term, Term)>) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    let mut stack: Vec<(Term, Term)> = pairs.into_iter().rev().collect();
    while let Some((a, b)) = stack.pop() {
        let a = sigma.apply(&a);
        let b = sigma.apply(&b);
        if a == b {
            continue;
        }
        match (a, b) {
            (a, Term::Var(y)) => {
                if a.contains_var(&y) {
                    return None;
                }
                bind(&mut sigma, y, a);
            }
            (Term::Var(x), b) => {
                if b.contains_var(&x) {
                    return None;
                }
                bind(&mut sigma, x, b);
            }
            (Term::App(f, fs), Term::App(g, gs)) => {
                if f != g {
                    return None;
                }
                for pair in fs.iter().cloned().zip(gs.iter().cloned()).rev() {
                    stack.push(pair);
                }
            }
        }
    }
    Some(sigma)
}

pub fn mgu(s: &Term, t: &Term) -> Option<Substitution> {
    mgu_pairs(vec![(s.clone(), t.clone())])
}

pub fn mgu_goals(s: &Goal, t: &Goal) -> Option<Substitution> {
    if s.len() != t.len() {
        return None;
    }
    mgu_pairs(s.0.iter().cloned().zip(t.0.iter().cloned()).collect())
}
