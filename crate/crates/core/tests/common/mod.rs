//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the crate's substitution or unification code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nonterm::frontend::{parse_goal, parse_term};
use nonterm::{Goal, Mode, Program, Rule, Symbol, Term};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const VARS: [&str; 4] = ["x", "y", "z", "w"];

pub fn t(text: &str) -> Term {
    parse_term(text, &VARS).unwrap()
}

pub fn g(text: &str) -> Goal {
    parse_goal(text, &VARS).unwrap()
}

pub fn trs(rules: &[(&str, &str)]) -> Program {
    let rules = rules.iter().enumerate().map(|(i, (l, r))| Rule::trs(format!("r{}", i + 1), t(l), t(r))).collect();
    Program::new(Mode::Trs, rules).unwrap()
}

pub fn lp(rules: &[(&str, &str)]) -> Program {
    let rules = rules.iter().enumerate().map(|(i, (l, r))| Rule::new(format!("r{}", i + 1), t(l), g(r))).collect();
    Program::new(Mode::Lp, rules).unwrap()
}

/// A random signature generator: `f/2`, `g/1`, `a/0`, `b/0`.
pub struct Gen {
    pub symbols: Vec<(&'static str, usize)>,
    pub vars: Vec<&'static str>,
}

impl Default for Gen {
    fn default() -> Gen {
        Gen { symbols: vec![("f", 2), ("g", 1), ("a", 0), ("b", 0)], vars: vec!["x", "y", "z"] }
    }
}

impl Gen {
    /// A term of height at most `depth` (constants and variables have
    /// height 0).
    pub fn term(&self, rng: &mut impl Rng, depth: usize) -> Term {
        let leaf = depth == 0 || rng.random_bool(0.3);
        if leaf {
            let k = rng.random_range(0..self.vars.len() + 2);
            let constants: Vec<_> = self.symbols.iter().filter(|s| s.1 == 0).collect();
            return if k < self.vars.len() {
                Term::var(self.vars[k])
            } else {
                Term::constant(constants[rng.random_range(0..constants.len())].0)
            };
        }
        let funs: Vec<_> = self.symbols.iter().filter(|s| s.1 > 0).collect();
        let (f, n) = funs[rng.random_range(0..funs.len())];
        Term::func(f, (0..*n).map(|_| self.term(rng, depth - 1)).collect())
    }

    pub fn ground(&self, rng: &mut impl Rng, depth: usize) -> Term {
        let s = self.term(rng, depth);
        let vars: Vec<String> = vars_of(&s).into_iter().collect();
        let theta: BTreeMap<String, Term> = vars.into_iter().map(|v| (v, Term::constant("a"))).collect();
        apply(&theta, &s)
    }

    /// A substitution over the generator's variables, each bound with
    /// probability 2/3.
    pub fn subst(&self, rng: &mut impl Rng, depth: usize) -> BTreeMap<String, Term> {
        let mut out = BTreeMap::new();
        for v in &self.vars {
            if rng.random_bool(2.0 / 3.0) {
                out.insert(v.to_string(), self.term(rng, depth));
            }
        }
        out
    }

    /// A rule `(u, <v>)`; with `closed`, `vars(v) ⊆ vars(u)`.
    pub fn rule(&self, rng: &mut impl Rng, id: &str, depth: usize, closed: bool) -> Rule {
        loop {
            let u = self.term(rng, depth);
            if u.is_var() {
                continue;
            }
            let mut v = self.term(rng, depth);
            if closed {
                let allowed = vars_of(&u);
                let fill = allowed.iter().next().map_or(Term::constant("a"), |x| Term::var(x));
                let theta = vars_of(&v)
                    .into_iter()
                    .filter(|x| !allowed.contains(x))
                    .map(|x| (x, fill.clone()))
                    .collect();
                v = apply(&theta, &v);
            }
            return Rule::trs(id, u, v);
        }
    }
}

pub fn vars_of(term: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn go(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) => {
                out.insert(v.name().to_string());
            }
            Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
        }
    }
    go(term, &mut out);
    out
}

/// Simultaneous substitution by structural recursion.
pub fn apply(theta: &BTreeMap<String, Term>, term: &Term) -> Term {
    match term {
        Term::Var(v) => theta.get(v.name()).cloned().unwrap_or_else(|| term.clone()),
        Term::App(f, args) => rebuild(f, args.iter().map(|a| apply(theta, a)).collect()),
    }
}

pub fn apply_goal(theta: &BTreeMap<String, Term>, goal: &Goal) -> Goal {
    Goal::new(goal.terms().iter().map(|s| apply(theta, s)).collect())
}

fn rebuild(f: &Symbol, args: Vec<Term>) -> Term {
    Term::App(f.clone(), args.into())
}

/// Whether `instance = pattern σ` for some σ, by a one-pass binding table.
pub fn matches(pattern: &[Term], instance: &[Term]) -> bool {
    fn go<'a>(p: &'a Term, s: &'a Term, table: &mut BTreeMap<&'a str, &'a Term>) -> bool {
        match (p, s) {
            (Term::Var(v), _) => match table.get(v.name()) {
                Some(bound) => *bound == s,
                None => {
                    table.insert(v.name(), s);
                    true
                }
            },
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| go(x, y, table))
            }
            _ => false,
        }
    }
    let mut table = BTreeMap::new();
    pattern.len() == instance.len() && pattern.iter().zip(instance).all(|(p, s)| go(p, s, &mut table))
}

/// Variants: each side matches the other.
pub fn variant(a: &[Term], b: &[Term]) -> bool {
    matches(a, b) && matches(b, a)
}

/// Every term over `f/2`, `a` and the given variables of height at most
/// `height` (leaves have height 0).
pub fn all_terms(height: usize, vars: &[&str]) -> Vec<Term> {
    let mut level: Vec<Term> = std::iter::once(Term::constant("a")).chain(vars.iter().map(|v| Term::var(v))).collect();
    for _ in 0..height {
        let mut next = level.clone();
        next.truncate(1 + vars.len());
        for l in &level {
            for r in &level {
                next.push(Term::func("f", vec![l.clone(), r.clone()]));
            }
        }
        level = next;
    }
    level
}

/// Ground unifiers of `s` and `t` over `{x, y}` drawn from `grounds`.
pub fn ground_unifiers(s: &Term, t: &Term, grounds: &[Term]) -> Vec<BTreeMap<String, Term>> {
    let mut out = Vec::new();
    for gx in grounds {
        for gy in grounds {
            let theta: BTreeMap<String, Term> = [("x".to_string(), gx.clone()), ("y".to_string(), gy.clone())].into();
            if apply(&theta, s) == apply(&theta, t) {
                out.push(theta);
            }
        }
    }
    out
}
