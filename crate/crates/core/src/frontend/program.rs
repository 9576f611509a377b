//! Program files: TPDB-style term rewrite systems and Prolog-style logic
//! programs, and their rendering.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::frontend::syntax::{term_at, Cursor, Extensions, Lexicon, ParseError, VarNaming};
use crate::rewrite::{Mode, Program, Rule};
use crate::term::{Goal, Term, Var};
use crate::unfold::UnfoldedRule;

fn rule_id(n: usize) -> String {
    format!("r{n}")
}

/// Skips a parenthesised section whose opening `(` was consumed.
fn skip_section(cur: &mut Cursor<'_>) -> std::result::Result<(), ParseError> {
    let mut depth = 1;
    while depth > 0 {
        match cur.bump() {
            Some('(') => depth += 1,
            Some(')') => depth -= 1,
            Some('"') => while !matches!(cur.bump(), Some('"') | None) {},
            Some(_) => {}
            None => return Err(cur.error("unterminated section")),
        }
    }
    Ok(())
}

/// Parses `(VAR x y ...)(RULES l -> r ...)`. Other sections are skipped.
/// Marked symbols `f#` are accepted.
pub fn parse_trs(text: &str) -> Result<Program> {
    let mut cur = Cursor::new(text, None);
    let mut vars = BTreeSet::new();
    let mut rules = Vec::new();
    while !cur.at_end() {
        cur.expect("(")?;
        let Some(section) = cur.ident(Lexicon::Trs) else {
            return Err(cur.error(format!("expected a section name{}", cur.found())).into());
        };
        match section.as_str() {
            "VAR" => {
                while !cur.eat(")") {
                    match cur.ident(Lexicon::Trs) {
                        Some(v) => vars.insert(v),
                        None => return Err(cur.error(format!("expected a variable{}", cur.found())).into()),
                    };
                }
            }
            "RULES" => {
                let naming = VarNaming::Declared(vars.clone());
                // `f#` appears in emitted unfoldings.
                let ext = Extensions { marked: true, ..Extensions::default() };
                while !cur.eat(")") {
                    if cur.at_end() {
                        return Err(cur.error("unterminated RULES section").into());
                    }
                    let lhs = term_at(&mut cur, &naming, Lexicon::Trs, ext)?;
                    cur.expect("->")?;
                    let rhs = term_at(&mut cur, &naming, Lexicon::Trs, ext)?;
                    rules.push(Rule::trs(rule_id(rules.len() + 1), lhs, rhs));
                }
            }
            _ => skip_section(&mut cur)?,
        }
    }
    Program::new(Mode::Trs, rules)
}

/// Replaces each occurrence of the anonymous variable `_` by a fresh one.
fn anonymise(term: &Term, counter: &mut usize) -> Term {
    match term {
        Term::Var(v) if v.name() == "_" => {
            *counter += 1;
            Term::var(&format!("_{counter}"))
        }
        Term::Var(_) => term.clone(),
        Term::App(f, args) => {
            let args: Vec<Term> = args.iter().map(|a| anonymise(a, counter)).collect();
            Term::App(f.clone(), args.into())
        }
    }
}

/// Parses clauses `head :- b1, ..., bn.` and facts `head.`; identifiers
/// starting with an uppercase letter or `_` are variables, `%` starts a
/// comment.
pub fn parse_lp(text: &str) -> Result<Program> {
    let mut cur = Cursor::new(text, Some('%'));
    let naming = VarNaming::Prolog;
    let ext = Extensions::default();
    let mut rules = Vec::new();
    while !cur.at_end() {
        let mut counter = 0;
        let head = term_at(&mut cur, &naming, Lexicon::Prolog, ext)?;
        if head.is_var() {
            return Err(cur.error("a clause head cannot be a variable").into());
        }
        let mut body = Vec::new();
        if cur.eat(":-") {
            loop {
                body.push(anonymise(&term_at(&mut cur, &naming, Lexicon::Prolog, ext)?, &mut counter));
                if !cur.eat(",") {
                    break;
                }
            }
        }
        cur.expect(".")?;
        let head = anonymise(&head, &mut 0).clone();
        let head = if counter > 0 { rename_head_anonymous(&head, counter) } else { head };
        rules.push(Rule::new(rule_id(rules.len() + 1), head, Goal(body)));
    }
    Program::new(Mode::Lp, rules)
}

/// Head anonymous variables are numbered after those of the body.
fn rename_head_anonymous(head: &Term, offset: usize) -> Term {
    fn go(t: &Term, offset: usize) -> Term {
        match t {
            Term::Var(v) => match v.name().strip_prefix('_').and_then(|n| n.parse::<usize>().ok()) {
                Some(k) => Term::var(&format!("_{}", k + offset)),
                None => t.clone(),
            },
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| go(a, offset)).collect::<Vec<_>>().into()),
        }
    }
    go(head, offset)
}

fn var_names(rules: &[&Rule]) -> Vec<String> {
    let mut vars: BTreeSet<Var> = BTreeSet::new();
    for r in rules {
        vars.extend(r.vars());
    }
    vars.iter().map(|v| v.name().to_string()).collect()
}

fn trs_text(rules: &[&Rule], comments: &[String]) -> String {
    let mut out = String::new();
    if !comments.is_empty() {
        out.push_str("(COMMENT\n");
        for c in comments {
            out.push_str(&format!("  {}\n", c.replace(['(', ')'], "")));
        }
        out.push_str(")\n");
    }
    out.push_str(&format!("(VAR {})\n(RULES\n", var_names(rules).join(" ")));
    for r in rules {
        let rhs = r.rhs_term().map_or_else(|| r.rhs.to_string(), ToString::to_string);
        out.push_str(&format!("  {} -> {}\n", r.lhs, rhs));
    }
    out.push_str(")\n");
    out
}

fn clause(rule: &Rule) -> String {
    if rule.rhs.is_empty() {
        format!("{}.", rule.lhs)
    } else {
        let body: Vec<String> = rule.rhs.terms().iter().map(ToString::to_string).collect();
        format!("{} :- {}.", rule.lhs, body.join(", "))
    }
}

/// Renders a program in its own file format.
pub fn render_program(program: &Program) -> String {
    let rules: Vec<&Rule> = program.rules().iter().collect();
    match program.mode() {
        Mode::Trs => trs_text(&rules, &[]),
        Mode::Lp => rules.iter().map(|r| clause(r) + "\n").collect(),
    }
}

/// Renders unfolded rules with their provenance as comments.
pub fn render_unfolded(mode: Mode, rules: &[UnfoldedRule]) -> String {
    let describe = |u: &UnfoldedRule| format!("{} depth {}: {}", u.rule.id, u.depth, u.provenance);
    match mode {
        Mode::Trs => {
            let list: Vec<&Rule> = rules.iter().map(|u| &u.rule).collect();
            trs_text(&list, &rules.iter().map(describe).collect::<Vec<_>>())
        }
        Mode::Lp => rules.iter().map(|u| format!("% {}\n{}\n", describe(u), clause(&u.rule))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn tpdb_example() {
        let p = parse_trs("(VAR x)(RULES f(x) -> g(h(x,1),x)  1 -> 0  h(x,0) -> f(f(x)))").unwrap();
        let shown: Vec<String> = p.rules().iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["r1: f(x) -> g(h(x,1),x)", "r2: 1 -> 0", "r3: h(x,0) -> f(f(x))"]);
        assert!(parse_trs("(VAR)(RULES)").unwrap().is_empty());
        assert!(matches!(parse_trs("(VAR x)(RULES f(x,0 -> g(x))"), Err(Error::Parse(_))));
        assert!(matches!(parse_trs("(RULES f(a) -> f(a,a))"), Err(Error::Term(_))));
        let with_comment = parse_trs("(COMMENT a (nested) \"str)\")(VAR x)(RULES a->b)").unwrap();
        assert_eq!(with_comment.len(), 1);
    }

    #[test]
    fn prolog_clauses() {
        let p = parse_lp("% comment\np(f(X,0)) :- p(X), q(X).\nq(0).\n").unwrap();
        assert_eq!(p.rules()[0].to_string(), "r1: p(f(X,0)) -> <p(X),q(X)>");
        assert!(p.rules()[1].rhs.is_empty());
        let q = parse_lp("f(s(X),Y) :- f(X,s(Y)).").unwrap();
        assert_eq!(q.rules()[0].rhs.len(), 1);
        let anon = parse_lp("p(_, _) :- q(_).").unwrap();
        assert_eq!(anon.rules()[0].vars().len(), 3);
        assert!(parse_lp("p(X) :- q(X)").is_err());
    }

    #[test]
    fn rendering_reparses() {
        let p = parse_trs("(VAR x y)(RULES f(x,s(y)) -> f(s(x),y) f(x,0) -> f(s(0),x))").unwrap();
        let again = parse_trs(&render_program(&p)).unwrap();
        assert!(p.rules().iter().zip(again.rules()).all(|(a, b)| a.is_variant_of(b)));
        let l = parse_lp("p(f(X,0)) :- p(X), q(X).\nq(0).").unwrap();
        let again = parse_lp(&render_program(&l)).unwrap();
        assert!(l.rules().iter().zip(again.rules()).all(|(a, b)| a.is_variant_of(b)));
    }
}
