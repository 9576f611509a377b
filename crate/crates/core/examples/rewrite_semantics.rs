//! The three step relations: rewriting, narrowing and restricted narrowing.

use nonterm::frontend::{parse_lp, parse_term, parse_trs};
use nonterm::rewrite::{run_word, successors, verify_chain, word_chains};
use nonterm::{Goal, Node, Semantics};

fn main() {
    let trs = parse_trs("(VAR x)(RULES f(x) -> g(h(x,1),x)  1 -> 0  h(x,0) -> f(f(x)))").unwrap();
    let start = Node::Term(parse_term("f(x)", &["x"]).unwrap());
    let word: Vec<String> = ["r1", "r2", "r3"].map(String::from).to_vec();
    for chain in word_chains(&trs, &start, &word, Semantics::Trs, 100).unwrap() {
        println!("rewriting with {word:?}, verified: {}", verify_chain(&trs, &chain));
        for step in &chain.steps {
            println!("  {step:?}");
        }
    }

    let lp = parse_lp("p(f(X,0)) :- p(X), q(X).\nq(0).").unwrap();
    let goal = Node::Goal(Goal::new(vec![parse_term("p(f(f(y,0),0))", &["y"]).unwrap()]));
    for step in successors(&lp, &goal, Semantics::LpNarrow) {
        println!("narrowing: {step:?}");
    }

    let shift_reset = parse_trs("(VAR x y)(RULES f(x,s(y)) -> f(s(x),y)  f(x,0) -> f(s(0),x))").unwrap();
    let s = Node::Term(parse_term("f(0,s(s(0)))", &[]).unwrap());
    let ends = run_word(&shift_reset, &s, &["r1".to_string(), "r1".to_string(), "r2".to_string()], Semantics::LpRestricted);
    println!("restricted narrowing of {s} by r1 r1 r2: {:?}", ends.unwrap());
}
