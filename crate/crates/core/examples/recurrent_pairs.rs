//! A recurrent pair on a non-looping system and its witness chain.

use nonterm::detect::recurrent::{find_recurrent_pair, witness_chain};
use nonterm::detect::Budget;
use nonterm::frontend::parse_trs;
use nonterm::Semantics;

fn main() {
    let trs = parse_trs("(VAR x y)(RULES f(x,s(y)) -> f(s(x),y)  f(x,0) -> f(s(0),x))").unwrap();
    let pair = find_recurrent_pair(&trs, &trs.ids(), 1, Semantics::Trs, &mut Budget::unlimited())
        .unwrap()
        .expect("a recurrent pair");
    println!("words {:?} and {:?}", pair.word1(), pair.word2());
    println!("{}", pair.pattern);
    let (chain, exponents) = witness_chain(&trs, &pair, 1, 0, 4).unwrap();
    println!("exponents per macro-step: {exponents:?}");
    for node in chain.nodes() {
        println!("  {node}");
    }
}
