//! Loops under rewriting (ins) and narrowing (mg), and their unrolling.

use nonterm::detect::loops::{find_loop, infinite_chain_prefix, LoopRelation};
use nonterm::detect::Budget;
use nonterm::frontend::{parse_lp, parse_trs};
use nonterm::Semantics;

fn main() {
    let trs = parse_trs("(VAR x)(RULES f(x) -> g(h(x,1),x)  1 -> 0  h(x,0) -> f(f(x)))").unwrap();
    let lw = find_loop(&trs, &trs.ids(), 3, LoopRelation::ins(), Semantics::Trs, &mut Budget::unlimited())
        .unwrap()
        .expect("a loop");
    println!("ins-loop on {:?}: {} => {}", lw.word, lw.start, lw.end);
    println!(
        "  embedding: context {}, binder {}, position {}",
        lw.embedding.context, lw.embedding.binder, lw.embedding.position
    );
    let chain = infinite_chain_prefix(&trs, &lw, 2).unwrap();
    for (i, node) in chain.nodes().iter().enumerate() {
        println!("  a{i} = {node}");
    }

    let lp = parse_lp("p(f(X,0)) :- p(X), q(X).").unwrap();
    let lw = find_loop(&lp, &lp.ids(), 1, LoopRelation::mg(), Semantics::LpNarrow, &mut Budget::unlimited())
        .unwrap()
        .expect("a loop");
    println!("mg-loop on {:?}: {} => {}", lw.word, lw.start, lw.end);
    let chain = infinite_chain_prefix(&lp, &lw, 3).unwrap();
    println!("  after 3 iterations: {}", chain.end());
}
