//! Dependency pairs and their depth-bounded unfolding.

use nonterm::frontend::parse_trs;
use nonterm::unfold::{dependency_pairs, unfold_trs, UnfoldConfig};

fn main() {
    let trs = parse_trs("(VAR x)(RULES f(x) -> g(h(x,1),x)  1 -> 0  h(x,0) -> f(f(x)))").unwrap();
    for dp in dependency_pairs(&trs) {
        println!("{}   [{}]", dp.rule, dp.provenance);
    }
    let unfolded = unfold_trs(&trs, &UnfoldConfig::with_depth(2)).unwrap();
    println!("{} rules up to depth 2; those between marked symbols of equal root:", unfolded.len());
    for u in unfolded.rules.iter().filter(|u| u.rule.rhs_term().and_then(|r| r.root_symbol()) == u.rule.lhs.root_symbol()) {
        println!("  {}   [depth {}, {}]", u.rule, u.depth, u.provenance);
    }
}
