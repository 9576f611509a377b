//! The overlap closure grows without bound on a terminating system.

use nonterm::frontend::parse_trs;
use nonterm::unfold::{overlap_closure, UnfoldConfig};

fn main() {
    let trs = parse_trs("(VAR x y)(RULES f(s(x),y) -> f(x,s(y)))").unwrap();
    for depth in 0..=3 {
        let oc = overlap_closure(&trs, &UnfoldConfig::with_depth(depth)).unwrap();
        println!("depth {depth}: {} rules, newest {}", oc.len(), oc.rules.last().unwrap().rule);
    }
}
