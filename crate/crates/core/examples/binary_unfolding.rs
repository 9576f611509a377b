//! Binary unfolding of a logic program under the leftmost selection rule.

use nonterm::frontend::{parse_lp, render_unfolded};
use nonterm::unfold::{binary_unfold, UnfoldConfig};
use nonterm::Mode;

fn main() {
    let lp = parse_lp("p(X) :- q(X), p(s(X)).\nq(0).\np(f(X,0)) :- p(X), q(X).").unwrap();
    let unfolded = binary_unfold(&lp, &UnfoldConfig::with_depth(2)).unwrap();
    print!("{}", render_unfolded(Mode::Lp, &unfolded.rules));
}
