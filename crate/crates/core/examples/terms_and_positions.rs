//! Terms, positions, subterm replacement and two-hole contexts.

use nonterm::frontend::{parse_context, parse_term};
use nonterm::{Position, Term};

fn main() {
    let s = parse_term("g(h(f(x),1),x)", &["x"]).unwrap();
    println!("term {s}: size {}, depth {}", s.size(), s.depth());
    for p in s.positions() {
        println!("  {p:>5}  {}", s.get(&p).unwrap());
    }
    let p = Position::parse("1.1").unwrap();
    let replaced = s.replace_at(&p, Term::tower("f", 2, Term::var("x"))).unwrap();
    println!("s[f(f(x))] at {p}: {replaced}");

    let c1 = parse_context("f(□,□')", &[]).unwrap();
    let c2 = parse_context("s(□)", &[]).unwrap();
    let zero = Term::constant("0");
    let term = c1.plug2(&c2.plug_power(2, &zero).unwrap(), &c2.plug_power(1, &zero).unwrap()).unwrap();
    println!("{c1} with {c2}^2[0] and {c2}[0]: {term}");
    println!("marked root: {}", term.mark_root());
}
