//! Matching, unification and renaming apart.

use std::collections::BTreeSet;

use nonterm::frontend::parse_term;
use nonterm::subst::{match_term, mgu, renaming_apart};
use nonterm::Var;

fn main() {
    let vars = ["x", "y", "z"];
    let t = |s: &str| parse_term(s, &vars).unwrap();
    for (a, b) in [("f(x,g(y))", "f(g(z),x)"), ("f(x,x)", "f(a,b)"), ("x", "g(x)"), ("h(x,0)", "h(g(y),y)")] {
        match mgu(&t(a), &t(b)) {
            Some(sigma) => println!("mgu({a}, {b}) = {sigma}  giving {}", sigma.apply(&t(a))),
            None => println!("mgu({a}, {b}) does not exist"),
        }
    }
    let pattern = t("f(x,g(y))");
    match match_term(&pattern, &t("f(a,g(f(z,z)))")) {
        Some(theta) => println!("{pattern} matches with {theta}"),
        None => println!("no match"),
    }
    let avoid: BTreeSet<Var> = [Var::new("x"), Var::new("x_1")].into();
    println!("renaming x, y apart from {{x, x_1}}: {}", renaming_apart(&[Var::new("x"), Var::new("y")], &avoid));
}
