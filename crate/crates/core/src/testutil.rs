//! Helpers for unit tests: identifiers `u`..`z`, optionally followed by
//! digits or `_digits`, are variables.

use crate::frontend::syntax::{parse_goal_with, parse_term_with, VarNaming};
use crate::term::{Goal, Term};

fn naming(text: &str) -> VarNaming {
    let mut names = Vec::new();
    let mut current = String::new();
    for c in text.chars().chain(std::iter::once(' ')) {
        if c.is_alphanumeric() || c == '_' {
            current.push(c);
        } else if !current.is_empty() {
            names.push(std::mem::take(&mut current));
        }
    }
    VarNaming::declared(names.into_iter().filter(|n| is_var_name(n)))
}

fn is_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    let first = chars.next();
    matches!(first, Some('u'..='z'))
        && chars.as_str().trim_start_matches('_').chars().all(|c| c.is_ascii_digit())
}

pub(crate) fn t(text: &str) -> Term {
    parse_term_with(text, &naming(text)).unwrap()
}

pub(crate) fn g(text: &str) -> Goal {
    parse_goal_with(text, &naming(text)).unwrap()
}
