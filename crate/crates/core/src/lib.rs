//! Non-termination analysis for term rewrite systems and logic programs.
//!
//! The crate is organised bottom-up:
//!
//! - [`term`]: terms, goals, positions and (two-hole) contexts.
//! - [`subst`]: substitutions, matching, renaming apart and unification.
//! - [`rewrite`]: rewriting, narrowing and restricted narrowing, chains.
//! - [`unfold`]: dependency pairs, dependency pair unfolding, binary
//!   unfolding and the overlap closure, all depth-bounded.
//! - [`detect`]: loop detection, loop unrolling, recurrent pairs and
//!   their witness chains.
//! - [`frontend`]: parsers, the analysis driver and certificates.
//!
//! ```
//! use nonterm::frontend::{analyze, parse_trs, AnalysisConfig, Answer};
//!
//! let program = parse_trs("(VAR x)(RULES f(x) -> g(h(x,1),x)  1 -> 0  h(x,0) -> f(f(x)))").unwrap();
//! let verdict = analyze(&program, &AnalysisConfig::default());
//! assert_eq!(verdict.answer, Answer::No);
//! ```

pub mod detect;
pub mod error;
pub mod frontend;
pub mod rewrite;
pub mod subst;
pub mod term;
pub mod unfold;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use rewrite::{Chain, Mode, Program, Rule, Semantics, Step};
pub use subst::Substitution;
pub use term::{Context, Goal, GoalContext, Node, Position, Signature, Symbol, Term, Var};
