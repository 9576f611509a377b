//! The full pipeline: parse, analyze, print and re-check a certificate.
//!
//! `cargo run --example analyze_program -- path/to/file.trs`

use nonterm::frontend::{analyze, certificate, check_certificate, emit_certificate, parse_lp, parse_trs, AnalysisConfig, Format};

const DEFAULT: &str = "(VAR x)(RULES f(x) -> g(h(x,1),x)  1 -> 0  h(x,0) -> f(f(x)))";

fn main() {
    let (text, lp) = match std::env::args().nth(1) {
        Some(path) => (std::fs::read_to_string(&path).expect("readable file"), path.ends_with(".pl")),
        None => (DEFAULT.to_string(), false),
    };
    let program = if lp { parse_lp(&text) } else { parse_trs(&text) }.expect("a valid program");
    let verdict = analyze(&program, &AnalysisConfig::default());
    print!("{}", emit_certificate(&verdict, Format::Text));
    match check_certificate(&program, &certificate(&verdict)) {
        Ok(()) => println!("certificate re-checked"),
        Err(e) => println!("certificate rejected: {e}"),
    }
}
