//! The corpus through parsing, analysis and certificate checking.

use std::path::Path;

use nonterm::frontend::{
    analyze, certificate, check_certificate, emit_certificate, parse_certificate, parse_lp, parse_trs,
    render_json, AnalysisConfig, Answer, Format, Technique, Witness,
};
use nonterm::{Node, Program};

const EXPECTED: [(&str, Answer); 20] = [
    ("binary_chain.trs", Answer::No),
    ("looping_trs.trs", Answer::No),
    ("looping_lp.pl", Answer::No),
    ("inner_loop.trs", Answer::Maybe),
    ("mut_binary_chain.trs", Answer::Maybe),
    ("mut_looping_trs_collapse.trs", Answer::Maybe),
    ("mut_looping_trs_no_constant.trs", Answer::Maybe),
    ("mut_flat.pl", Answer::Maybe),
    ("mut_ground.pl", Answer::Maybe),
    ("mut_inner_loop.trs", Answer::Maybe),
    ("mut_plus.trs", Answer::Maybe),
    ("mut_shift_down.trs", Answer::Maybe),
    ("mut_shift_reset_exit.trs", Answer::Maybe),
    ("mut_twin_counter.trs", Answer::Maybe),
    ("not_closed.pl", Answer::No),
    ("oc_shift.trs", Answer::Maybe),
    ("self_loop.trs", Answer::No),
    ("shift_reset.pl", Answer::No),
    ("shift_reset.trs", Answer::No),
    ("twin_counter.trs", Answer::No),
];

fn load(name: &str) -> Program {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    if name.ends_with(".pl") { parse_lp(&text) } else { parse_trs(&text) }.unwrap()
}

#[test]
fn corpus_verdicts_and_certificates() {
    for (name, expected) in EXPECTED {
        if name == "mut_binary_chain.trs" {
            continue; // slow; covered by the acceptance gate
        }
        let program = load(name);
        let verdict = analyze(&program, &AnalysisConfig::default());
        assert_eq!(verdict.answer, expected, "{name}");
        let text = emit_certificate(&verdict, Format::Text);
        assert_eq!(text.lines().next(), Some(if expected == Answer::No { "NO" } else { "MAYBE" }));
        let cert = parse_certificate(&render_json(&certificate(&verdict))).unwrap();
        if expected == Answer::No {
            check_certificate(&program, &cert).unwrap_or_else(|e| panic!("{name}: {e}"));
        } else {
            assert!(cert.witness.is_none(), "{name}");
        }
    }
}

#[test]
fn the_same_program_in_both_modes() {
    let (trs, lp) = (load("shift_reset.trs"), load("shift_reset.pl"));
    let config = AnalysisConfig { techniques: vec![Technique::RecurrentPair], ..AnalysisConfig::default() };
    for p in [&trs, &lp] {
        let v = analyze(p, &config);
        let Some(Witness::Recurrent { pair, .. }) = &v.witness else { panic!("{:?}", v.answer) };
        assert_eq!(pair.pattern.c2.to_string(), "s(□)");
    }
}

#[test]
fn loop_starts_are_input_terms() {
    let v = analyze(&load("looping_trs.trs"), &AnalysisConfig::default());
    let Some(Node::Term(start)) = &v.start else { panic!("no start") };
    assert!(!start.contains_marked());
    assert_eq!(start.to_string(), "f(x)");
}

#[test]
fn shallow_depth_gives_up_honestly() {
    let config = AnalysisConfig { depth: 0, techniques: vec![Technique::Loop], ..AnalysisConfig::default() };
    let v = analyze(&load("looping_trs.trs"), &config);
    assert_eq!(v.answer, Answer::Maybe);
    assert!(v.simulated_prefix.is_none());
}
