//! The `analyze` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nonterm::frontend::{check_certificate, parse_certificate, parse_lp, parse_trs};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_analyze")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn text_output_starts_with_the_answer() {
    let out = run(&[arg(&corpus("looping_trs.trs"))]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("NO"));
    assert!(text.contains("simulated prefix (5 steps)"));

    let out = run(&[arg(&corpus("mut_looping_trs_collapse.trs")), "--depth", "2", "--timeout", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("MAYBE"));
}

#[test]
fn json_certificates_check_against_the_input() {
    for (name, lp) in [("looping_lp.pl", true), ("shift_reset.trs", false), ("looping_trs.trs", false)] {
        let path = corpus(name);
        let out = run(&[arg(&path), "--json"]);
        assert!(out.status.success(), "{name}");
        let cert = parse_certificate(&stdout(&out)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let program = if lp { parse_lp(&text) } else { parse_trs(&text) }.unwrap();
        check_certificate(&program, &cert).unwrap();
    }
}

#[test]
fn flags_select_techniques_and_modes() {
    let path = corpus("shift_reset.trs");
    let out = run(&[arg(&path), "--technique", "loop", "--depth", "1", "--timeout", "1"]);
    assert_eq!(stdout(&out).lines().next(), Some("MAYBE"));
    let out = run(&[arg(&path), "--technique", "recpair", "--json"]);
    let cert = parse_certificate(&stdout(&out)).unwrap();
    assert_eq!(serde_json::to_value(cert.technique).unwrap(), "recpair");

    let out = run(&[arg(&corpus("looping_trs.trs")), "--raw", "--max-word", "3", "--simulate", "2"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("NO"));
    assert!(text.contains("simulated prefix (6 steps)"), "{text}");
}

#[test]
fn format_is_inferred_or_given() {
    let dir = std::env::temp_dir().join(format!("analyze-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let plain = dir.join("program.txt");
    std::fs::copy(corpus("looping_lp.pl"), &plain).unwrap();
    let out = run(&[arg(&plain)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--format"));
    let out = run(&[arg(&plain), "--format", "lp"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("NO"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unfolded_rules_are_written() {
    let dir = std::env::temp_dir().join(format!("analyze-unf-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("unfolded.trs");
    let out = run(&[arg(&corpus("looping_trs.trs")), "--depth", "2", "--emit-unfolded", arg(&target)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&target).unwrap();
    let unfolded = parse_trs(&text).unwrap();
    assert!(unfolded.rules().iter().any(|r| r.to_string().ends_with("f#(x) -> f#(f(x))")));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_input_fails_cleanly() {
    let out = run(&["/definitely/missing.trs"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let dir = std::env::temp_dir().join(format!("analyze-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.trs");
    std::fs::write(&broken, "(VAR x)(RULES f(x -> x)").unwrap();
    let out = run(&[arg(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = run(&[arg(&corpus("looping_trs.trs")), "--timeout", "0"]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
