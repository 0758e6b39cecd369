use std::fs;
use std::process::{Command, Output};

fn qcl2hol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcl2hol")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn emit_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("sig");
    fs::write(&sig, "pred b 1\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = qcl2hol(&[
        "emit",
        "(forall X. (a => b(X))) -> (a => forall X. b(X))",
        "--name",
        "bf",
        "--sig",
        sig.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let golden = |name: &str| fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap();
    assert_eq!(fs::read_to_string(out_dir.join("bf.p")).unwrap(), golden("bf.p"));
    assert_eq!(fs::read_to_string(out_dir.join("CK_axioms.ax")).unwrap(), golden("CK_axioms.ax"));
}

#[test]
fn validate_exit_codes() {
    assert_eq!(qcl2hol(&["validate", "forallp P. (P => (q | ~q))"]).status.code(), Some(0));
    let out = qcl2hol(&["validate", "(p => q) -> (p -> q)", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("verdict: countermodel"));
    assert_eq!(qcl2hol(&["validate", "p =>"]).status.code(), Some(65));
    assert_eq!(qcl2hol(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn explicit_q_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q");
    // Two worlds, Q = {∅, S}: every proposition is constant.
    fs::write(&q, "1: 0 1\n2: 0 3\n").unwrap();
    let args = ["validate", "p | ~p", "--q-mode", "file", "--q-file", q.to_str().unwrap(), "--format", "structured"];
    let out = qcl2hol(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("q_mode: file"));
}

#[test]
fn structured_reports_replay() {
    let args = ["correspond", "--depth", "1", "--samples", "5", "--seed", "7", "--worlds", "1", "--format", "structured"];
    let first = qcl2hol(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert!(text.contains("seed: 7"));
    assert!(text.contains("verdict: agreement"));
    assert_eq!(text, stdout(&qcl2hol(&args)));
}

#[test]
fn rules_are_preserved_on_one_world() {
    let out = qcl2hol(&["rules", "--worlds", "1", "--individuals", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("preserved"));
}
