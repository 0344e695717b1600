use std::fs;
use std::path::Path;
use std::process::Command;

use smtc_cli::{run, EXIT_INPUT, EXIT_INVALID, EXIT_OK, EXIT_USAGE};

const FIG1: &str = "(set-logic QF_LRA)\n(declare-const x Real)\n(declare-const y Real)\n\
    (assert (and (or (< x (- y 1)) (> x (+ y 1))) (or (not (< x (- y 1))) (> x 20))))\n(check-sat)\n";

fn smtc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("smtc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fig1(dir: &Path) -> String {
    let f = dir.join("fig1.smt2");
    fs::write(&f, FIG1).unwrap();
    path(&f).to_string()
}

#[test]
fn compile_then_count_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = fig1(dir.path());
    let nnf = dir.path().join("fig1.nnf");
    let atoms = dir.path().join("fig1.atoms");
    let (code, out, _) = smtc(&["compile", &input, "-o", path(&nnf)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("decisions "));
    assert!(atoms.exists());

    let (code, out, _) = smtc(&["count", "--nnf", path(&nnf), "--atoms", path(&atoms)]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "3\n"));

    let (code, out, _) = smtc(&["check", "--nnf", path(&nnf), "--atoms", path(&atoms), "--theory"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "0 violations\n"));
}

#[test]
fn counts_by_mode() {
    let dir = tempfile::tempdir().unwrap();
    let input = fig1(dir.path());
    assert_eq!(smtc(&["count", &input]).1, "3\n");
    assert_eq!(smtc(&["count", &input, "--mode", "agnostic"]).1, "4\n");
    assert_eq!(smtc(&["count", &input, "--mode", "eager", "--eager-k", "2"]).1, "3\n");
    let flags = ["--no-components", "--no-cache", "--no-learning", "--heuristic", "fixed", "--prop-budget", "0"];
    let mut args = vec!["count", &input];
    args.extend(flags);
    assert_eq!(smtc(&args).1, "3\n");
    assert_eq!(smtc(&["oracle", &input]).1, "agnostic 4\naware 3\n");
}

#[test]
fn agnostic_graph_fails_theory_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = fig1(dir.path());
    let nnf = dir.path().join("a.nnf");
    assert_eq!(smtc(&["compile", &input, "-o", path(&nnf), "--mode", "agnostic"]).0, EXIT_OK);
    let atoms = dir.path().join("a.atoms");
    let (code, out, _) = smtc(&["check", "--nnf", path(&nnf), "--atoms", path(&atoms)]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "0 violations\n"));
    let (code, out, _) = smtc(&["check", "--nnf", path(&nnf), "--atoms", path(&atoms), "--theory"]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(out, "theory: unsatisfiable assignment [-1 -2 -3]\n1 violations\n");
}

#[test]
fn weights_and_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let input = fig1(dir.path());
    let w = dir.path().join("w.txt");
    fs::write(&w, "c half weights on atom 3\n3 1/2\n-3 1/2\n").unwrap();
    assert_eq!(smtc(&["count", &input, "--weights", path(&w)]).1, "3/2\n");
    fs::write(&w, "1 -1\n").unwrap();
    assert_eq!(smtc(&["count", &input, "--weights", path(&w)]).0, EXIT_INPUT);

    let (code, out, _) = smtc(&["enumerate", &input, "--max", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
    let all = smtc(&["enumerate", &input]).1;
    let mut lines: Vec<&str> = all.lines().collect();
    lines.sort();
    assert_eq!(lines, ["-1 2 -3", "1 -2 -3", "1 -2 3"]);
}

#[test]
fn stats_json_has_every_key() {
    let dir = tempfile::tempdir().unwrap();
    let input = fig1(dir.path());
    let (code, out, _) = smtc(&["count", &input, "--stats", "json"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("3"));
    let v: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    for key in [
        "decisions",
        "bool_props",
        "theory_props",
        "theory_checks",
        "conflicts",
        "learned",
        "components",
        "cache_hits",
        "cache_misses",
        "nodes",
        "edges",
        "wall_ms",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn condensed_export_is_not_countable() {
    let dir = tempfile::tempdir().unwrap();
    let input = fig1(dir.path());
    let nnf = dir.path().join("c.nnf");
    assert_eq!(smtc(&["compile", &input, "-o", path(&nnf), "--condense"]).0, EXIT_OK);
    let text = fs::read_to_string(&nnf).unwrap();
    assert_eq!(text, "nnf 5 4 3\nL -2\nL -1\nL -3\nA 2 1 2\nO 1 2 0 3\n");
    let atoms = dir.path().join("c.atoms");
    let (code, _, err) = smtc(&["count", "--nnf", path(&nnf), "--atoms", path(&atoms)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("not total"));
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(smtc(&[]).0, EXIT_USAGE);
    assert_eq!(smtc(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(smtc(&["count", "x.smt2", "--mode", "psychic"]).0, EXIT_USAGE);
    assert_eq!(smtc(&["count"]).0, EXIT_USAGE);

    let bad = dir.path().join("bad.smt2");
    fs::write(&bad, "(declare-const x Int)(assert (> x 0))").unwrap();
    let (code, _, err) = smtc(&["count", path(&bad)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.starts_with("error: "));
    assert_eq!(smtc(&["count", path(&dir.path().join("missing.smt2"))]).0, EXIT_INPUT);

    let nnf = dir.path().join("bad.nnf");
    let atoms = dir.path().join("bad.atoms");
    fs::write(&nnf, "nnf 1 0 1\nL 7\n").unwrap();
    fs::write(&atoms, "1 bool a\n").unwrap();
    assert_eq!(smtc(&["check", "--nnf", path(&nnf), "--atoms", path(&atoms)]).0, EXIT_INPUT);
    assert_eq!(smtc(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let input = fig1(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_smtc")).args(["count", &input]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "3\n");
    let out = Command::new(env!("CARGO_BIN_EXE_smtc")).arg("count").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
