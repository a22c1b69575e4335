use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const HEADER: &str = "[field]\nchar = 0\n[K]\nkind = sqrt\nd = -1\n[quaternion]\nb = -1\n";

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoquat")).args(args).env_remove("ISOQUAT_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn hyperbolic() -> NamedTempFile {
    file(&format!("{HEADER}[form]\nn = 2\nS = [[0, 1],\n     [0, 0]]\n[vector]\nw = [t, t]\n"))
}

fn pure() -> NamedTempFile {
    file(&format!("{HEADER}[form]\nn = 1\nS = [[l]]\n"))
}

#[test]
fn info_summary_line() {
    let f = pure();
    let o = run(&["info", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("nonsingular, Division{definite}, pair axioms OK\n"));
}

#[test]
fn info_reports_split() {
    let f = file("[field]\nchar = 0\n[K]\nkind = sqrt\nd = -1\n[quaternion]\nb = 1\n[form]\nn = 1\nS = [[l]]\n");
    let o = run(&["info", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"certificate\": \"Split{y=1}\""));
}

#[test]
fn malformed_literal_has_location() {
    let f = file(&format!("{HEADER}[form]\nn = 1\nS = [[l $ 1]]\n"));
    let o = run(&["info", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":10:9: unexpected character `$`"), "{}", stderr(&o));
}

#[test]
fn morita_rejects_rank_zero() {
    let f = file(&format!("{HEADER}[form]\nn = 0\nS = [[l]]\n"));
    assert_eq!(run(&["morita", f.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn morita_output_reparses_to_itself() {
    let f = pure();
    let first = stdout(&run(&["morita", f.path().to_str().unwrap()]));
    assert!(first.contains("q = [-2, -2]"));
    let again = file(&first);
    let second = stdout(&run(&["morita", again.path().to_str().unwrap()]));
    assert_eq!(first, second);
}

#[test]
fn descend_exit_codes() {
    let h = hyperbolic();
    let o = run(&["descend", h.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("v: [1, 1]\n") && out.contains("s(v, v): 1\n"), "{out}");

    let p = pure();
    let o = run(&["descend", p.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "missing vector is a usage error");
    let v = file("t\n");
    let o = run(&["descend", p.path().to_str().unwrap(), "--vector", v.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "not isotropic");

    let split = file("[field]\nchar = 0\n[K]\nkind = sqrt\nd = -1\n[quaternion]\nb = 1\n[form]\nn = 2\nS = [[0, 1], [0, 0]]\n[vector]\nw = [t, t]\n");
    assert_eq!(run(&["descend", split.path().to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn vector_file_formats() {
    let h = hyperbolic();
    let list = file("[t^-1, t^-1]\n");
    let lines = file("# one literal per line\nt^-1\nt^-1\n");
    let a = run(&["descend", h.path().to_str().unwrap(), "--vector", list.path().to_str().unwrap()]);
    let b = run(&["descend", h.path().to_str().unwrap(), "--vector", lines.path().to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let bad = file("t\nt + \n");
    let o = run(&["descend", h.path().to_str().unwrap(), "--vector", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
}

#[test]
fn search_reports_witness_and_exhaustion() {
    let h = hyperbolic();
    let o = run(&["search", h.path().to_str().unwrap(), "--height", "1"]);
    assert!(stdout(&o).contains("over Q: found [1, 0]"));
    let p = pure();
    let o = run(&["search", p.path().to_str().unwrap(), "--height", "1", "--filtration", "2", "--format", "json"]);
    let out = stdout(&o);
    assert!(out.contains("\"found\": false") && !out.contains("\"found\": true"), "{out}");
}

#[test]
fn selftest_is_deterministic_and_reads_env_seed() {
    let p = pure();
    let path = p.path().to_str().unwrap();
    let a = run(&["selftest", path, "--samples", "5", "--seed", "11"]);
    let b = run(&["selftest", path, "--samples", "5", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("FAIL"));
    let env = Command::new(env!("CARGO_BIN_EXE_isoquat"))
        .args(["selftest", path, "--samples", "5"])
        .env("ISOQUAT_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn unsupported_characteristic() {
    let f = file("[field]\nchar = 11\n[K]\nkind = sqrt\nd = s\n[quaternion]\nb = s\n[form]\nn = 1\nS = [[l]]\n");
    let o = run(&["info", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
