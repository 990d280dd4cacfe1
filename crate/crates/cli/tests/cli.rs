use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn rcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    let o = rcx(&all);
    assert!(o.status.success(), "gen {args:?}");
    let p = dir.path().join(name);
    fs::write(&p, &o.stdout).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn planar_square_and_pentagon() {
    let dir = TempDir::new().unwrap();
    let sq = gen(&dir, "sq.pts", &["box", "0:1", "0:1"]);
    let cert = dir.path().join("c.json");
    let o = rcx(&["rc2d", s(&sq), "--cert", s(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rc = 3"), "{out}");
    assert!(out.contains("observers = 12"));
    let json = fs::read_to_string(&cert).unwrap();
    assert!(json.contains("\"k\": 3"));
    assert!(json.contains("\"separation\": \"strict\""));

    let p = gen(&dir, "p.pts", &["pentagon"]);
    let out = stdout(&rcx(&["rc2d", s(&p)]));
    assert!(out.contains("observers = 10") && out.contains("arcs = 6") && out.contains("rc = 3"));
}

#[test]
fn planar_command_rejects_other_dimensions() {
    let dir = TempDir::new().unwrap();
    let seg = gen(&dir, "s.pts", &["simplex", "1"]);
    let o = rcx(&["rc2d", s(&seg)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simplex_against_certificate_points() {
    let dir = TempDir::new().unwrap();
    let x = gen(&dir, "d3.pts", &["simplex", "3"]);
    let y = gen(&dir, "cert.pts", &["delta3-cert"]);
    let against = format!("file:{}", s(&y));
    let o = rcx(&["rc", s(&x), "--against", &against]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rc = 4"));
    let dot = dir.path().join("g.dot");
    let o = rcx(&["bounds", s(&x), "--against", &against, "--dot", s(&dot)]);
    assert!(stdout(&o).contains("chromatic=4"));
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph hiding {"));
}

#[test]
fn against_sources() {
    let dir = TempDir::new().unwrap();
    let sq = gen(&dir, "sq.pts", &["box", "0:1", "0:1"]);
    assert!(stdout(&rcx(&["rc", s(&sq), "--against", "parity-obs"])).contains("rc = 3"));
    assert!(stdout(&rcx(&["rc", s(&sq), "--against", "ball:1"])).contains("rc = 2"));
    let d2 = gen(&dir, "d2.pts", &["simplex", "2"]);
    assert_eq!(rcx(&["rc", s(&d2), "--against", "parity-obs"]).status.code(), Some(2));
    assert_eq!(rcx(&["rc", s(&sq), "--against", "disc:3"]).status.code(), Some(2));
    let d4 = gen(&dir, "d4.pts", &["simplex", "4"]);
    let out = stdout(&rcx(&["rc", s(&d4), "--against", "ball:1"]));
    assert!(out.contains("rc = 4"), "{out}");
}

#[test]
fn epsilon_command() {
    let dir = TempDir::new().unwrap();
    let seg = gen(&dir, "s.pts", &["box", "0:1"]);
    let out = stdout(&rcx(&["rc-eps", s(&seg), "--eps", "1/2"]));
    assert!(out.contains("k = 2"), "{out}");
    let tri = gen(&dir, "d2.pts", &["simplex", "2"]);
    let out = stdout(&rcx(&["rc-eps", s(&tri), "--eps", "1"]));
    assert!(out.contains("constant = 16"), "{out}");
    let sq = gen(&dir, "sq.pts", &["box", "0:1", "0:1"]);
    let out = stdout(&rcx(&["rc-eps", s(&sq), "--eps", "1/4"]));
    assert!(out.contains("k = 3"), "{out}");
    assert_eq!(rcx(&["rc-eps", s(&sq), "--eps", "0"]).status.code(), Some(2));
    assert_eq!(rcx(&["rc-eps", s(&sq), "--eps", "-1/2"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let q = gen(&dir, "q.h", &["cross-relaxation", "3"]);
    let x = gen(&dir, "c3.pts", &["cross", "3"]);
    let o = rcx(&["verify", s(&q), s(&x)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified"));
    let half = dir.path().join("half.h");
    fs::write(&half, "2 1\n1 1 1\n").unwrap();
    let d2 = gen(&dir, "d2.pts", &["simplex", "2"]);
    let o = rcx(&["verify", s(&half), s(&d2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("unbounded"));
    let x4 = gen(&dir, "c4.pts", &["cross", "4"]);
    let o = rcx(&["verify", s(&q), s(&x4)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_reports_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.pts");
    fs::write(&bad, "2 2\n0 0\n1 x\n").unwrap();
    let o = rcx(&["rc2d", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let badq = dir.path().join("bad.h");
    fs::write(&badq, "2 1\n1 1/0 1\n").unwrap();
    let x = gen(&dir, "d2.pts", &["simplex", "2"]);
    let o = rcx(&["verify", s(&badq), s(&x)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn generators() {
    let o = rcx(&["gen", "four-facet", "2"]);
    assert_eq!(stdout(&o), "3 5\n-1 0 1\n0 0 0\n0 0 1\n0 1 0\n1 0 0\n");
    assert_eq!(stdout(&rcx(&["gen", "debruijn", "5"])).lines().next(), Some("5 10"));
    assert_eq!(stdout(&rcx(&["gen", "delta3-cert"])).lines().next(), Some("3 28"));
    assert_eq!(rcx(&["gen", "nonsense"]).status.code(), Some(2));
    assert_eq!(rcx(&["gen", "four-facet", "9"]).status.code(), Some(2));
}

#[test]
fn iteration_exit_codes() {
    let dir = TempDir::new().unwrap();
    let sq = gen(&dir, "sq.pts", &["box", "0:1", "0:1"]);
    let o = rcx(&["iterate", s(&sq), "--box", "5", "--rounds", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rc = 3"));
    let d4 = gen(&dir, "d4.pts", &["simplex", "4"]);
    let o = rcx(&["iterate", s(&d4), "--box", "2", "--rounds", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("bound only"));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let x = gen(&dir, "d3.pts", &["simplex", "3"]);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let o1 = rcx(&["--jobs", "1", "rc", s(&x), "--against", "ball:1", "--cert", s(&a)]);
    let o2 = rcx(&["--jobs", "3", "rc", s(&x), "--against", "ball:1", "--cert", s(&b)]);
    assert_eq!(
        stdout(&o1).replace(s(&a), "CERT"),
        stdout(&o2).replace(s(&b), "CERT")
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
