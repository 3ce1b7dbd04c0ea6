use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_torsion-lab"));
    c.env_remove("TORSIONLAB_DATA");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("torsion-lab-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn report(args: &[&str], name: &str) -> (Output, Value) {
    let path = scratch(name).join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--json", &p]);
    let out = run(&full);
    let v = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out, v)
}

#[test]
fn invariants_prints_the_surface() {
    let o = run(&["invariants", "--f1", "-x1", "--f2", "x2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("T = [[1, 0], [0, -1]]"), "{s}");
    assert!(s.contains("Rank2Real"));
    assert!(s.contains("Surface (1)"));
}

#[test]
fn classification_needs_a_point_for_varying_torsion() {
    let o = run(&["invariants", "--f1", "-x1*x2", "--f2", "x2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["invariants", "--f1", "-x1*x2", "--f2", "x2", "--at", "x1=1,x2=2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Rank2Real"));
    let o = run(&["invariants", "--f1", "-x1*x2", "--f2", "x2", "--at", "x1=1,x2=-1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn emit_real_prints_twelve_lines() {
    let o = run(&["system", "emit", "--case", "real"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 12);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["simplify", "1 +"]).status.code(), Some(2));
    assert_eq!(run(&["lax", "derive", "--case", "imaginary"]).status.code(), Some(2));
    assert_eq!(run(&["solution", "check", "--case", "real", "--u", "t*p1", "--v", "0"]).status.code(), Some(2));
}

#[test]
fn simplify_styles() {
    let o = run(&["simplify", "cos(lam)^2 + sin(lam)^2"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["simplify", "--style", "latex", "x1/2"]);
    assert_eq!(stdout(&o).trim(), "\\frac{1}{2} \\, x^1");
}

#[test]
fn failing_candidate_exits_one() {
    let (o, v) = report(&["solution", "check", "--case", "real", "--u", "p1*p2", "--v", "p1*p2"], "fail");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(v["status"], "fail");
    assert!(v["findings"].as_array().unwrap().iter().any(|f| f["kind"] == "violation"));
}

#[test]
fn passing_candidate_reports_metrics() {
    let (o, v) = report(
        &["solution", "check", "--case", "real", "--u", "p1^3", "--v", "p2^3", "--numeric", "50"],
        "pass",
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(v["status"], "pass");
    assert_eq!(v["metrics"]["nonflat"], true);
    assert_eq!(v["seed"], 0);
    assert!(v["findings"].as_array().unwrap().is_empty());
}

#[test]
fn complex_eta_is_a_finding() {
    let (o, v) = report(&["lax", "derive", "--case", "complex"], "eta");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(v["status"], "finding");
    let kinds: Vec<_> = v["findings"].as_array().unwrap().iter().map(|f| f["kind"].clone()).collect();
    assert!(kinds.contains(&Value::from("mismatch")));
    let (_, v) = report(&["lax", "derive", "--case", "real"], "eta-real");
    assert_eq!(v["status"], "pass");
}

#[test]
fn reports_are_deterministic() {
    let args = ["cone", "verify", "--case", "real", "--samples", "200", "--seed", "7"];
    let (_, mut a) = report(&args, "det-a");
    let (_, mut b) = report(&args, "det-b");
    for v in [&mut a, &mut b] {
        v["metrics"].as_object_mut().unwrap().remove("runtime_ms");
    }
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
}

#[test]
fn cone_tolerance_floor_fails() {
    let o = run(&["cone", "verify", "--case", "complex", "--tol", "1e-17"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn data_directory_override() {
    let dir = scratch("data");
    let good = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/v1/explicit.txt")).unwrap();
    let mut lines: Vec<&str> = good.lines().collect();
    lines[0] = "u_p1p1p2 + x1";
    std::fs::write(dir.join("explicit.txt"), lines.join("\n")).unwrap();
    let o = bin()
        .env("TORSIONLAB_DATA", &dir)
        .args(["system", "verify-paper", "--case", "real"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let missing = scratch("empty");
    let o = bin()
        .env("TORSIONLAB_DATA", &missing)
        .args(["system", "reduce"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn membership_commands_pass() {
    for args in [
        vec!["system", "verify-paper", "--case", "real"],
        vec!["system", "reduce", "--degree-bound", "2"],
        vec!["system", "cases"],
        vec!["lax", "closure", "--case", "real", "--u", "0", "--v", "0"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
    assert_eq!(run(&["system", "verify-paper", "--case", "complex"]).status.code(), Some(2));
}

#[test]
fn suite_passes() {
    let (o, v) = report(&["suite"], "suite");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(v["status"], "pass");
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
}
