use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newton-graph"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

fn unity_cubic(dir: &Path) {
    let s = 0.75f64.sqrt();
    let body = format!(
        r#"{{"roots": [{{"re": 1, "im": 0}}, {{"re": -0.5, "im": {s}}}, {{"re": -0.5, "im": {}}}]}}"#,
        -s
    );
    fs::write(dir.join("roots.json"), body).unwrap();
}

#[test]
fn newton_graph_writes_levels_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    unity_cubic(dir.path());
    let out = run(&["newton-graph", "--roots", "roots.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["n"], 2);
    assert_eq!(summary["valid"], true);
    for name in ["delta_0.json", "delta_1.json", "delta_2.json", "delta_2.dot", "validation.json", "summary.json"] {
        assert!(dir.path().join("o").join(name).exists(), "{name}");
    }
}

#[test]
fn validate_round_trips_the_written_graph() {
    let dir = tempfile::tempdir().unwrap();
    unity_cubic(dir.path());
    run(&["newton-graph", "--roots", "roots.json", "--out", "o"], dir.path());
    let ok = run(&["validate", "o/delta_2.json"], dir.path());
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let early = run(&["validate", "o/delta_1.json"], dir.path());
    assert_eq!(early.status.code(), Some(2));
    let eq = run(&["equivalence", "o/delta_2.json", "o/delta_2.json"], dir.path());
    assert_eq!(eq.status.code(), Some(0));
}

#[test]
fn thurston_verdicts_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.json"), r#"{"matrix": [[0.5, 0.5], [0.5, 0.5]]}"#).unwrap();
    fs::write(dir.path().join("s.json"), r#"[[0.25, 0.5], [0.25, 0.25]]"#).unwrap();
    assert_eq!(run(&["thurston", "m.json"], dir.path()).status.code(), Some(2));
    let small = run(&["thurston", "s.json"], dir.path());
    assert_eq!(small.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&small.stdout).contains("no obstruction"));
}

#[test]
fn usage_errors_and_refusals() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--roots", "missing.json"], dir.path()).status.code(), Some(1));
    fs::write(dir.path().join("q.json"), r#"{"roots": [{"re": 1, "im": 0}, {"re": -1, "im": 0}]}"#).unwrap();
    assert_eq!(run(&["analyze", "--roots", "q.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn render_writes_a_ppm() {
    let dir = tempfile::tempdir().unwrap();
    unity_cubic(dir.path());
    let out = run(
        &["render", "--roots", "roots.json", "--out", "b.ppm", "--width", "32", "--height", "24", "--overlay"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = fs::read(dir.path().join("b.ppm")).unwrap();
    assert!(bytes.starts_with(b"P6\n32 24\n255\n"));
    assert_eq!(bytes.len(), b"P6\n32 24\n255\n".len() + 32 * 24 * 3);
}
