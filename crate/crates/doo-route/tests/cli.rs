use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_doo-route"))
}

fn board(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("boards").join(name)
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encode_fix_a() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "p.json", r#"{"points": [[2, 5], [8, 5]]}"#);
    let o = run(&["encode", s(&board("fix_a.json")), &p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), r#"{"seq":[0,1]}"#);
}

#[test]
fn encode_raw_keeps_slack() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "p.json", r#"{"points": [[2, 5], [7, 5], [3, 5]]}"#);
    let fa = board("fix_a.json");
    assert_eq!(stdout(&run(&["encode", s(&fa), &p, "--raw"])).trim(), r#"{"seq":[0,1,0]}"#);
    assert_eq!(stdout(&run(&["encode", s(&fa), &p])).trim(), r#"{"seq":[0]}"#);
    assert_eq!(stdout(&run(&["encode", s(&fa), &p, "--format", "text"])).trim(), "(0)");
}

#[test]
fn plan_done_and_next() {
    let dir = tempfile::tempdir().unwrap();
    let cur = write(&dir, "c.json", r#"{"seq": [0, 1]}"#);
    let rev = write(&dir, "r.json", r#"{"seq": [1, 0]}"#);
    let goal = write(&dir, "g.json", r#"{"seq": [2, 3]}"#);
    let fb = board("fix_b.json");
    for g in [&cur, &rev] {
        let o = run(&["plan", s(&fb), "--current", &cur, "--goal", g]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), r#"{"outcome":"done"}"#);
    }
    let o = run(&["plan", s(&fb), "--current", &cur, "--goal", &goal]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcome"], "next");
    assert_eq!(v["span"], serde_json::json!([0, 2]));
    assert_eq!(v["projected"], serde_json::json!([2, 3]));
    assert_eq!(v["distance_after"], 0);
}

#[test]
fn plan_accepts_polylines() {
    let dir = tempfile::tempdir().unwrap();
    let cur = write(&dir, "c.json", r#"{"points": [[0.5, 0.5], [1.5, 0.5]]}"#);
    let goal = write(&dir, "g.json", r#"{"seq": [0, 1]}"#);
    let o = run(&["plan", s(&board("fix_b.json")), "--current", &cur, "--goal", &goal]);
    assert_eq!(stdout(&o).trim(), r#"{"outcome":"done"}"#);
}

#[test]
fn bowtie_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let l = write(&dir, "bow.json", r#"{"boundary": [[0, 0], [1, 1], [1, 0], [0, 1]]}"#);
    let o = run(&["decompose", &l]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("NonSimplePolygon"), "{err}");
    assert_eq!(err.trim().lines().count(), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    let invalid = write(&dir, "inv.json", r#"{"seq": [0, 3]}"#);
    let ok = write(&dir, "ok.json", r#"{"seq": [0, 1]}"#);
    let fb = board("fix_b.json");
    assert_eq!(run(&["graph", &bad]).status.code(), Some(2));
    assert_eq!(run(&["graph", "/nonexistent/board.json"]).status.code(), Some(2));
    assert_eq!(run(&["plan", s(&fb), "--current", &invalid, "--goal", &ok]).status.code(), Some(2));
    assert_eq!(run(&["bench", "--cap", "0"]).status.code(), Some(2));
    assert_eq!(run(&["graph", s(&fb), "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn decompose_round_trips_through_graph() {
    let dir = tempfile::tempdir().unwrap();
    let mut raw: Value = serde_json::from_str(&std::fs::read_to_string(board("bundled.json")).unwrap()).unwrap();
    raw.as_object_mut().unwrap().remove("regions");
    let fresh = write(&dir, "fresh.json", &raw.to_string());
    let decomposed = dir.path().join("decomposed.json");
    let o = run(&["decompose", &fresh, "--out", s(&decomposed)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let g1 = run(&["graph", &fresh]);
    let g2 = run(&["graph", s(&decomposed)]);
    assert_eq!(g1.status.code(), Some(0));
    assert_eq!(stdout(&g1), stdout(&g2));
    let again = run(&["decompose", s(&decomposed)]);
    assert_eq!(stdout(&again), std::fs::read_to_string(&decomposed).unwrap());
}

#[test]
fn simulate_emits_start_steps_end() {
    let dir = tempfile::tempdir().unwrap();
    let init = write(&dir, "i.json", r#"{"points": [[0.5, 0.5], [1.5, 0.5]]}"#);
    let goal = write(&dir, "g.json", r#"{"seq": [2, 3]}"#);
    let o = run(&["simulate", s(&board("fix_b.json")), "--initial", &init, "--goal", &goal]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["type"], "start");
    assert_eq!(lines[1]["type"], "step");
    assert_eq!(lines[1]["configuration"], serde_json::json!([2, 3]));
    assert_eq!(lines[2]["type"], "end");
    assert_eq!(lines[2]["outcome"], "converged");
}

#[test]
fn render_draws_board_and_doo() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "p.json", r#"{"points": [[0.02, 0.02], [0.3, 0.02]]}"#);
    let o = run(&["render", s(&board("bundled.json")), "--polyline", &p]);
    assert_eq!(o.status.code(), Some(0));
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<circle").count(), 24);
    assert_eq!(svg.matches("<polyline").count(), 1);
}

fn strip_timing(mut v: Value) -> Value {
    if let Some(o) = v.as_object_mut() {
        o.retain(|k, _| !k.starts_with("plan_time"));
    }
    v
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let init = write(&dir, "i.json", r#"{"points": [[0.02, 0.02], [0.3, 0.02]]}"#);
    let goal = write(&dir, "g.json", r#"{"seq": [-1, 0, 5, 24, 25, 6, 2, -1]}"#);
    let bb = board("bundled.json");
    for args in [
        vec!["graph", s(&bb)],
        vec!["decompose", s(&bb)],
        vec!["render", s(&bb)],
        vec!["encode", s(&bb), &init],
    ] {
        assert_eq!(stdout(&run(&args)), stdout(&run(&args)), "{args:?}");
    }
    let sim = |_| {
        let o = run(&["simulate", s(&bb), "--initial", &init, "--goal", &goal]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        stdout(&o).lines().map(|l| strip_timing(serde_json::from_str(l).unwrap())).collect::<Vec<_>>()
    };
    assert_eq!(sim(0), sim(1));
    let bench = |threads: &str| {
        let o = exe().args(["bench", "--trials", "30", "--seed", "5"]).env("DOO_ROUTE_THREADS", threads).output().unwrap();
        strip_timing(serde_json::from_str(&stdout(&o)).unwrap())
    };
    assert_eq!(bench("1"), bench("3"));
}
