use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pcentered"));
    c.env_remove("PCENTERED_ORACLE_LIMIT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_reports_violation_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p2.json");
    let coloring = dir.path().join("c.json");
    let witness = dir.path().join("w.json");
    assert_eq!(
        code(&run(&[
            "generate",
            "--family",
            "path",
            "--n",
            "2",
            "--out",
            p(&graph)
        ])),
        0
    );
    std::fs::write(&coloring, r#"{"k": 2, "colors": [1, 1]}"#).unwrap();
    let o = run(&[
        "verify",
        "--graph",
        p(&graph),
        "--coloring",
        p(&coloring),
        "--p",
        "1",
        "--witness-out",
        p(&witness),
    ]);
    assert_eq!(code(&o), 1);
    let verdict: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(verdict["verdict"], "violated");
    assert_eq!(verdict["witness"]["vertices"], serde_json::json!([0, 1]));
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(w, verdict["witness"]);

    std::fs::write(&coloring, "[0, 1]").unwrap();
    let o = run(&[
        "verify",
        "--graph",
        p(&graph),
        "--coloring",
        p(&coloring),
        "--p",
        "1",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn bounds_range_error_and_values() {
    let o = run(&["bounds", "--n", "16", "--p", "2"]);
    assert_eq!(code(&o), 2);
    let err = stderr_json(&o);
    assert_eq!(err["kind"], "probability_range");
    assert!(o.stdout.is_empty());

    let o = run(&["bounds", "--n", "2048", "--p", "2"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let q = r["q"].as_f64().unwrap();
    let mu = r["mu"].as_f64().unwrap();
    assert!((mu - 512.0 * 511.0 * q.powi(3)).abs() < 1e-6 * mu);
}

#[test]
fn generate_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |out: &Path| {
        vec![
            "generate".to_string(),
            "--family".into(),
            "subdivided".into(),
            "--p".into(),
            "1".into(),
            "--t".into(),
            "1".into(),
            "--b".into(),
            "2".into(),
            "--s".into(),
            "6".into(),
            "--out".into(),
            p(out).into(),
        ]
    };
    assert_eq!(code(&bin().args(args(&a)).output().unwrap()), 0);
    assert_eq!(code(&bin().args(args(&b)).output().unwrap()), 0);
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let g = pcentered::Graph::from_json(std::str::from_utf8(&text).unwrap()).unwrap();
    assert_eq!(g.n(), 30);
    let mut again = g.to_json();
    again.push('\n');
    assert_eq!(again.as_bytes(), &text[..]);

    let out = dir.path().join("solve.json");
    let o = run(&["solve", "--graph", p(&a), "--p", "2", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["status"], "exact");
    // timing stays out of the primary output
    assert!(dir.path().join("solve.json.log").exists());
    assert!(!std::fs::read_to_string(&out).unwrap().contains("elapsed"));
}

#[test]
fn solve_budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p7.json");
    run(&[
        "generate",
        "--family",
        "path",
        "--n",
        "7",
        "--out",
        p(&graph),
    ]);
    let o = run(&[
        "solve",
        "--graph",
        p(&graph),
        "--p",
        "7",
        "--max-nodes",
        "0",
    ]);
    assert_eq!(code(&o), 3);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_ne!(r["status"], "exact");
    let o = run(&["solve", "--graph", p(&graph), "--p", "7"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["chi"], 3);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gen.json");
    std::fs::write(&cfg, r#"{"family": "path", "n": 5}"#).unwrap();
    let o = run(&["generate", "--config", p(&cfg)]);
    assert_eq!(
        pcentered::Graph::from_json(std::str::from_utf8(&o.stdout).unwrap())
            .unwrap()
            .n(),
        5
    );
    let o = run(&["generate", "--config", p(&cfg), "--n", "3"]);
    assert_eq!(
        pcentered::Graph::from_json(std::str::from_utf8(&o.stdout).unwrap())
            .unwrap()
            .n(),
        3
    );

    std::fs::write(&cfg, r#"{"family": "path", "n": 5, "colour": 1}"#).unwrap();
    let o = run(&["generate", "--config", p(&cfg)]);
    assert_eq!(code(&o), 2);
    assert_eq!(stderr_json(&o)["kind"], "config");
}

#[test]
fn environment_sets_oracle_limit() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p4.json");
    let coloring = dir.path().join("c.json");
    run(&[
        "generate",
        "--family",
        "path",
        "--n",
        "4",
        "--out",
        p(&graph),
    ]);
    std::fs::write(&coloring, "[0, 1, 0, 1]").unwrap();
    let args = [
        "verify",
        "--graph",
        p(&graph),
        "--coloring",
        p(&coloring),
        "--p",
        "2",
        "--method",
        "bruteforce",
    ];
    assert_eq!(code(&run(&args)), 1);
    let o = bin()
        .args(args)
        .env("PCENTERED_ORACLE_LIMIT", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(stderr_json(&o)["kind"], "over_limit");
    let o = bin()
        .args(args)
        .env("PCENTERED_ORACLE_LIMIT", "3")
        .args(["--limits", r#"{"vertices": 4}"#])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn experiment_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(
        &cfg,
        r#"{"n": 16, "p": 2, "seed": 7, "trials": 50, "colorings": 4}"#,
    )
    .unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(
        code(&run(&["experiment", "--config", p(&cfg), "--out", p(&a)])),
        0
    );
    assert_eq!(
        code(&run(&["experiment", "--config", p(&cfg), "--out", p(&b)])),
        0
    );
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn nabla_writes_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k4.json");
    run(&[
        "generate",
        "--family",
        "clique",
        "--n",
        "4",
        "--out",
        p(&graph),
    ]);
    let o = run(&["nabla", "--graph", p(&graph), "--r", "0"]);
    assert_eq!(code(&o), 0);
    let m: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(m["density"], "3/2");
    let o = run(&[
        "nabla",
        "--graph",
        p(&graph),
        "--r",
        "0",
        "--mode",
        "greedy",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bad.json");
    std::fs::write(&graph, r#"{"n": 2, "edges": [[0, 0]]}"#).unwrap();
    let o = run(&["nabla", "--graph", p(&graph), "--r", "0"]);
    assert_eq!(code(&o), 2);
    stderr_json(&o);
    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    stderr_json(&o);
}
