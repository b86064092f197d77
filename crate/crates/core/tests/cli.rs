use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ftc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftconsensus"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_and_dump_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftc(dir.path(), &["list-builtins"]);
    assert!(o.status.success());
    let names: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(names.contains(&"cycle6".to_string()));
    assert!(names.contains(&"counterexample".to_string()));

    let o = ftc(dir.path(), &["builtin", "cycle6", "--out", "c.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(doc["name"], "cycle6");

    let o = ftc(dir.path(), &["builtin", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cycle6"));
}

#[test]
fn simulate_file_and_builtin_agree() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ftc(dir.path(), &["builtin", "cycle6", "--out", "c.json"])
        .status
        .success());
    let o = ftc(
        dir.path(),
        &["simulate", "--scenario", "c.json", "--out", "a.csv", "--diag", "a.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("consensus at t ="));
    let o = ftc(
        dir.path(),
        &[
            "simulate",
            "--scenario",
            "builtin:cycle6",
            "--out",
            "b.csv",
            "--diag",
            "b.json",
        ],
    );
    assert!(o.status.success());
    let read = |f: &str| fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.json"), read("b.json"));

    let diag: serde_json::Value = serde_json::from_slice(&read("a.json")).unwrap();
    assert_eq!(diag["conserved_kind"], "mean");
    assert!((diag["consensus_value"].as_f64().unwrap() - 17.0 / 6.0).abs() < 1e-5);
    let csv = String::from_utf8(read("a.csv")).unwrap();
    assert!(csv.starts_with("t,x_1,x_2,x_3,x_4,x_5,x_6,disagreement,conserved\n"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for tag in ["1", "2"] {
        let o = ftc(
            dir.path(),
            &[
                "simulate",
                "--scenario",
                "builtin:switching-demo",
                "--out",
                &format!("{tag}.csv"),
                "--diag",
                &format!("{tag}.json"),
                "--bound",
                &format!("{tag}.bound.json"),
            ],
        );
        assert!(o.status.success());
    }
    for ext in ["csv", "json", "bound.json"] {
        let a = fs::read(dir.path().join(format!("1.{ext}"))).unwrap();
        let b = fs::read(dir.path().join(format!("2.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext}");
    }
}

#[test]
fn default_output_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftc(dir.path(), &["simulate", "--scenario", "builtin:two-agent"]);
    assert!(o.status.success());
    assert!(dir.path().join("two-agent.csv").exists());
    assert!(dir.path().join("two-agent.diag.json").exists());
}

#[test]
fn non_convergence_is_reported_but_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftc(dir.path(), &["simulate", "--scenario", "builtin:counterexample"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("still above consensus_tol"));
}

#[test]
fn bound_report_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftc(dir.path(), &["bound", "--scenario", "builtin:cycle6"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "p2-undirected");
    assert!((v["bound"].as_f64().unwrap() - 4.2084).abs() < 2e-3);
}

#[test]
fn analyze_counterexample_segment() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftc(
        dir.path(),
        &["analyze", "--graph", "builtin:counterexample", "--segment", "0"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["condensation"]["components"].as_array().unwrap().len(), 2);
    assert_eq!(v["has_spanning_tree"], false);

    let o = ftc(
        dir.path(),
        &["analyze", "--graph", "builtin:counterexample", "--segment", "7"],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn analyze_plain_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("g.json"),
        r#"{"n": 3, "weights": [[0, 1, 0], [0, 0, 1], [1, 0, 0]]}"#,
    )
    .unwrap();
    let o = ftc(dir.path(), &["analyze", "--graph", "g.json", "--out", "r.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["strongly_connected"], true);
    assert_eq!(v["symmetric"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftc(dir.path(), &["simulate", "--scenario", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(dir.path().join("bad.json"), r#"{"name": "x", "x0": [1, 2]}"#).unwrap();
    let o = ftc(dir.path(), &["simulate", "--scenario", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));

    fs::write(
        dir.path().join("blowup.json"),
        r#"{"name": "blowup", "x0": [1e308, -1e308],
            "protocol": {"kind": "linear"},
            "graph": {"n": 2, "weights": [[0, 1e300], [1e300, 0]]},
            "integrator": {"step": 0.001, "t_max": 0.01}}"#,
    )
    .unwrap();
    let o = ftc(dir.path(), &["simulate", "--scenario", "blowup.json"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    fs::write(dir.path().join("c.json"), "{}").unwrap();
    let o = ftc(
        dir.path(),
        &["simulate", "--scenario", "builtin:cycle6", "--out", "c.json/x/y.csv"],
    );
    assert_eq!(o.status.code(), Some(2));
}
