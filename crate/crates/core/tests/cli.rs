use std::path::Path;
use std::process::Command;

use lambda_s2::cli::run_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("lambda-s2").chain(args.iter().copied());
    let code = run_with(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text.trim()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn enumerate_count_only() {
    assert_eq!(
        run(&["enumerate", "--d", "3", "--cycle-free", "--count-only"]),
        (0, "66240\n".into())
    );
    assert_eq!(
        run(&["enumerate", "--d", "2", "--count-only"]),
        (0, "20\n".into())
    );
}

#[test]
fn enumerate_writes_partitions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.jsonl");
    let (code, _) = run(&[
        "enumerate",
        "--d",
        "2",
        "--cycle-free",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 12);
    for line in text.lines() {
        assert_eq!(json(line)["colors"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn emat_then_det_gives_one() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = dir.path().join("e2.json");
    let (code, text) = run(&["emat", "--d", "2", "--vectors", vectors.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.contains(". e1 e2 e1"));
    assert_eq!(
        run(&["det", "--input", vectors.to_str().unwrap()]),
        (0, "1\n".into())
    );
}

#[test]
fn det_over_gf_p() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "x.json",
        r#"{"d":2,"field":"gfp","p":7,"vectors":[["1","0"],["0","1"],["1","0"],["1","0"],["0","1"],["0","1"]]}"#,
    );
    assert_eq!(run(&["det", "--input", &input]), (0, "1\n".into()));
}

#[test]
fn flip_and_signature() {
    let dir = tempfile::tempdir().unwrap();
    let p0 = write(
        dir.path(),
        "p0.json",
        r#"{"d":2,"n":4,"colors":[0,1,0,0,1,1]}"#,
    );
    assert_eq!(
        run(&["signature", "--d", "2", "--partition", &p0]),
        (0, "+1\n".into())
    );
    let (code, text) = run(&[
        "flip",
        "--d",
        "2",
        "--partition",
        &p0,
        "--face",
        "1",
        "2",
        "3",
    ]);
    assert_eq!(code, 0);
    let q = json(&text);
    let q_path = write(dir.path(), "q.json", &text);
    assert_eq!(
        run(&["signature", "--d", "2", "--partition", &q_path]),
        (0, "-1\n".into())
    );
    let (_, back) = run(&[
        "flip",
        "--d",
        "2",
        "--partition",
        &q_path,
        "--face",
        "3",
        "1",
        "2",
    ]);
    assert_eq!(json(&back)["colors"], json(r#"[0,1,0,0,1,1]"#));
    assert_ne!(q["colors"], json(r#"[0,1,0,0,1,1]"#));
}

#[test]
fn certificates_pass() {
    for args in [
        &["flip-graph", "--d", "2"][..],
        &["orbits", "--d", "2"],
        &["verify-relations", "--d", "2"],
        &["rank", "--p", "5"],
        &[
            "verify-relations",
            "--d",
            "3",
            "--sample",
            "2000",
            "--seed",
            "3",
        ],
    ] {
        let (code, text) = run(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(json(&text)["outcome"], "pass", "{args:?}");
    }
    let (_, rank) = run(&["rank"]);
    assert_eq!(json(&rank)["numbers"]["dimension"], 1);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(run(&["rank", "--p", "3"]).0, 2);
    assert_eq!(run(&["rank", "--p", "100"]).0, 2);
    assert_eq!(
        run(&["verify-relations", "--d", "3", "--sample", "10"]).0,
        2
    );
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["enumerate", "--d", "4", "--count-only"]).0, 2);
    assert_eq!(run(&["det", "--input", "/nonexistent/x.json"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"d":2,"n":4,"colors":[0,0,0,0,0,0]}"#,
    );
    assert_eq!(
        run(&[
            "flip",
            "--d",
            "2",
            "--partition",
            &bad,
            "--face",
            "1",
            "2",
            "3"
        ])
        .0,
        2
    );
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["certify-all", "--d", "2", "--seed", "9", "--samples", "500"];
    let (c1, one) = run(&[&["--threads", "1"][..], &args].concat());
    let (c2, two) = run(&[&["--threads", "2"][..], &args].concat());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(one, two);
    assert!(!one.contains("wall_time_s"));
    let (_, timed) = run(&[&["--timings"][..], &args].concat());
    assert!(timed.contains("wall_time_s"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lambda-s2");
    let ok = Command::new(bin)
        .args(["enumerate", "--d", "2", "--cycle-free", "--count-only"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "12\n");
    let bad = Command::new(bin)
        .args(["rank", "--p", "4"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
