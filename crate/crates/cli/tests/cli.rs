//! End-to-end checks of the binary: exit codes, report formats, and
//! byte-level determinism of the separations report.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ogis-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const POWERSET3: &str = "domain: 0 1 2\n\n0\n1\n2\n0 1\n0 2\n1 2\n0 1 2\n";
const SINGLES4: &str = "domain: 0 1 2 3\n0\n1\n2\n3\n";
const COVER1: &str = "universe: 1 2\n1\n2\n1 2\n";

#[test]
fn run_identifies_the_chain_target() {
    let out = run(&[
        "run",
        "--family",
        "notpb",
        "--target",
        "3",
        "--verifier",
        "check",
        "--learner",
        "chain",
        "--budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["summary"][0]["metrics"]["correctness_queries"], "5");
    assert_eq!(report["results"][0]["identified"], true);
}

#[test]
fn run_with_hcheck_exhausts_the_budget_without_identifying() {
    let out = run(&[
        "run",
        "--family",
        "notpb",
        "--target",
        "3",
        "--verifier",
        "hcheck",
        "--learner",
        "chain",
        "--budget",
        "100",
    ]);
    // the chain hypothesis grows forever under the blind verifier, so the
    // run ends by budget, not by wrong convergence
    assert_eq!(out.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["results"][0]["identified"], false);
    assert_eq!(report["results"][0]["counterexamples"], 0);
}

#[test]
fn run_bcheck_verifier_parses_with_bound() {
    let out = run(&[
        "run",
        "--family",
        "cbnotpb",
        "--target",
        "2",
        "--verifier",
        "bcheck:6",
        "--learner",
        "consistent-enum",
        "--budget",
        "100",
        "--window",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["results"][0]["final_hypothesis"], "UpTo(2)");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&[
            "run",
            "--family",
            "notpb",
            "--target",
            "3",
            "--learner",
            "nope"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "run",
            "--family",
            "bogus",
            "--target",
            "0",
            "--learner",
            "chain"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "run",
            "--family",
            "notpb",
            "--target",
            "3",
            "--learner",
            "chain",
            "--verifier",
            "bcheck:x"
        ])
        .status
        .code(),
        Some(2)
    );
    // clap's own usage failures also land on 2
    assert_eq!(run(&["run", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn separations_is_deterministic_and_green() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let status_a = run(&[
        "separations",
        "--quick",
        "--seed",
        "42",
        "--out",
        out_a.to_str().unwrap(),
    ]);
    let status_b = run(&[
        "separations",
        "--quick",
        "--seed",
        "42",
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(status_a.status.code(), Some(0));
    assert_eq!(status_b.status.code(), Some(0));
    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same seed, same bytes");
}

#[test]
fn seed_env_fallback_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let out_env = dir.path().join("env.json");
    let out_flag = dir.path().join("flag.json");
    let s = bin()
        .env("OGIS_LAB_SEED", "7")
        .args(["separations", "--quick", "--out", out_env.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(s.status.code(), Some(0));
    let s = run(&[
        "separations",
        "--quick",
        "--seed",
        "7",
        "--out",
        out_flag.to_str().unwrap(),
    ]);
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&out_env).unwrap(),
        std::fs::read(&out_flag).unwrap()
    );
}

#[test]
fn csv_and_json_carry_identical_metric_values() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("r.json");
    let csv_path = dir.path().join("r.csv");
    let common = [
        "run",
        "--family",
        "notpb",
        "--target",
        "2",
        "--verifier",
        "check",
        "--learner",
        "chain",
        "--budget",
        "50",
        "--window",
        "10",
    ];
    let mut args: Vec<&str> = common.to_vec();
    args.extend(["--out", json_path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(run(&args).status.code(), Some(0));
    let mut args: Vec<&str> = common.to_vec();
    args.extend(["--out", csv_path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(run(&args).status.code(), Some(0));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let metrics = report["summary"][0]["metrics"].as_object().unwrap();
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    for (key, value) in metrics {
        let line = format!("run,{},{}", key, value.as_str().unwrap());
        assert!(csv.contains(&line), "missing `{line}` in CSV:\n{csv}");
    }
}

#[test]
fn markdown_format_renders_the_summary_table() {
    let out = run(&[
        "run",
        "--family",
        "notpb",
        "--target",
        "1",
        "--verifier",
        "check",
        "--learner",
        "chain",
        "--budget",
        "50",
        "--window",
        "10",
        "--format",
        "md",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("| id | status | metrics |"));
    assert!(text.contains("| run | identified |"));
}

#[test]
fn finite_td_vc_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let power3 = write_fixture(dir.path(), "powerset3.cls", POWERSET3);
    let singles4 = write_fixture(dir.path(), "singles4.cls", SINGLES4);

    let out = run(&["finite", "td", &power3]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("TD = 3"));

    let out = run(&["finite", "vc", &power3]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("VC = 3"));

    let out = run(&["finite", "bounds", &singles4]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0.5 <= 1 <= 3: pass");
}

#[test]
fn finite_reduce_and_mogis() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write_fixture(dir.path(), "cover1.scv", COVER1);
    let out = run(&["finite", "reduce", &cover]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("minimum set cover size: 1"));
    assert!(text.contains("reduced minimum counterexample set size: 1"));
    assert!(text.contains("sizes agree"));

    let power3 = write_fixture(dir.path(), "powerset3.cls", POWERSET3);
    let out = run(&["finite", "mogis", &power3]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("measured >= TD"));

    let out = run(&["finite", "mincex", &power3, "--target", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("size 3"));
}

#[test]
fn malformed_class_files_exit_2_with_line_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_fixture(dir.path(), "bad.cls", "domain: 0 1\n0 x\n");
    let out = run(&["finite", "td", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(
        err.contains("line 2"),
        "diagnostic should name the line: {err}"
    );
}
