//! End-to-end checks through the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

const RELIABILITY_ENV: &str = "POLAR_SPECTRUM_RELIABILITY_FILE";

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_tmp(name: &str, body: &str) -> PathBuf {
    let path = tmp(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn command() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polar-spectrum"));
    cmd.env_remove(RELIABILITY_ENV);
    cmd
}

fn run(args: &[&str]) -> Output {
    command().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// The punctured worked example: N=8, F={0,1,2,3,4,6}, P={0,2,4,6}.
fn fixture_files(prefix: &str) -> (PathBuf, PathBuf) {
    let frozen = write_tmp(&format!("{prefix}_frozen.txt"), "0 1 2 3 4 6\n");
    let pattern = write_tmp(&format!("{prefix}_pattern.json"), "[0, 2, 4, 6]\n");
    (frozen, pattern)
}

fn fixture_args<'a>(frozen: &'a Path, pattern: &'a Path) -> Vec<&'a str> {
    vec![
        "--n",
        "3",
        "--frozen-file",
        frozen.to_str().unwrap(),
        "--mode",
        "punctured",
        "--pattern-file",
        pattern.to_str().unwrap(),
    ]
}

#[test]
fn spectrum_json_round_trips() {
    let (frozen, pattern) = fixture_files("spectrum");
    let mut args = vec!["spectrum"];
    args.extend(fixture_args(&frozen, &pattern));
    let report = stdout_json(&run(&args));

    assert_eq!(report["spectrum"], json!([[0, "1"], [2, "2"], [4, "1"]]));
    assert_eq!(report["params"]["mode"], "punctured");
    assert_eq!(report["params"]["n"], 3);
    assert_eq!(report["params"]["code_len"], 4);
    assert_eq!(report["params"]["k"], 2);
    assert_eq!(report["params"]["pattern"], json!([0, 2, 4, 6]));
    assert_eq!(report["params"]["derived_frozen"], json!([0, 2, 4, 6]));
    assert_eq!(report["params"]["pre_transform"], "identity");
    assert_eq!(report["params"]["w_end"], 4);

    let c = report["stats"]["C"].as_array().unwrap();
    assert_eq!(c.len(), 7);
    let total: u64 = c.iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(report["stats"]["n_c"].as_u64().unwrap(), total);
    assert!(report["stats"]["ms"].is_number());
}

#[test]
fn repeated_runs_are_identical_minus_timing() {
    let (frozen, pattern) = fixture_files("stable");
    let out_a = tmp("stable_a.json");
    let out_b = tmp("stable_b.json");
    for out in [&out_a, &out_b] {
        let mut args = vec!["spectrum"];
        args.extend(fixture_args(&frozen, &pattern));
        args.extend(["--pac", "101", "--out", out.to_str().unwrap()]);
        let run = run(&args);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    }
    let a = std::fs::read_to_string(&out_a).unwrap();
    let b = std::fs::read_to_string(&out_b).unwrap();
    // `ms` is the one timing field and comes last; everything before it must
    // agree byte for byte.
    let cut_a = a.rfind("\"ms\":").unwrap();
    let cut_b = b.rfind("\"ms\":").unwrap();
    assert_eq!(a[..cut_a], b[..cut_b]);

    // And the parsed reports agree entirely once ms is masked.
    let mut va: Value = serde_json::from_str(&a).unwrap();
    let mut vb: Value = serde_json::from_str(&b).unwrap();
    va["stats"]["ms"] = json!(0);
    vb["stats"]["ms"] = json!(0);
    assert_eq!(va, vb);
}

#[test]
fn mindist_reports_the_first_nonzero_weight() {
    let frozen = write_tmp("mindist_frozen.txt", "[0, 1, 2, 4]");
    let report = stdout_json(&run(&[
        "mindist",
        "--n",
        "3",
        "--frozen-file",
        frozen.to_str().unwrap(),
    ]));
    assert_eq!(report["spectrum"], json!([[4, "14"]]));
    assert_eq!(report["params"]["command"], "mindist");
}

#[test]
fn coset_queries_both_semantics() {
    let (frozen, pattern) = fixture_files("coset");
    let base = fixture_args(&frozen, &pattern);

    let mut args = vec!["coset"];
    args.extend(base.iter().copied());
    args.extend(["--prefix", "0001", "--w-end", "2"]);
    let report = stdout_json(&run(&args));
    assert_eq!(report["spectrum"], json!([[2, "4"]]));
    assert_eq!(report["params"]["prefix"], "0001");
    assert_eq!(report["params"]["semantics"], "rwef");

    let mut args = vec!["coset"];
    args.extend(base.iter().copied());
    args.extend(["--prefix", "0000", "--w-end", "2", "--semantics", "mwef"]);
    let report = stdout_json(&run(&args));
    assert_eq!(report["spectrum"], json!([[0, "1"]]));
}

#[test]
fn oracle_check_reports_match() {
    let (frozen, pattern) = fixture_files("oracle");
    let mut args = vec!["oracle-check"];
    args.extend(fixture_args(&frozen, &pattern));
    let out = run(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("MATCH"), "got: {text}");
}

#[test]
fn csv_holds_the_same_pairs() {
    let (frozen, pattern) = fixture_files("csv");
    let mut args = vec!["spectrum"];
    args.extend(fixture_args(&frozen, &pattern));
    args.extend(["--format", "csv"]);
    let out = run(&args);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "w,A_w\n0,1\n2,2\n4,1\n"
    );
}

#[test]
fn reliability_env_var_overrides_the_bundled_sequence() {
    let bundled = stdout_json(&run(&["spectrum", "--n", "3", "--k", "2"]));

    // Reversed reliability: indices 0 and 1 become the most reliable, which
    // the bundled sequence would never pick as information bits.
    let doctored = write_tmp("reliability_doctored.txt", "7 6 5 4 3 2 1 0\n");
    let out = command()
        .env(RELIABILITY_ENV, &doctored)
        .args(["spectrum", "--n", "3", "--k", "2"])
        .output()
        .unwrap();
    let overridden = stdout_json(&out);
    assert_eq!(overridden["params"]["frozen"], json!([2, 3, 4, 5, 6, 7]));
    assert_ne!(overridden["params"]["frozen"], bundled["params"]["frozen"]);

    let missing = command()
        .env(RELIABILITY_ENV, tmp("no_such_sequence.txt"))
        .args(["spectrum", "--n", "3", "--k", "2"])
        .output()
        .unwrap();
    assert!(!missing.status.success());
    assert!(!missing.stderr.is_empty());
}

#[test]
fn conflicting_and_invalid_flags_fail_loudly() {
    let frozen = write_tmp("conflict_frozen.txt", "0 1");
    let out = run(&[
        "spectrum",
        "--n",
        "2",
        "--k",
        "1",
        "--frozen-file",
        frozen.to_str().unwrap(),
    ]);
    assert!(!out.status.success());

    let out = run(&["spectrum", "--n", "2", "--k", "1", "--pac", "0110"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("taps"));

    let out = run(&["spectrum", "--n", "2", "--k", "1", "--mode", "punctured"]);
    assert!(!out.status.success());

    let out = run(&["spectrum", "--n", "2", "--frozen-file", tmp("absent.txt").to_str().unwrap()]);
    assert!(!out.status.success());
}
