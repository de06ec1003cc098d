//! End-to-end tests of the `meval` binary: scoring from files, report
//! content, exit codes and the bench CSV.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_meval")
}

fn workdir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_fixture(dir: &Path, name: &str, lines: &[&str]) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().unwrap()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process exited")
}

fn report(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

fn serialized_two_speaker(dir: &Path) -> (PathBuf, PathBuf) {
    let refs = write_fixture(
        dir,
        "ref.jsonl",
        &[
            r#"{"session_id":"s1","speaker":"spk1","words":"a b","start_time":0.0}"#,
            r#"{"session_id":"s1","speaker":"spk2","words":"e f","start_time":1.0}"#,
        ],
    );
    let hyps = write_fixture(
        dir,
        "hyp.jsonl",
        &[r#"{"session_id":"s1","speaker":"ch1","words":"a b e f","start_time":0.0}"#],
    );
    (refs, hyps)
}

fn channel_hopping(dir: &Path) -> (PathBuf, PathBuf) {
    let refs = write_fixture(
        dir,
        "ref.jsonl",
        &[
            r#"{"session_id":"s1","speaker":"spk1","words":"a b c d","start_time":0.0}"#,
            r#"{"session_id":"s1","speaker":"spk2","words":"e f g h","start_time":0.5}"#,
        ],
    );
    let hyps = write_fixture(
        dir,
        "hyp.jsonl",
        &[
            r#"{"session_id":"s1","speaker":"ch1","words":"a f c h","start_time":0.0}"#,
            r#"{"session_id":"s1","speaker":"ch2","words":"e b g d","start_time":0.0}"#,
        ],
    );
    (refs, hyps)
}

fn faulty_merge(dir: &Path) -> (PathBuf, PathBuf) {
    let refs = write_fixture(
        dir,
        "ref.jsonl",
        &[
            r#"{"session_id":"s1","speaker":"spk1","words":"a b","start_time":5.0}"#,
            r#"{"session_id":"s1","speaker":"spk2","words":"c d e","start_time":0.0}"#,
        ],
    );
    let hyps = write_fixture(
        dir,
        "hyp.jsonl",
        &[
            r#"{"session_id":"s1","speaker":"ch1","words":"c a b d e","start_time":0.0}"#,
            r#"{"session_id":"s1","speaker":"ch2","words":"","start_time":0.0}"#,
        ],
    );
    (refs, hyps)
}

fn aggregate(metric: &str, value: &Value) -> (u64, u64) {
    let entry = &value["aggregate"][metric];
    (
        entry["errors"].as_u64().unwrap(),
        entry["length"].as_u64().unwrap(),
    )
}

#[test]
fn score_mimo_serialized_session() {
    let dir = workdir("score_mimo_serialized");
    let (refs, hyps) = serialized_two_speaker(&dir);
    let output = run(&[
        "score",
        "mimo",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {:?}", output.stderr);
    assert_eq!(aggregate("mimo", &report(&output)), (0, 4));
}

#[test]
fn score_cpwer_channel_hopping_session() {
    let dir = workdir("score_cpwer_hopping");
    let (refs, hyps) = channel_hopping(&dir);
    let output = run(&[
        "score",
        "cpwer",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(aggregate("cpwer", &report(&output)), (4, 8));
}

#[test]
fn orcwer_brute_force_matches_dp() {
    let dir = workdir("orcwer_methods");
    let (refs, hyps) = faulty_merge(&dir);
    let base = [
        "score",
        "orcwer",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
    ];
    let dp = run(&base);
    let mut bf_args = base.to_vec();
    bf_args.extend(["--method", "brute-force"]);
    let bf = run(&bf_args);
    assert_eq!(exit_code(&dp), 0);
    assert_eq!(exit_code(&bf), 0);
    let (dp_report, bf_report) = (report(&dp), report(&bf));
    assert_eq!(aggregate("orcwer", &dp_report), (4, 5));
    assert_eq!(aggregate("orcwer", &bf_report), (4, 5));
    assert_eq!(
        dp_report["sessions"]["s1"]["orcwer"]["counts"],
        bf_report["sessions"]["s1"]["orcwer"]["counts"]
    );
    assert_eq!(dp_report["metadata"]["method"], "dp");
    assert_eq!(bf_report["metadata"]["method"], "brute-force");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = workdir("determinism");
    let (refs, hyps) = faulty_merge(&dir);
    let args = [
        "score",
        "mimo",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn report_writes_to_out_file() {
    let dir = workdir("out_file");
    let (refs, hyps) = serialized_two_speaker(&dir);
    let out = dir.join("report.json");
    let output = run(&[
        "score",
        "mimo",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let value: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(value["schema"], "meval-report-v1");
}

#[test]
fn custom_costs_change_totals() {
    let dir = workdir("custom_costs");
    let (refs, hyps) = serialized_two_speaker(&dir);
    // Doubled insertion cost: cpWER pays 2 per unmatched hypothesis word.
    let output = run(&[
        "score",
        "cpwer",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
        "--costs",
        "0,1,2,1",
    ]);
    assert_eq!(exit_code(&output), 0);
    let value = report(&output);
    assert_eq!(value["metadata"]["costs"]["insertion"], 2);
    // Counts still tally operations, not weights: 2 insertions + 2
    // deletions stay 4 errors over 4 words.
    assert_eq!(aggregate("cpwer", &value), (4, 4));
}

#[test]
fn usage_errors_exit_one() {
    let output = run(&["score", "nonsense-metric", "--ref", "x", "--hyp", "y"]);
    assert_eq!(exit_code(&output), 1);
    let output = run(&["score"]);
    assert_eq!(exit_code(&output), 1);
    let output = run(&["--definitely-not-a-flag"]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn invalid_costs_exit_one() {
    let dir = workdir("invalid_costs");
    let (refs, hyps) = serialized_two_speaker(&dir);
    let output = run(&[
        "score",
        "mimo",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
        "--costs",
        "2,1,1,1",
    ]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exit_code(&run(&["--help"])), 0);
    assert_eq!(exit_code(&run(&["--version"])), 0);
}

#[test]
fn missing_input_file_exits_two() {
    let output = run(&[
        "score",
        "mimo",
        "--ref",
        "/nonexistent/ref.jsonl",
        "--hyp",
        "/nonexistent/hyp.jsonl",
    ]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn malformed_input_exits_two_and_names_line() {
    let dir = workdir("malformed");
    let refs = write_fixture(dir.as_path(), "ref.jsonl", &[r#"{"session_id":"s1"}"#]);
    let hyps = write_fixture(
        dir.as_path(),
        "hyp.jsonl",
        &[r#"{"session_id":"s1","speaker":"c","words":"a"}"#],
    );
    let output = run(&[
        "score",
        "mimo",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 1"), "stderr: {stderr}");
}

#[test]
fn missing_begin_times_for_orc_exit_two() {
    let dir = workdir("orc_missing_times");
    let refs = write_fixture(
        dir.as_path(),
        "ref.jsonl",
        &[
            r#"{"session_id":"s1","speaker":"a","words":"x"}"#,
            r#"{"session_id":"s1","speaker":"b","words":"y"}"#,
        ],
    );
    let hyps = write_fixture(
        dir.as_path(),
        "hyp.jsonl",
        &[r#"{"session_id":"s1","speaker":"c","words":"x y"}"#],
    );
    let output = run(&[
        "score",
        "orcwer",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("missing begin time"), "stderr: {stderr}");
}

#[test]
fn memory_budget_exhaustion_exits_three() {
    let dir = workdir("budget");
    let (refs, hyps) = channel_hopping(&dir);
    let output = run(&[
        "score",
        "mimo",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
        "--memory-limit",
        "64",
    ]);
    assert_eq!(exit_code(&output), 3);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("instance too large"), "stderr: {stderr}");
}

#[test]
fn enumeration_limit_exits_three() {
    let dir = workdir("enumeration");
    let mut ref_lines = Vec::new();
    for i in 0..24 {
        ref_lines.push(format!(
            r#"{{"session_id":"s1","speaker":"spk","words":"w{i}","start_time":{i}.0}}"#
        ));
    }
    let ref_lines: Vec<&str> = ref_lines.iter().map(String::as_str).collect();
    let refs = write_fixture(dir.as_path(), "ref.jsonl", &ref_lines);
    let hyps = write_fixture(
        dir.as_path(),
        "hyp.jsonl",
        &[
            r#"{"session_id":"s1","speaker":"c1","words":"w0"}"#,
            r#"{"session_id":"s1","speaker":"c2","words":"w1"}"#,
        ],
    );
    let output = run(&[
        "score",
        "orcwer",
        "--method",
        "brute-force",
        "--ref",
        refs.to_str().unwrap(),
        "--hyp",
        hyps.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn bench_writes_csv_contract() {
    let dir = workdir("bench_csv");
    let out = dir.join("bench.csv");
    let output = run(&[
        "bench",
        "--grid",
        "K=2;C=2;U=2,4;W=3;V=10;seeds=0",
        "--reps",
        "2",
        "--methods",
        "orc-dp,cpwer",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {:?}", output.stderr);
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "method,K,C,U,W,seed,seconds");
    // 2 grid points x 2 methods.
    assert_eq!(lines.len(), 5);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert!(fields[6].parse::<f64>().is_ok(), "row: {row}");
    }
}
