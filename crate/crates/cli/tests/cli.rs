use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE: &str = "5 4 5 3 1 2 6 3 1\n";

fn mmenc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmenc")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Builds an index of `text` and returns its path.
fn index(dir: &TempDir, text: &str) -> PathBuf {
    let input = write(dir, "in.txt", text);
    let out = dir.path().join("a.idx");
    let o = mmenc(&["build", s(&input), s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn query(idx: &Path, q: &[&str]) -> Output {
    let mut args = vec!["query", s(idx)];
    args.extend_from_slice(q);
    mmenc(&args)
}

fn answer(idx: &Path, q: &str) -> usize {
    let parts: Vec<&str> = q.split_whitespace().collect();
    let o = query(idx, &parts);
    assert_eq!(code(&o), 0, "{q}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).trim().parse().unwrap()
}

#[test]
fn build_report_matches_golden_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.txt", EXAMPLE);
    let out = dir.path().join("example.idx");
    let o = mmenc(&["--format", "json", "build", s(&input), s(&out)]);
    assert_eq!(code(&o), 0);
    let got = stdout(&o);
    let want = include_str!("golden/build_example.jsonl");
    assert_eq!(got, want);
    for line in got.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 4, "{line}");
        for k in ["cmd", "n", "metric", "value"] {
            assert!(v.get(k).is_some(), "{line} lacks {k}");
        }
    }
}

#[test]
fn core_bits_within_bound_for_example() {
    let want: Vec<Value> =
        include_str!("golden/build_example.jsonl").lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let metric = |m: &str| want.iter().find(|r| r["metric"] == m).unwrap()["value"].as_f64().unwrap();
    // 3.585 n plus three lengths of ceil(lg(2n + 3)) bits
    assert!(metric("core_bits") <= 3.585 * 9.0 + 3.0 * 5.0);
    assert_eq!(metric("bits.U"), 8.0);
}

#[test]
fn queries_on_example() {
    let dir = TempDir::new().unwrap();
    let idx = index(&dir, EXAMPLE);
    assert_eq!(answer(&idx, "nsv 4"), 5);
    assert_eq!(answer(&idx, "rmin 3 3"), 3);
    assert_eq!(answer(&idx, "rminq 1 9 3"), 9);
    assert_eq!(answer(&idx, "rmax 1 9"), 7);
    // sentinels are printed, not reported as errors
    assert_eq!(answer(&idx, "nsv 9"), 10);
    assert_eq!(answer(&idx, "psv 1"), 0);
    assert_eq!(answer(&idx, "plv 7"), 0);
}

#[test]
fn json_query_record() {
    let dir = TempDir::new().unwrap();
    let idx = index(&dir, EXAMPLE);
    let o = mmenc(&["--format", "json", "query", s(&idx), "nsv", "4"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["cmd"], "query");
    assert_eq!(v["n"], 9);
    assert_eq!(v["metric"], "nsv");
    assert_eq!(v["value"], 5);
}

#[test]
fn single_element_array() {
    let dir = TempDir::new().unwrap();
    let idx = index(&dir, "42\n");
    assert_eq!(answer(&idx, "rmin 1 1"), 1);
    assert_eq!(answer(&idx, "rmaxq 1 1 3"), 1);
    assert_eq!(answer(&idx, "nlv 1"), 2);
    assert_eq!(answer(&idx, "psv 1"), 0);
}

#[test]
fn general_array_sets_flag() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", "7 7 2 2 2 9");
    let out = dir.path().join("g.idx");
    let o = mmenc(&["--format", "json", "build", s(&input), s(&out)]);
    assert_eq!(code(&o), 0);
    let recs: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let get = |m: &str| recs.iter().find(|r| r["metric"] == m).map(|r| r["value"].clone());
    assert_eq!(get("flag"), Some(Value::from("general")));
    assert_eq!(get("reduced_n"), Some(Value::from(3)));
    assert!(get("bits.C").is_some());
    assert_eq!(answer(&out, "rminq 1 6 2"), 4);
    assert_eq!(answer(&out, "nsv 1"), 3);
    assert_eq!(answer(&out, "psv 4"), 0);
}

#[test]
fn usage_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let idx = index(&dir, EXAMPLE);
    for q in [&["foo", "1"][..], &["rmin", "3"], &["rmin", "5", "2"], &["nsv", "10"], &["rminq", "1", "2", "0"]] {
        assert_eq!(code(&query(&idx, q)), 1, "{q:?}");
    }
    assert_eq!(code(&mmenc(&["bogus"])), 1);
    assert_eq!(code(&mmenc(&["--levels", "5", "query", s(&idx), "nsv", "1"])), 1);
    assert_eq!(code(&mmenc(&["--block-size", "100", "build", "x", "y"])), 1);
    assert_eq!(code(&mmenc(&["--help"])), 0);
}

#[test]
fn data_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.idx");
    assert_eq!(code(&query(&missing, &["nsv", "1"])), 2);
    let junk = write(&dir, "junk.idx", "not an index");
    assert_eq!(code(&query(&junk, &["nsv", "1"])), 2);
    let bad = write(&dir, "bad.txt", "1 2 x 4");
    assert_eq!(code(&mmenc(&["build", s(&bad), s(&dir.path().join("o.idx"))])), 2);
    let empty = write(&dir, "empty.txt", "");
    assert_eq!(code(&mmenc(&["build", s(&empty), s(&dir.path().join("o.idx"))])), 2);
    let o = mmenc(&["bench", "--n", "1000000", "--cap-bytes", "1000"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn decode_block_prints_parentheses() {
    let dir = TempDir::new().unwrap();
    let idx = index(&dir, EXAMPLE);
    let o = mmenc(&["decode-block", s(&idx), "min", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("00100110100010111011"));
}

#[test]
fn selftest_passes_and_catches_mutation() {
    let o = mmenc(&["selftest", "--scope", "exhaustive", "--max-len", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&mmenc(&["selftest", "--scope", "random", "--seed", "42"])), 0);
    let m = mmenc(&["selftest", "--scope", "exhaustive", "--max-len", "5", "--mutate-e"]);
    assert_eq!(code(&m), 3);
    let err = String::from_utf8_lossy(&m.stderr);
    assert!(err.contains("selftest failed") && err.contains('['), "{err}");
}

#[test]
fn random_selftest_is_deterministic() {
    let a = mmenc(&["--format", "json", "selftest", "--scope", "random", "--seed", "7"]);
    let b = mmenc(&["--format", "json", "selftest", "--scope", "random", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lab_commands() {
    let o = mmenc(&["--format", "json", "baxter", "--max-m", "5"]);
    let counts: Vec<u64> =
        stdout(&o).lines().map(|l| serde_json::from_str::<Value>(l).unwrap()["value"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![1, 2, 6, 22, 92]);
    let o = mmenc(&["--format", "json", "class", "4"]);
    let recs: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs[0]["value"], recs[1]["value"]);
    assert_eq!(code(&mmenc(&["reconstruct", "5"])), 0);
    assert_eq!(code(&mmenc(&["reconstruct", "7", "--sample", "50"])), 0);
    assert_eq!(code(&mmenc(&["class", "12"])), 1);
}

#[test]
fn small_bench_runs() {
    let o = mmenc(&["--format", "json", "bench", "--n", "1000", "--queries", "100"]);
    assert_eq!(code(&o), 0);
    let recs: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(recs.iter().any(|r| r["metric"] == "latency_ns.rminq.p99"));
    assert!(recs.iter().any(|r| r["metric"] == "scan.min.max_jumps"));
}
