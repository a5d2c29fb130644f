use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const P2: &str = "FAN 2 3 3\n1 0\n0 1\n-1 -1\n0 1\n1 2\n0 2\n";
const P2_MISSING_CONE: &str = "FAN 2 3 2\n1 0\n0 1\n-1 -1\n0 1\n1 2\n";
const P3: &str = "FAN 3 4 4\n1 0 0\n0 1 0\n0 0 1\n-1 -1 -1\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n";
const F2: &str = "FAN 2 4 4\n1 0\n0 1\n-1 2\n0 -1\n0 1\n1 2\n2 3\n0 3\n";
const BLOWUP_P2: &str = "FAN 2 4 4\n1 0\n0 1\n-1 -1\n1 1\n0 3\n1 3\n1 2\n0 2\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-fano")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn corpus_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    dir
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "p2.fan", P2);
    assert_eq!(code(&run(&["validate", &good])), 0);

    let bad = write(dir.path(), "bad.fan", P2_MISSING_CONE);
    let out = run(&["validate", &bad]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("completeness"));
    assert!(stdout(&out).contains("FAIL"));

    let missing = dir.path().join("nope.fan");
    assert_eq!(code(&run(&["validate", missing.to_str().unwrap()])), 2);
    let garbage = write(dir.path(), "garbage.fan", "FAN 2 3 3\n1 0 7\n");
    assert_eq!(code(&run(&["validate", &garbage])), 2);
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(code(&run(&["--no-such-flag", "bounds", "4", "2"])), 2);
    assert_eq!(code(&run(&["bounds", "4", "2", "--format", "xml"])), 2);
}

#[test]
fn invariants_of_projective_space() {
    let dir = TempDir::new().unwrap();
    let p3 = write(dir.path(), "p3.fan", P3);
    let out = run(&["invariants", &p3, "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["rho"], 1);
    assert_eq!(v["iota"], 4);
    assert_eq!(v["f_vector"], serde_json::json!([1, 4, 6, 4]));
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 1);
    assert_eq!((rels[0]["order"].as_i64(), rels[0]["degree"].as_i64()), (Some(4), Some(4)));
}

#[test]
fn invariants_of_cube_variety_and_non_fano() {
    let corpus = corpus_dir();
    let cube = corpus.path().join("p1xp1xp1.fan");
    let v = json(&run(&["invariants", cube.to_str().unwrap(), "--format", "json"]));
    assert_eq!((v["rho"].as_i64(), v["iota"].as_i64()), (Some(3), Some(2)));
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 3);
    assert!(rels.iter().all(|r| r["targets"].as_array().unwrap().is_empty()));

    let dir = TempDir::new().unwrap();
    let f2 = write(dir.path(), "f2.fan", F2);
    let out = run(&["invariants", &f2, "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["fano"], false);
    assert!(v["iota"].is_null());
    assert!(v["mukai"].is_null());
}

#[test]
fn mukai_verdicts() {
    let corpus = corpus_dir();
    let p2p2 = corpus.path().join("p2xp2.fan");
    let out = run(&["mukai", p2p2.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["inequality_lhs"], 4);
    assert_eq!(v["equality_case"]["kind"], "ProductOfProjectiveSpaces");
    assert_eq!(v["equality_case"]["factors"], serde_json::json!([2, 2]));

    let p6 = corpus.path().join("p6.fan");
    let v = json(&run(&["mukai", p6.to_str().unwrap(), "--format", "json"]));
    assert_eq!((v["picard_rho"].as_i64(), v["pseudo_index_iota"].as_i64()), (Some(1), Some(7)));
    assert_eq!(v["equality_case"]["factors"], serde_json::json!([6]));

    let dir = TempDir::new().unwrap();
    let b = write(dir.path(), "b.fan", BLOWUP_P2);
    let out = run(&["mukai", &b]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("strict"));

    let f2 = write(dir.path(), "f2.fan", F2);
    assert_eq!(code(&run(&["mukai", &f2])), 2);
}

#[test]
fn bounds_rows() {
    let out = run(&["bounds", "7", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "n=7 iota=3 rho_bound=2 mukai_bound=3 suffices=true\n");
    let v = json(&run(&["bounds", "8", "3", "--format", "json"]));
    assert_eq!((v["rho_bound"].as_i64(), v["mukai_bound"].as_i64()), (Some(3), Some(4)));
    assert_eq!(v["suffices"], true);
    assert_eq!(code(&run(&["bounds", "4", "4"])), 2);
}

#[test]
fn polytope_input() {
    let dir = TempDir::new().unwrap();
    let sq = write(dir.path(), "square.poly", "POLY 2 4\n1 0\n0 1\n-1 0\n0 -1\n");
    let v = json(&run(&["invariants", &sq, "--format", "json"]));
    assert_eq!((v["rho"].as_i64(), v["iota"].as_i64()), (Some(2), Some(2)));
    let off = write(dir.path(), "off.poly", "POLY 2 4\n0 0\n1 0\n1 1\n0 1\n");
    assert_eq!(code(&run(&["invariants", &off])), 2);
}

#[test]
fn batch_over_corpus() {
    let corpus = corpus_dir();
    let report = corpus.path().join("report.json");
    let out = run(&["batch", corpus.path().to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("failed=0"));
    assert!(text.contains("p1xp1xp1xp1.fan"));

    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let files: Vec<&str> =
        v["entries"].as_array().unwrap().iter().map(|e| e["file"].as_str().unwrap()).collect();
    let mut sorted = files.clone();
    sorted.sort();
    assert_eq!(files, sorted);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["summary"]["total"].as_u64().unwrap() as usize, files.len());
}

#[test]
fn batch_is_deterministic_across_worker_counts() {
    let corpus = corpus_dir();
    let dir = corpus.path().to_str().unwrap();
    let a = run(&["batch", dir, "--format", "json", "--workers", "1"]);
    let b = run(&["batch", dir, "--format", "json", "--workers", "4"]);
    let c = run(&["batch", dir, "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn batch_records_corrupt_files() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.fan", P2);
    write(dir.path(), "b.fan", "FAN 2 3 3\nnot numbers\n");
    write(dir.path(), "c.fan", P3);
    write(dir.path(), "notes.txt", "ignored");
    let out = run(&["batch", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let entries = v["entries"].as_array().unwrap();
    let files: Vec<&str> = entries.iter().map(|e| e["file"].as_str().unwrap()).collect();
    assert_eq!(files, ["a.fan", "b.fan", "c.fan"]);
    assert_eq!(entries[1]["status"], "input_error");
    assert!(entries[1]["error"].as_str().unwrap().contains("line 2"));
    assert_eq!(entries[0]["report"]["rho"], 1);
    assert_eq!(v["summary"]["input_errors"], 1);
    assert_eq!(v["summary"]["passed"], 2);
}

#[test]
fn batch_edge_cases() {
    let empty = TempDir::new().unwrap();
    let out = run(&["batch", empty.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("total=0"));

    let missing = empty.path().join("absent");
    assert_eq!(code(&run(&["batch", missing.to_str().unwrap()])), 2);
}
