use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use conic_floors_cli::query::QuerySpec;
use serde_json::Value;

fn provider() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/tx81_2c1.table").display().to_string()
}

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conic-floors"));
    cmd.args(args).env_remove("CONIC_FLOORS_CACHE");
    if let Some(path) = cache {
        cmd.env("CONIC_FLOORS_CACHE", path);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str], cache: Option<&Path>) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all, cache);
    assert!(out.status.success(), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).unwrap()
}

const REL_616: [&str; 9] = ["gw-rel", "--n", "6", "--class", "4:1,1,1,1,1,1", "--genus", "0", "--beta", "1^2"];
const X6_1000: [&str; 7] = ["w-x6", "--structure", "kappa=0", "--class", "6:2,2,2,2,2,2", "--s", "0"];

#[test]
fn documented_examples() {
    assert_eq!(stdout(&run(&REL_616, None)), "616\n");
    assert_eq!(stdout(&run(&X6_1000, None)), "1000\n");
    let p = provider();
    let out = run(&["gw-x8", "--class", "6:2,2,2,2,2,2,2,2", "--genus", "0", "--provider", &p], None);
    assert_eq!(stdout(&out), "90\n", "{}", stderr(&out));
}

#[test]
fn exit_codes_and_one_line_errors() {
    let cases: [(&[&str], i32, &str); 6] = [
        (&["gw-rel", "--n", "6", "--class", "4:x"], 2, "error[parse]"),
        (&["gw-rel", "--class", "4:1", "--bogus"], 2, "error[parse]"),
        (&["gw-x6", "--class", "6:2,2,2,2,2,2", "--format", "dot"], 2, "error[parse]"),
        (&["gw-x7", "--class", "2:1,1,1,1,1,1,1", "--s", "1"], 2, "error[parse]"),
        (&["gw-x8", "--class", "6:2,2,2,2,2,2,2,2"], 4, "error[missing-provider-keys]"),
        (&["gw-x8", "--class", "1:0,0,0,0,0,0,0,0", "--provider", "/nonexistent/table"], 3, "error[io]"),
    ];
    for (args, code, prefix) in cases {
        let out = run(args, None);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", stderr(&out));
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with(prefix), "{err}");
    }
}

#[test]
fn missing_provider_keys_are_listed() {
    let out = run(&["gw-x8", "--class", "6:2,2,2,2,2,2,2,2"], None);
    let err = stderr(&out);
    let keys: Vec<String> = serde_json::from_str(err.trim().trim_start_matches("error[missing-provider-keys]: ")).unwrap();
    assert_eq!(keys.len(), 2);
    assert!(keys.iter().all(|k| k.starts_with("tX81 ")), "{keys:?}");
}

#[test]
fn domain_errors_exit_with_three() {
    for args in [
        ["w-x6", "--class", "6:2,2,2,2,2,2", "--structure", "kappa=4", "--s", "0"],
        ["w-x6", "--class", "6:2,2,2,2,2,2", "--structure", "kappa=1", "--s", "9"],
        ["gw-x7", "--class", "0:2,0,0,0,0,0,0", "--genus", "0", "--stats", "--terms"],
    ] {
        let out = run(&args, None);
        assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
        assert!(stderr(&out).starts_with("error[domain]"), "{}", stderr(&out));
        assert!(stderr(&out).is_ascii());
    }
}

#[test]
fn json_schema_and_term_sums() {
    let p = provider();
    let queries: Vec<Vec<&str>> = vec![
        REL_616.to_vec(),
        X6_1000.to_vec(),
        vec!["fw", "--n", "2", "--kappa", "1", "--class", "3:1,1", "--s", "1", "--beta-re", "1^2", "--beta-im", "1^1"],
        vec!["gw-x7", "--class", "6:2,2,2,2,2,2,2"],
        vec!["w-x7", "--class", "6:2,2,2,2,2,2,2", "--structure", "minus-rp2"],
        vec!["gw-x8", "--class", "6:2,2,2,2,2,2,2,2", "--provider", &p],
        vec!["diagrams", "--n", "6", "--class", "4:1,1,1,1,1,1", "--beta", "1^2"],
    ];
    for q in queries {
        let mut args = q.clone();
        args.extend(["--terms", "--stats"]);
        let doc = json(&args, None);
        let obj = doc.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["query", "stats", "terms", "value"], "{q:?}");
        let value = doc["value"].as_i64().unwrap();
        let sum: i64 = doc["terms"].as_array().unwrap().iter().map(|t| t["value"].as_i64().unwrap()).sum();
        assert_eq!(sum, value, "{q:?}");
        for t in doc["terms"].as_array().unwrap() {
            assert!(t["label"].is_string());
        }
        for k in ["diagrams", "markings", "cache_hits"] {
            assert!(doc["stats"][k].is_u64(), "{q:?}");
        }
        // The query string is the canonical form and parses back to itself.
        let text = doc["query"].as_str().unwrap();
        assert_eq!(QuerySpec::parse(text).unwrap().to_string(), text);
        // Output is deterministic.
        assert_eq!(json(&args, None), doc);
    }
    let plain = json(&REL_616, None);
    assert!(plain.get("terms").is_none() && plain.get("stats").is_none());
    assert_eq!(plain["value"], 616);
}

#[test]
fn equivalent_spellings_share_a_canonical_query() {
    let a = json(&["w-x7", "--class", "6:2,2,2,2,2,2,2", "--structure", "kappa", "--kappa", "2"], None);
    let b = json(&["w-x7", "--class", "6:2,2,2,2,2,2,2", "--structure", "kappa=2", "--s", "0"], None);
    assert_eq!(a, b);
    let c = json(&["gw-rel", "--n", "6", "--class", "4:1,1,1,1,1,1", "--beta", "1^1,1^1", "--alpha", "0"], None);
    assert_eq!(c, json(&REL_616, None));
}

#[test]
fn csv_rows_are_quoted() {
    let out = run(&["gw-rel", "--n", "6", "--class", "4:1,1,1,1,1,1", "--beta", "1^2", "--terms", "--format", "csv"], None);
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["kind", "label", "value"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(&rows[0][0], "total");
    assert_eq!(&rows[0][2], "616");
    assert!(text.lines().nth(1).unwrap().starts_with("total,\"gw-rel n=6 class=4:1,1,1,1,1,1"));
    let sum: i64 = rows[1..].iter().map(|r| r[2].parse::<i64>().unwrap()).sum();
    assert_eq!(sum, 616);
}

#[test]
fn output_uses_ascii_only() {
    let p = provider();
    for args in [
        vec!["w-x7", "--class", "6:2,2,2,2,2,2,2", "--structure", "plus-total=1", "--s", "1", "--terms"],
        vec!["w-x8", "--class", "6:2,2,2,2,2,2,2,2", "--structure", "minus-l=1", "--provider", &p, "--terms"],
        vec!["gw-x8", "--class", "6:2,2,2,2,2,2,2,2", "--provider", &p, "--terms"],
        vec!["w-x6", "--class", "2:1,1,1,1,0,0", "--structure", "kappa=2", "--terms"],
    ] {
        let out = run(&args, None);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(stdout(&out).is_ascii(), "{}", stdout(&out));
    }
    let out = run(&["gw-x6", "--class", "1:3,0,0,0,0"], None);
    assert!(stderr(&out).is_ascii());
}

#[test]
fn dot_drawings() {
    let out = run(&["diagrams", "--n", "6", "--class", "4:1,1,1,1,1,1", "--beta", "1^2", "--format", "dot"], None);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("digraph").count(), 7);
    assert!(text.contains("shape=ellipse"));
    assert!(text.contains("deg=2") && text.contains("deg=1"));
    assert!(text.contains("label=\"2\"") && text.contains("label=\"4\""));
    let marked = run(&["diagrams", "--n", "2", "--class", "2:1,1", "--beta", "1^2", "--format", "dot", "--terms"], None);
    assert_eq!(stdout(&marked).matches("digraph").count(), 1);
}

fn cache_file(dir: &tempfile::TempDir) -> PathBuf {
    dir.path().join("memo.json")
}

#[test]
fn second_run_is_served_from_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_file(&dir);
    let args = ["w-x6", "--structure", "kappa=1", "--class", "6:2,2,2,2,2,2", "--stats"];
    let first = json(&args, Some(&cache));
    assert!(first["stats"]["diagrams"].as_u64().unwrap() > 0);
    let second = json(&args, Some(&cache));
    assert_eq!(second["value"], first["value"]);
    assert_eq!(second["stats"]["diagrams"], 0);
    assert_eq!(second["stats"]["markings"], 0);
    // A related query reuses the stored relative invariants.
    let other = json(&["w-x6", "--structure", "kappa=0", "--class", "6:2,2,2,2,2,2", "--stats"], Some(&cache));
    assert_eq!(other["value"], 1000);
    assert!(other["stats"]["cache_hits"].as_u64().unwrap() > 0);
    // The explicit flag wins over the environment.
    let explicit = dir.path().join("other.json");
    let out = run(&["gw-x6", "--class", "6:2,2,2,2,2,2", "--cache", explicit.to_str().unwrap()], Some(&cache));
    assert!(out.status.success());
    assert!(explicit.exists());
}

#[test]
fn tampering_is_detected_only_when_verifying() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_file(&dir);
    let args = ["w-x6", "--structure", "kappa=1", "--class", "6:2,2,2,2,2,2"];
    assert_eq!(stdout(&run(&args, Some(&cache))), "522\n");
    let mut doc: serde_json::Map<String, Value> = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    let key = doc.keys().find(|k| k.starts_with("query:")).unwrap().clone();
    doc.insert(key, Value::from(523));
    std::fs::write(&cache, serde_json::to_string(&doc).unwrap()).unwrap();

    let trusted = run(&args, Some(&cache));
    assert_eq!(stdout(&trusted), "523\n");
    assert!(trusted.status.success());

    let mut verify = args.to_vec();
    verify.push("--verify");
    let checked = run(&verify, Some(&cache));
    assert_eq!(checked.status.code(), Some(3));
    assert_eq!(stdout(&checked), "522\n");
    assert!(stderr(&checked).starts_with("error[cache-mismatch]"), "{}", stderr(&checked));
    // The recomputed value replaced the tampered one.
    let again = run(&verify, Some(&cache));
    assert!(again.status.success(), "{}", stderr(&again));
    assert_eq!(stdout(&run(&args, Some(&cache))), "522\n");
}

#[test]
fn corrupt_cache_is_ignored_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_file(&dir);
    std::fs::write(&cache, "{ not json").unwrap();
    let out = run(&REL_616, Some(&cache));
    assert!(out.status.success());
    assert_eq!(stdout(&out), "616\n");
    assert!(stderr(&out).starts_with("warning:"));
    let repaired: serde_json::Map<String, Value> = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert!(repaired.keys().any(|k| k.starts_with("query:gw-rel")));
}

#[test]
fn concurrent_runs_leave_a_valid_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_file(&dir);
    let handles: Vec<_> = ["kappa=0", "kappa=1", "kappa=2", "kappa=3"]
        .into_iter()
        .map(|st| {
            let cache = cache.clone();
            std::thread::spawn(move || run(&["w-x6", "--structure", st, "--class", "6:2,2,2,2,2,2"], Some(&cache)))
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap().status.success());
    }
    let doc: serde_json::Map<String, Value> = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(doc.keys().filter(|k| k.starts_with("query:")).count(), 4);
}
