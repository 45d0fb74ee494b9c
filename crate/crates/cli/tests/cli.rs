use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bsp(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsp")).args(args).env("BSP_CACHE_DIR", cache).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn schubert_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = bsp(dir.path(), &["schubert", "-w", "[1,0]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "c[1]");
    let o = bsp(dir.path(), &["schubert", "-w", "[1,2]"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn coprod_certify_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = bsp(dir.path(), &["coprod", "-w", "[3,1,2]", "--theory", "K", "--trunc", "4", "--certify", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let certs = v["certificates"].as_array().unwrap();
    assert!(!certs.is_empty());
    assert!(certs.iter().all(|c| c["certificate"]["status"] == "certified"));

    let text = stdout(&bsp(dir.path(), &["coprod", "-w", "[3,1,2]", "--theory", "K", "--trunc", "4", "--certify"]));
    let row = text.lines().find(|l| l.starts_with("(2) e:")).unwrap();
    assert!(row.starts_with("(2) e: 1 - b*z[1] + b*z[2]"), "{row}");
    assert!(row.ends_with("[certified]"));
    assert!(text.contains("all rows certified"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bsp(dir.path(), &["schubert", "-w", "[1,1]"]).status.code(), Some(1));
    assert_eq!(bsp(dir.path(), &["coprod", "-w", "[2,1,0,-1]", "--window", "1"]).status.code(), Some(1));
    assert_eq!(bsp(dir.path(), &["schubert"]).status.code(), Some(2));
    assert_eq!(bsp(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(bsp(dir.path(), &["coprod", "-w", "[1,0]", "--theory", "Q"]).status.code(), Some(2));
    assert_eq!(bsp(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn cached_and_fresh_results_agree() {
    let dir = tempfile::tempdir().unwrap();
    let ws = ["-w", "[2,0,1]", "-w", "[0,-1,2,1]", "-w", "[1,2,-1,0]"];
    let commands: Vec<Vec<&str>> = vec![
        ["schubert", "--json"].iter().chain(&ws).copied().collect(),
        ["groth", "--trunc", "3", "--json"].iter().chain(&ws).copied().collect(),
        ["coprod", "--theory", "H", "--json"].iter().chain(&ws).copied().collect(),
        ["coprod", "--theory", "K", "--trunc", "3", "--json"].iter().chain(&ws).copied().collect(),
        ["certify", "--theory", "K", "--trunc", "3"].iter().chain(&ws).copied().collect(),
    ];
    for args in &commands {
        let fresh = bsp(dir.path(), &[&["--no-cache"], &args[..]].concat());
        let cold = bsp(dir.path(), args);
        let warm = bsp(dir.path(), args);
        assert_eq!(fresh.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&fresh), stdout(&cold), "{args:?}");
        assert_eq!(stdout(&fresh), stdout(&warm), "{args:?}");
    }
    assert!(fs::read_dir(dir.path()).unwrap().count() >= 12);
}

#[test]
fn corrupted_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["groth", "-w", "[0,-1,2,1]", "--trunc", "3"];
    let first = stdout(&bsp(dir.path(), &args));
    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        v["payload"] = Value::String("{\"trunc\":3,\"terms\":[]}".into());
        fs::write(&path, v.to_string()).unwrap();
    }
    assert_eq!(stdout(&bsp(dir.path(), &args)), first);
    let stats = stdout(&bsp(dir.path(), &["cache", "stats"]));
    assert!(stats.contains("1 entries (1 intact)"), "{stats}");
    let cleared = stdout(&bsp(dir.path(), &["cache", "clear"]));
    assert!(cleared.contains("removed 1"));
}

#[test]
fn oracle_suites() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["operators", "windows", "examples"] {
        let o = bsp(dir.path(), &["oracle", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    }
    let o = bsp(dir.path(), &["oracle", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_cohomology_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = bsp(dir.path(), &["certify", "-w", "[1,0]", "--theory", "H", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificates"][0]["certificate"]["status"], "certified");
}
