use std::path::Path;
use std::process::{Command, Output};

const WHITEHEAD: &str =
    "TQ^-1 + T^2Q^-3 + A(T^-1Q^-1 + Q^-3 + Q^-3/(1-Q^2) + TQ^-5 + T^2Q^-7) + A^2(T^-1Q^-5 + Q^-7/(1-Q^2))";

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soergel"))
        .args(args)
        .env("SOERGEL_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn whitehead_series_and_euler_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["hhh", "s^-2 t s^-1 t", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(WHITEHEAD));
    assert!(lines.next().unwrap().starts_with("euler check: pass"));
}

#[test]
fn numeric_braid_grammar_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["hhh", "-1 -1 2 -1 2", "--m", "3", "--json"]);
    let b = run(dir.path(), &["hhh", "s^-2 t s^-1 t", "--m", "3", "--json"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn strand_filter() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["hhh", "s^-2 t s^-1 t", "--m", "3", "--strand", "2"]);
    assert_eq!(stdout(&o).trim(), "A^2(T^-1Q^-5 + Q^-7/(1-Q^2))");
}

#[test]
fn unknot_passes_euler_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["hhh", "s", "--m", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["euler_check"]["pass"], true);
    assert_eq!(v["experimental"], false);
}

#[test]
fn non_type_a_is_labeled() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["hhh", "s t s t", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("experimental"));
    let o = run(dir.path(), &["hhh", "s t s t", "--m", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["experimental"], true);
    assert!(v["euler_check"].is_null());
}

#[test]
fn json_is_byte_identical_and_cache_is_transparent() {
    let warm = tempfile::tempdir().unwrap();
    let args = ["serre-check", "--m", "3", "--suite", "relative", "--json", "--seed", "7"];
    let first = run(warm.path(), &args);
    let second = run(warm.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    for args in [&["hhh", "s t s^-1 t", "--m", "3", "--json"][..], &["minimal", "s t s t", "--m", "4", "--json"][..]] {
        let cold_dir = tempfile::tempdir().unwrap();
        let cold = run(cold_dir.path(), args);
        let populated = run(warm.path(), args);
        let hit = run(warm.path(), args);
        assert_eq!(cold.stdout, populated.stdout);
        assert_eq!(cold.stdout, hit.stdout);
    }
    // Entries are sharded by the first two hex digits of their key.
    let shards: Vec<_> = std::fs::read_dir(warm.path()).unwrap().collect();
    assert!(!shards.is_empty());
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["minimal", "s t", "--m", "3"];
    let good = stdout(&run(dir.path(), &args));
    for shard in std::fs::read_dir(dir.path()).unwrap() {
        for f in std::fs::read_dir(shard.unwrap().path()).unwrap() {
            std::fs::write(f.unwrap().path(), "{ not json").unwrap();
        }
    }
    assert_eq!(stdout(&run(dir.path(), &args)), good);
}

#[test]
fn minimal_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["minimal", "s t", "--m", "3"]);
    assert_eq!(stdout(&o).trim(), "[B_st] → B_s(1) ⊕ B_t(1) @1 → R(2) @2");
    let o = run(dir.path(), &["trace", "s t", "--m", "3", "--functor", "pi_s_plus"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = run(dir.path(), &["trace", "t s^-1 t", "--m", "3", "--functor", "pi_t_minus", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["functor"], "pi_t_minus");
    assert!(v["complex"]["terms"].is_array());
}

#[test]
fn homfly_of_whitehead() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["homfly", "s^-2 t s^-1 t", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut terms: Vec<(i64, i64, i64)> =
        v["terms"].as_array().unwrap().iter().map(|t| (t[0].as_i64().unwrap(), t[1].as_i64().unwrap(), t[2].as_i64().unwrap())).collect();
    terms.sort();
    // 1/(vz) − v/z − z/v³ + 2z/v − vz + z³/v
    let mut want = vec![(-1, -1, 1), (1, -1, -1), (-3, 1, -1), (-1, 1, 2), (1, 1, -1), (-1, 3, 1)];
    want.sort();
    assert_eq!(terms, want);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["serre-check", "--m", "3", "--suite", "vanishing"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["serre-check", "--m", "3", "--suite", "pift"]).status.code(), Some(0));
    // Two vanishing statements fail at m = 2.
    let o = run(dir.path(), &["serre-check", "--m", "2", "--suite", "vanishing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
    let o = run(dir.path(), &["hhh", "s u", "--m", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 2"));
    assert_eq!(run(dir.path(), &["hhh", "s", "--m", "1"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(1));
}
