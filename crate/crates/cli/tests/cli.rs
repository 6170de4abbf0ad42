use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mchabauty::fibre::FibreReport;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mchabauty"))
        .args(args)
        .env("MCHABAUTY_DATA_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn sunit_two_counts_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["sunit", "--primes", "2", "--offline"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("count: 3"), "{}", stdout(&o));
}

#[test]
fn sunit_json_lists_solutions_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["sunit", "--primes", "2", "--format", "json", "--list", "--offline"]);
    assert_eq!(code(&o), 0);
    let report = FibreReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.count, 3);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ts: Vec<&str> = v["solutions"].as_array().unwrap().iter().map(|s| s["t"].as_str().unwrap()).collect();
    assert_eq!(ts, vec!["-1", "1/2", "2"]);
    assert_eq!(v["j_invariants"], serde_json::json!(["1728"]));
    assert_eq!(v["problem"], "sunit");
    assert_eq!(FibreReport::from_json(&report.to_json()).unwrap(), report);
}

#[test]
fn identical_runs_match_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sunit", "--primes", "2,3", "--format", "json", "--list", "--offline"];
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v["elapsed_sec"] = serde_json::Value::Null;
        v
    };
    assert_eq!(strip(&run(dir.path(), &args)), strip(&run(dir.path(), &args)));
}

#[test]
fn level_outside_range_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["y1", "--level", "11", "--primes", "11"])), 1);
    assert_eq!(code(&run(dir.path(), &["y1", "--level", "10", "--primes", "2,3"])), 1);
    assert_eq!(code(&run(dir.path(), &["sunit", "--primes", "2,4"])), 1);
    assert_eq!(code(&run(dir.path(), &["solve", "--problem", "x0", "--primes", "2"])), 1);
    assert_eq!(code(&run(dir.path(), &["frobnicate"])), 1);
}

#[test]
fn coverage_shortfall_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["sunit", "--primes", "2,3,5,7", "--offline"]);
    assert_eq!(code(&o), 2, "{o:?}");
}

#[test]
fn allow_partial_runs_past_the_gate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["sunit", "--primes", "2,3,7", "--offline", "--allow-partial"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("lower bounds"));
}

#[test]
fn domain_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["isogeny", "--curve", "0,1", "--point", "-1,0", "--degree", "3"]);
    assert_eq!(code(&o), 3, "{o:?}");
}

#[test]
fn bound_and_divpoly() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["bound", "--level", "4", "--primes", "2"]);
    assert_eq!(stdout(&o), "384\n");
    let o = run(dir.path(), &["divpoly", "--curve", "0,1", "--n", "3"]);
    assert_eq!(stdout(&o), "3*x^4 + 12*x\n");
    let o = run(dir.path(), &["divpoly", "--curve", "-1,0", "--n", "2"]);
    assert_eq!(stdout(&o), "y*(2)\n");
}

#[test]
fn isogeny_quotient() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["isogeny", "--curve", "0,1", "--point", "0,1", "--degree", "3"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).starts_with("[0,0,0,0,-27]"), "{}", stdout(&o));
    let o = run(dir.path(), &["isogeny", "--curve", "0,-1,1,0,0", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("-122023936/161051"));
}

#[test]
fn curves_csv_conductors_divide_ns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["curves", "--primes", "2", "--format", "csv", "--offline"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut conductors: Vec<u64> = out.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(!conductors.is_empty());
    conductors.dedup();
    // N({2}) = 32, so conductors 64, 128 and 256 are left out
    assert_eq!(conductors, vec![32]);
}

#[test]
fn solve_registry() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["solve", "--problems"]);
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(names, vec!["sunit", "sunit-level2", "y1"]);
    let o = run(dir.path(), &["solve", "--problem", "sunit-level2", "--primes", "2,3", "--offline"]);
    assert!(stdout(&o).contains("count: 21"), "{}", stdout(&o));
    let o = run(dir.path(), &["solve", "--problem", "y1", "--level", "9", "--primes", "2,3", "--offline"]);
    assert!(stdout(&o).contains("count: 6"), "{}", stdout(&o));
}

#[test]
fn fetch_cold_cache_offline_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["fetch", "--range", "1..100", "--offline"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn fetch_unreachable_url_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["fetch", "--range", "1..100", "--url", "http://127.0.0.1:9/none"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("network"), "{o:?}");
}

#[test]
fn warm_cache_offline_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("allcurves.00000-09999");
    fs::write(&file, "11 a 1 [0,-1,1,-10,-20] 0 5\n").unwrap();
    let o = run(dir.path(), &["fetch", "--range", "1..100", "--offline"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("1 records"), "{}", stdout(&o));
    assert!(dir.path().join("manifest.json").exists());
    fs::write(&file, "11 a 1 [0,-1,1,0,0] 0 5\n").unwrap();
    let o = run(dir.path(), &["fetch", "--range", "1..100", "--offline"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("digest mismatch"), "{o:?}");
}
