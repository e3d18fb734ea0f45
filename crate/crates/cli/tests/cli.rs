//! End-to-end runs of the `sobext` binary.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn out_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("sobext-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

/// Runs the binary; returns exit code and parsed stdout.
fn run(name: &str, args: &[&str]) -> (i32, Value, PathBuf) {
    let dir = out_dir(name);
    let o = Command::new(env!("CARGO_BIN_EXE_sobext"))
        .arg("--out")
        .arg(&dir)
        .arg("--deterministic")
        .args(args)
        .output()
        .unwrap();
    let text = String::from_utf8(o.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or(Value::Null);
    (o.status.code().unwrap(), v, dir)
}

fn verdicts(v: &Value) -> Vec<(String, bool)> {
    v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| (x["claim"].as_str().unwrap().to_string(), x["pass"].as_bool().unwrap()))
        .collect()
}

/// Brute-force Whitney counts for the unit square: a level-j cube is kept
/// when its center is at distance at least (3/2)√2 ℓ from the boundary and
/// its parent's center is not.
fn square_oracle(j_max: u32) -> BTreeMap<u32, usize> {
    let far = |j: u32, i: i64, k: i64| {
        let l = 0.5f64.powi(j as i32);
        let (x, y) = ((i as f64 + 0.5) * l, (k as f64 + 0.5) * l);
        let d = x.min(y).min(1.0 - x).min(1.0 - y);
        d >= 1.5 * 2f64.sqrt() * l
    };
    let mut counts = BTreeMap::new();
    for j in 0..=j_max {
        let n = 1i64 << j;
        for i in 0..n {
            for k in 0..n {
                let parent_far = j > 0 && far(j - 1, i / 2, k / 2);
                if far(j, i, k) && !parent_far {
                    *counts.entry(j).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

#[test]
fn whitney_square_matches_brute_force() {
    let (code, v, dir) = run("square", &["whitney", "--domain", "square", "--jmax", "6"]);
    assert_eq!(code, 0);
    assert!(verdicts(&v).iter().all(|(_, p)| *p));
    let csv = std::fs::read_to_string(dir.join("cover.csv")).unwrap();
    let mut counts = BTreeMap::new();
    for line in csv.lines().skip(1) {
        let level: u32 = line.split(',').next().unwrap().parse().unwrap();
        *counts.entry(level).or_insert(0usize) += 1;
    }
    assert_eq!(counts, square_oracle(6));
    assert!(dir.join("cover_rects.csv").exists());
    assert!(dir.join("whitney.json").exists());
}

#[test]
fn whitney_koch_neighbor_ratios() {
    let (code, v, _) = run("koch", &["whitney", "--domain", "koch:4", "--jmax", "7"]);
    assert_eq!(code, 0);
    let s = &v["data"]["stats"];
    assert!(s["min_neighbor_ratio"].as_f64().unwrap() >= 0.25);
    assert!(s["max_neighbor_ratio"].as_f64().unwrap() <= 4.0);
    assert_eq!(v["data"]["exact"]["lower_violations"], 0);
    assert_eq!(v["data"]["exact"]["upper_violations"], 0);
    let r = &v["data"]["exact"];
    assert!(r["min_ratio"].as_f64().unwrap() >= 2f64.sqrt() * (1.0 - 1e-12));
    assert!(r["max_ratio"].as_f64().unwrap() <= 4.0 * 2f64.sqrt() * (1.0 + 1e-12));
    assert!(verdicts(&v).iter().all(|(_, p)| *p));
}

#[test]
fn empty_domain_is_an_invariant_failure() {
    let (code, v, _) = run("empty", &["whitney", "--domain", "empty"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "EmptyDomain");
    assert_eq!(v["invariant_violation"], true);
}

#[test]
fn meyers_membership_verdicts() {
    let (code, v, _) = run(
        "meyers",
        &["counterexample", "meyers", "--mu", "0.5", "--grids", "64,128,256"],
    );
    assert_eq!(code, 0);
    let vs = verdicts(&v);
    assert!(vs.iter().any(|(c, p)| c.starts_with("p = 3: converges") && *p));
    assert!(vs.iter().any(|(c, p)| c.starts_with("p = 6: diverges") && *p));
    assert!((v["data"]["report"]["scans"]["threshold"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn constant_trace_is_exact() {
    let (code, v, dir) = run(
        "const",
        &["trace", "--field", "const:1", "--cloud", "koch:5", "--k", "1"],
    );
    assert_eq!(code, 0);
    assert!(verdicts(&v).iter().all(|(_, p)| *p));
    let csv = std::fs::read_to_string(dir.join("jet.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let value: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((value - 1.0).abs() < 1e-12, "{line}");
    }
}

#[test]
fn glue_matched_versus_jump() {
    let (code, v, _) = run("glue-m", &["glue", "--matched", "smooth"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["report"]["verdict"], "matched");
    let (code, v, _) = run("glue-j", &["glue", "--jump"]);
    assert_eq!(code, 0, "a mismatch is a measurement, not a failure");
    assert_eq!(v["data"]["report"]["verdict"], "mismatched");
    let g = v["verdicts"][0]["measured"].as_f64().unwrap();
    assert!((g - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn deterministic_reports_are_byte_identical() {
    let read = |name: &str| {
        let (_, _, dir) = run(name, &["solve", "--problem", "mixed", "--grids", "4,8"]);
        std::fs::read(dir.join("solve.json")).unwrap()
    };
    assert_eq!(read("det-a"), read("det-b"));
}

#[test]
fn reports_follow_the_schema() {
    for (name, args) in [
        ("s-whitney", vec!["whitney", "--jmax", "4"]),
        ("s-solve", vec!["solve", "--grids", "4,8"]),
        ("s-besov", vec!["besov", "--cloud", "koch:3", "--jmax", "4"]),
    ] {
        let (code, v, _) = run(name, &args);
        assert_eq!(code, 0, "{name}");
        sobext::io::check_report_schema(&v).unwrap();
        assert!(v.get("elapsed_seconds").is_none());
    }
}

#[test]
fn incompatible_neumann_data_fails() {
    let (code, v, _) = run("incompat", &["solve", "--problem", "incompatible", "--grids", "4"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "Incompatible");
}

#[test]
fn config_errors_exit_three() {
    let dir = out_dir("cfg");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "grids = [32, 16]\n").unwrap();
    let (code, v, _) = run("cfg-a", &["--config", cfg.to_str().unwrap(), "extend"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"], "Config");
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(run("cfg-b", &["--config", cfg.to_str().unwrap(), "extend"]).0, 3);
    assert_eq!(run("cfg-c", &["whitney", "--no-such-flag"]).0, 3);
    assert_eq!(run("cfg-d", &["counterexample", "meyers", "--grids", "8,24"]).0, 3);
}

#[test]
fn config_file_overrides_flags() {
    let dir = out_dir("cfg-over");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "jmax = 4\n").unwrap();
    let (code, v, _) = run(
        "cfg-over-run",
        &["--config", cfg.to_str().unwrap(), "whitney", "--jmax", "6"],
    );
    assert_eq!(code, 0);
    assert_eq!(v["data"]["j_max"], 4);
}
