use std::path::Path;
use std::process::{Command, Output};

use exlab::experiments::CountReport;
use serde_json::Value;

fn exlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exlab"))
        .args(args)
        .env_remove("EXLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn joint_tiny_window() {
    let v = json_of(&exlab(&["joint", "--curve", "11a3", "--x", "10", "--ell", "3"]));
    assert_eq!(v["reports"][0]["observed"], 1);
    assert_eq!(v["reports"][0]["main_term"], 1.0);
}

#[test]
fn landau_at_one_thousand() {
    let v = json_of(&exlab(&[
        "landau", "--alpha", "1", "--theta", "0.5", "--lambda", "0.5", "--x", "1000",
    ]));
    assert_eq!(v["reports"][0]["observed"], 10);
}

#[test]
fn usage_errors_exit_one() {
    let out = exlab(&["joint", "--curve", "0,0,0,0,0", "--x", "10", "--ell", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular model"));

    let out = exlab(&["joint", "--x", "10", "--ell", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ℓ must be an odd prime"));

    assert_eq!(exlab(&["nosuch"]).status.code(), Some(1));
    assert_eq!(exlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_report_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("report.json");
    std::fs::write(
        &cfg,
        "experiment = \"joint\"\ncurve = \"37a1\"\nell = [3, 5]\n[window]\nx = 2000\n",
    )
    .unwrap();
    let res = exlab(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let text = std::fs::read_to_string(&out).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let reports: Vec<CountReport> = serde_json::from_value(v["reports"].clone()).unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0].window, (2000, 4000));
    let again: Vec<CountReport> = serde_json::from_str(&serde_json::to_string(&reports).unwrap()).unwrap();
    assert_eq!(again, reports);
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "experiment = \"sieve\"\nx = 100\nwidth = 3\n").unwrap();
    let out = exlab(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn csv_rows_and_cache_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("rows.csv");
    let cache = dir.path().join("traces.bin");
    let args = [
        "joint",
        "--x",
        "100",
        "--ell",
        "3",
        "--csv",
        csv_path.to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
    ];
    let first = json_of(&exlab(&args));
    assert_eq!(first["cache"]["loaded"], 0);
    let rows = csv_rows(&csv_path);
    // good primes in (100, 200]
    assert_eq!(rows.len(), 21);
    for r in &rows {
        let p: u64 = r[0].parse().unwrap();
        let edge: u64 = r[2].parse().unwrap();
        assert!(edge * edge <= 4 * p && 4 * p < (edge + 1) * (edge + 1));
        assert_eq!(r[4].parse::<u64>().unwrap(), edge % 3);
        assert_eq!(r[6].contains("match"), r[3] == r[4]);
        // 17 significant digits
        assert_eq!(r[5].split('e').next().unwrap().len(), 18);
    }
    let second = json_of(&exlab(&args));
    assert!(second["cache"]["loaded"].as_u64().unwrap() >= 21);
    assert_eq!(first["reports"], second["reports"]);
}

#[test]
fn verify_passes() {
    let v = json_of(&exlab(&["verify", "--x", "3000"]));
    assert_eq!(v["pass"], true);
}
