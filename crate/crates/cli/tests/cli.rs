use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const DIMER: &str = r#"{"heisenberg":{"n":2,"j":1,"b":1}}"#;

fn tracespec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracespec")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn csv_column(text: &str, col: usize) -> Vec<f64> {
    text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn diagonalize_prints_dimer_levels() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "h.txt", "-1 XX\n-1 YY\n-1 ZZ\n-1 ZI\n-1 IZ\n");
    let out = tracespec(dir.path(), &["diagonalize", "h.txt", "--out", "o"]);
    assert!(out.status.success());
    let levels: Vec<f64> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().parse().unwrap())
        .collect();
    for (got, want) in levels.iter().zip([-3.0, -1.0, 1.0, 3.0]) {
        assert!((got - want).abs() < 1e-9);
    }
    assert_eq!(levels.len(), 4);
}

#[test]
fn three_site_chain_has_eight_states() {
    let dir = TempDir::new().unwrap();
    let h = "-1 XXI\n-1 YYI\n-1 ZZI\n-1 IXX\n-1 IYY\n-1 IZZ\n-0.5 ZII\n-0.5 IZI\n-0.5 IIZ\n";
    write(dir.path(), "h.txt", h);
    assert!(tracespec(dir.path(), &["diagonalize", "h.txt", "--out", "o"]).status.success());
    let total: f64 = csv_column(&read(dir.path(), "o/eigenvalues.csv"), 1).iter().sum();
    assert_eq!(total, 8.0);
}

#[test]
fn empty_hamiltonian_file_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "h.txt", "");
    let out = tracespec(dir.path(), &["diagonalize", "h.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no terms"));
}

#[test]
fn series_then_spectrum_finds_four_peaks() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s.json", &format!(r#"{{"hamiltonian":{DIMER},"t_max":6,"dt":0.04}}"#));
    write(dir.path(), "p.json", r#"{"input":"o/series.csv","threshold":0.2}"#);
    assert!(tracespec(dir.path(), &["series", "--config", "s.json", "--out", "o"]).status.success());
    assert!(tracespec(dir.path(), &["spectrum", "--config", "p.json", "--out", "o"]).status.success());
    let peaks = csv_column(&read(dir.path(), "o/peaks.csv"), 0);
    assert_eq!(peaks.len(), 4);
    let bin = std::f64::consts::TAU / 6.04;
    for (p, want) in peaks.iter().zip([-3.0, -1.0, 1.0, 3.0]) {
        assert!((p - want).abs() < bin);
    }
}

#[test]
fn outputs_are_byte_identical_per_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = format!(r#"{{"hamiltonian":{DIMER},"t_max":1,"dt":0.1,"shots":256}}"#);
    write(dir.path(), "s.json", &cfg);
    for out in ["a", "b"] {
        assert!(tracespec(dir.path(), &["series", "--config", "s.json", "--seed", "7", "--out", out]).status.success());
    }
    assert!(tracespec(dir.path(), &["series", "--config", "s.json", "--seed", "8", "--out", "c"]).status.success());
    assert_eq!(read(dir.path(), "a/series.csv"), read(dir.path(), "b/series.csv"));
    assert_ne!(read(dir.path(), "a/series.csv"), read(dir.path(), "c/series.csv"));
}

#[test]
fn synth_count_table() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "c.json", &format!(r#"{{"hamiltonian":{DIMER}}}"#));
    assert!(tracespec(dir.path(), &["synth-count", "--config", "c.json", "--out", "o"]).status.success());
    let text = read(dir.path(), "o/synth_count.csv");
    let rows: Vec<(String, usize)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[3].parse().unwrap())
        })
        .collect();
    assert_eq!(rows, vec![("a".into(), 46), ("b".into(), 22), ("c".into(), 16)]);
}

#[test]
fn fidelity_sweep_decreases() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"n_min":2,"n_max":12,"j":1,"b":1,"t":6,
        "calibration":{"uniform":{"eps1":0.0003,"eps2":0.007,"t1_us":100,"pulse_scaling":true}}}"#;
    write(dir.path(), "f.json", cfg);
    assert!(tracespec(dir.path(), &["fidelity", "--config", "f.json", "--seed", "9", "--out", "o"]).status.success());
    let f = csv_column(&read(dir.path(), "o/fidelity.csv"), 6);
    assert_eq!(f.len(), 11);
    assert!(f.windows(2).all(|w| w[1] < w[0]), "{f:?}");
}

#[test]
fn route_reports_swaps() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "c.txt", "# width 5\nCX 0 4\n");
    write(dir.path(), "r.json", r#"{"circuit":"c.txt","graph":{"line":5}}"#);
    assert!(tracespec(dir.path(), &["route", "--config", "r.json", "--out", "o"]).status.success());
    let summary: serde_json::Value = serde_json::from_str(&read(dir.path(), "o/route.json")).unwrap();
    assert_eq!(summary["swap_count"], 3);
    assert!(read(dir.path(), "o/routed.txt").starts_with("# width 5\n"));
}

#[test]
fn lifetime_and_stochastic_run() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "l.json", r#"{"n":2,"t1":[50],"idle_times":{"grid":{"max":100,"count":5}}}"#);
    assert!(tracespec(dir.path(), &["mms-lifetime", "--config", "l.json", "--out", "o"]).status.success());
    let p0 = csv_column(&read(dir.path(), "o/lifetime.csv"), 2);
    assert!((p0[0] - 0.25).abs() < 1e-12 && p0.windows(2).all(|w| w[1] > w[0]));

    let cfg = format!(r#"{{"hamiltonian":{DIMER},"samples":8,"t_max":1,"dt":0.1}}"#);
    write(dir.path(), "s.json", &cfg);
    assert!(tracespec(dir.path(), &["stochastic", "--config", "s.json", "--out", "o"]).status.success());
    assert!(read(dir.path(), "o/stochastic.csv").starts_with("t,re,im,re_err,im_err\n"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "bad.json", &format!(r#"{{"hamiltonian":{DIMER},"t_max":6,"dt":0.04,"typo":1}}"#));
    let out = tracespec(dir.path(), &["series", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("typo"));

    write(dir.path(), "grid.json", &format!(r#"{{"hamiltonian":{DIMER},"t_max":1,"dt":0.3}}"#));
    assert_eq!(tracespec(dir.path(), &["series", "--config", "grid.json"]).status.code(), Some(2));
    assert_eq!(tracespec(dir.path(), &["series", "--config", "missing.json"]).status.code(), Some(2));
    assert_eq!(tracespec(dir.path(), &["bogus"]).status.code(), Some(2));
}
