use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use leeyang_cli::output::{Report, SeriesTable, ZerosTable};
use serde_json::{json, Value};
use tempfile::TempDir;

fn leeyang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leeyang")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn triangle(two_s: u32, temperature: Value, two_s0: u32) -> Value {
    json!({
        "model": {"kind": "exact", "n_spins": 2, "two_s": two_s, "J": 1.0},
        "T_over_J": temperature,
        "probe": {"two_s0": two_s0, "delta": 1, "h0": 0.0, "state": "sx_max"},
        "lambda": 1.0
    })
}

fn zeros_of(dir: &Path, cfg: &Value) -> ZerosTable {
    let c = write_config(dir, "z.json", cfg);
    let out = dir.join("zeros.csv");
    let o = leeyang(&["zeros", "--config", c.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("circle_deviation"));
    ZerosTable::parse(&fs::read_to_string(out).unwrap()).unwrap()
}

#[test]
fn zeros_of_infinite_temperature_triangles() {
    let dir = TempDir::new().unwrap();
    let t = zeros_of(dir.path(), &triangle(1, json!("inf"), 1));
    assert_eq!(t.rows.len(), 2);
    for r in &t.rows {
        assert!((r.theta - PI).abs() < 1e-12);
        assert!((r.predicted_time - PI).abs() < 1e-12);
        assert_eq!(r.multiplicity, 2);
    }

    let t = zeros_of(dir.path(), &triangle(5, json!("inf"), 5));
    assert_eq!(t.rows.len(), 10);
    for r in &t.rows {
        let k = r.theta / (PI / 3.0);
        assert!((k - k.round()).abs() < 1e-6 && k.round() != 0.0, "theta {}", r.theta);
        assert!(r.abs_minus_1.abs() < 1e-4);
    }
}

#[test]
fn ring_zeros_lie_on_the_circle() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "model": {"kind": "ring", "n_spins": 10, "two_s": 2, "J": 1.0},
        "beta": 0.125,
        "probe": {"two_s0": 1, "delta": 1, "state": "sx_max"},
        "lambda": 1.0
    });
    let t = zeros_of(dir.path(), &cfg);
    assert_eq!(t.rows.len(), 20);
    assert!(t.rows.iter().all(|r| r.abs_minus_1.abs() < 1e-8));
    assert_eq!(t.meta.get("model"), Some("ring n_spins=10 two_s=2 J=1.0"));
}

#[test]
fn evolve_matches_the_cosine_squared_closed_form() {
    let dir = TempDir::new().unwrap();
    let c = write_config(dir.path(), "c.json", &triangle(1, json!("inf"), 1));
    let out = dir.path().join("series.csv");
    let o = leeyang(&["evolve", "--config", c.to_str().unwrap(), "--out", out.to_str().unwrap(), "--steps", "512"]);
    assert!(o.status.success());
    let s = SeriesTable::parse(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(s.rows.len(), 513);
    assert_eq!(s.rows[0].t, 0.0);
    assert_eq!(s.rows[0].im, 0.0);
    assert!((s.rows[0].re - 0.5).abs() < 1e-15);
    for r in &s.rows {
        assert!((r.re - 0.5 * (r.t / 2.0).cos().powi(2)).abs() < 1e-12);
        assert!(r.im.abs() < 1e-12);
    }
    for key in ["model", "beta", "lambda", "delta"] {
        assert!(s.meta.get(key).is_some(), "{key}");
    }
}

#[test]
fn evolve_honours_t_max_override() {
    let dir = TempDir::new().unwrap();
    let c = write_config(dir.path(), "c.json", &triangle(1, json!(1), 1));
    let out = dir.path().join("s.csv");
    let o = leeyang(&[
        "evolve",
        "--config",
        c.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--t-max",
        "2.5",
        "--steps",
        "10",
    ]);
    assert!(o.status.success());
    let s = SeriesTable::parse(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(s.rows.last().unwrap().t, 2.5);
    assert_eq!(s.rows.len(), 11);
}

fn correlate(dir: &Path, cfg: &Value, extra: &[&str]) -> (Output, PathBuf) {
    let c = write_config(dir, "corr.json", cfg);
    let out = dir.join("report.json");
    let mut args = vec!["correlate", "--config", c.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (leeyang(&args), out)
}

#[test]
fn correlate_triangle_at_unit_temperature() {
    let dir = TempDir::new().unwrap();
    let (o, out) = correlate(dir.path(), &triangle(1, json!(1), 1), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = Report::parse(&fs::read_to_string(out).unwrap()).unwrap();
    assert!(r.max_deviation.unwrap() < 1e-6);
    assert_eq!(r.matches.len(), 2);
    assert!(r.all_matched);
}

#[test]
fn correlate_four_fold_root() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "model": {"kind": "long_range", "n_spins": 4, "two_s": 1, "J": 1.0},
        "T_over_J": "inf",
        "probe": {"two_s0": 1, "delta": 1, "state": "sx_max"},
        "lambda": 1.0
    });
    let (o, out) = correlate(dir.path(), &cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::parse(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r.predicted.len(), 1);
    assert_eq!(r.predicted_multiplicity, vec![4]);
    assert!((r.predicted[0] - PI).abs() < 1e-12);
    assert_eq!(r.detected.len(), 1);
    assert_eq!(r.matches.len(), 1);
}

#[test]
fn unmatched_predictions_exit_nonzero_but_write_the_report() {
    let dir = TempDir::new().unwrap();
    let mut cfg = triangle(1, json!(1), 1);
    cfg["tolerances"] = json!({"magnitude_tol": 1e-300});
    let (o, out) = correlate(dir.path(), &cfg, &[]);
    assert_eq!(o.status.code(), Some(1));
    let r = Report::parse(&fs::read_to_string(out).unwrap()).unwrap();
    assert!(!r.all_matched);
    assert_eq!(r.unmatched_predicted.len(), 2);
    assert!(r.max_deviation.is_none());
}

#[test]
fn correlate_reads_a_series_file() {
    let dir = TempDir::new().unwrap();
    let cfg = triangle(5, json!(8), 5);
    let c = write_config(dir.path(), "c.json", &cfg);
    let series = dir.path().join("series.csv");
    assert!(leeyang(&["evolve", "--config", c.to_str().unwrap(), "--out", series.to_str().unwrap()]).status.success());

    let (o, _) = correlate(dir.path(), &cfg, &["--series", series.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let mut other = cfg.clone();
    other["lambda"] = json!(2.0);
    let (o, _) = correlate(dir.path(), &other, &["--series", series.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("lambda") && err.contains("domain"), "{err}");
}

#[test]
fn correlate_rejects_a_static_field() {
    let dir = TempDir::new().unwrap();
    let mut cfg = triangle(1, json!(1), 1);
    cfg["probe"]["h0"] = json!(0.5);
    let (o, out) = correlate(dir.path(), &cfg, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn config_errors_exit_two_with_a_line_number() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, "{\n  \"model\": 3,\n}\n").unwrap();
    let o = leeyang(&["zeros", "--config", p.to_str().unwrap(), "--out", dir.path().join("z.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let c = write_config(dir.path(), "zero.json", &triangle(1, json!(0), 1));
    let o = leeyang(&["zeros", "--config", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("T_over_J"));

    let o = leeyang(&["zeros", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_nonzero() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "model": {"kind": "exact", "n_spins": 40, "two_s": 1, "J": 1.0},
        "beta": 1.0,
        "probe": {"two_s0": 1, "delta": 1, "state": "sx_max"},
        "lambda": 1.0
    });
    let c = write_config(dir.path(), "big.json", &cfg);
    let o = leeyang(&["zeros", "--config", c.to_str().unwrap(), "--out", dir.path().join("z.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2000000"));
}
