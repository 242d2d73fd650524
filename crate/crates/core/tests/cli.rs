use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tourney(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tourney"))
        .current_dir(dir)
        .env("TOURNEY_THREADS", "2")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn gen(dir: &Path, kind: &str, n: &str, file: &str) {
    let out = tourney(dir, &["gen", "--kind", kind, "--n", n, "-o", file]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn gen_writes_regular_carousel() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "carousel", "101", "r101.trn");
    let text = std::fs::read_to_string(dir.path().join("r101.trn")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r.len() == 101 && r.matches('1').count() == 50));
}

#[test]
fn gen_without_output_prints_matrix() {
    let dir = TempDir::new().unwrap();
    let out = tourney(dir.path(), &["gen", "--kind", "random", "--n", "5", "--seed", "0x2a"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("5\n"));
    let prov: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(prov["seed"], 42);
}

#[test]
fn layered_generation_is_reproducible() {
    let dir = TempDir::new().unwrap();
    for file in ["a.trn", "b.trn"] {
        let out = tourney(
            dir.path(),
            &["gen", "--kind", "layered", "--n", "600", "--t", "0.143584", "--seed", "7", "-o", file],
        );
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a.trn")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.trn")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let even = tourney(dir.path(), &["gen", "--kind", "carousel", "--n", "100"]);
    assert_eq!(even.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&even.stderr).contains("100"));

    assert_eq!(tourney(dir.path(), &["stats", "missing.trn"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.trn"), "3\n010\n00x\n100\n").unwrap();
    assert_eq!(tourney(dir.path(), &["stats", "bad.trn"]).status.code(), Some(2));
    assert_eq!(tourney(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(tourney(dir.path(), &["gen", "--kind", "layered", "--n", "10"]).status.code(), Some(1));
    assert_eq!(tourney(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn convert_round_trip_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "digraphon", "77", "d.trn");
    assert!(tourney(dir.path(), &["convert", "d.trn", "-o", "d.arcs"]).status.success());
    assert!(tourney(dir.path(), &["convert", "d.arcs", "-o", "back.trn", "--n", "77"]).status.success());
    let a = std::fs::read(dir.path().join("d.trn")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("back.trn")).unwrap());
}

#[test]
fn stats_small_cases() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "carousel", "5", "c5.trn");
    let v = json(&tourney(dir.path(), &["stats", "c5.trn"]));
    for (k, want) in [("tr3", 5), ("c3", 5), ("tr4", 0), ("w4", 0), ("l4", 0), ("r4", 5)] {
        assert_eq!(v[k], want, "{k}");
    }
    assert_eq!(v["schema"], 1);

    gen(dir.path(), "transitive", "6", "t6.trn");
    let v = json(&tourney(dir.path(), &["stats", "t6.trn", "--order", "4"]));
    assert_eq!((v["tr4"].as_u64(), v["w4"].as_u64(), v["l4"].as_u64(), v["r4"].as_u64()), (Some(15), Some(0), Some(0), Some(0)));
    assert!(v.get("c3").is_none());
}

#[test]
fn stats_sampled_on_large_carousel() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "carousel", "1001", "c.trn");
    let v = json(&tourney(dir.path(), &["stats", "c.trn", "--sample", "1000000", "--seed", "3"]));
    assert_eq!(v["mode"], "sampled");
    let p = v["p_r4"].as_f64().unwrap();
    assert!((p - 0.5015).abs() < 0.003, "p_r4 = {p}");
}

#[test]
fn arcflags_csv() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "carousel", "101", "c.trn");
    let v = json(&tourney(dir.path(), &["arcflags", "c.trn", "--flag", "c", "-o", "c.csv"]));
    assert_eq!(v["arcs"], 5050);
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.ends_with(",101")));

    gen(dir.path(), "transitive", "50", "t.trn");
    let out = tourney(dir.path(), &["arcflags", "t.trn", "--flag", "c", "--bins", "4", "-o", "t.csv"]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let counts: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(counts, ["1225", "0", "0", "0"]);
}

#[test]
fn check_profiles() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "carousel", "1001", "c.trn");
    let out = tourney(dir.path(), &["check", "c.trn", "--profile", "carousel"]);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));

    let out = tourney(dir.path(), &["gen", "--kind", "random", "--n", "1001", "--seed", "4", "-o", "r.trn"]);
    assert!(out.status.success());
    let v = json(&tourney(dir.path(), &["check", "r.trn", "--profile", "carousel"]));
    assert_eq!(v["pass"], false);
    assert_eq!(v["verdicts"]["ks_c"], false);

    std::fs::write(dir.path().join("cfg.txt"), "eps=0.1\nseed=5\n").unwrap();
    let v = json(&tourney(dir.path(), &["check", "r.trn", "--profile", "random", "--config", "cfg.txt"]));
    assert_eq!(v["provenance"]["eps"], 0.1);
    std::fs::write(dir.path().join("bad.txt"), "eps=lots\n").unwrap();
    let out = tourney(dir.path(), &["check", "r.trn", "--profile", "random", "--config", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn loctrans_outputs() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "carousel", "9", "c9.trn");
    let v = json(&tourney(dir.path(), &["loctrans", "c9.trn"]));
    assert_eq!(v["locally_transitive"], true);
    assert_eq!(v["cyclic_order"], serde_json::json!([0, 1, 2, 3, 4, 5, 6, 7, 8]));
    assert!(v.get("carousel_isomorphism").is_some());

    std::fs::write(dir.path().join("w4.trn"), "4\n0111\n0010\n0001\n0100\n").unwrap();
    let v = json(&tourney(dir.path(), &["loctrans", "w4.trn"]));
    assert_eq!(v["locally_transitive"], false);
    assert_eq!(v["obstruction"]["kind"], "W4");
    assert_eq!(v["obstruction"]["apex"], 0);

    gen(dir.path(), "transitive", "7", "t7.trn");
    let v = json(&tourney(dir.path(), &["loctrans", "t7.trn"]));
    assert_eq!(v["locally_transitive"], true);
    assert!(v.get("carousel_isomorphism").is_none());
    assert!(v["carousel_isomorphism_error"].as_str().unwrap().contains("outdegree"));
}

#[test]
fn sweep_modes() {
    let dir = TempDir::new().unwrap();
    let v = json(&tourney(dir.path(), &["sweep-w4", "--optimize", "1e-8"]));
    assert!((v["t_star"].as_f64().unwrap() - 0.143584).abs() < 1e-6);
    assert!((v["value"].as_f64().unwrap() - 0.157501).abs() < 1e-6);

    let out = tourney(dir.path(), &["sweep-w4", "--grid", "1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 1000);
    let peak = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!(values[..=peak].windows(2).all(|w| w[0] <= w[1]));
    assert!(values[peak..].windows(2).all(|w| w[0] >= w[1]));

    let v = json(&tourney(dir.path(), &["sweep-w4", "--simulate", "5000", "--seed", "3"]));
    assert!((v["sampled_w4"].as_f64().unwrap() - 0.1575).abs() < 0.01);

    assert_eq!(tourney(dir.path(), &["sweep-w4"]).status.code(), Some(1));
    assert_eq!(tourney(dir.path(), &["sweep-w4", "--grid", "3", "--optimize", "0.1"]).status.code(), Some(1));
}
