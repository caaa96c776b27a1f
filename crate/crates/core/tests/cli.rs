use std::path::Path;
use std::process::{Command, Output};

use opuclab::experiment::INVARIANTS;
use serde_json::Value;

fn opuclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opuclab")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

fn run_into(config: &str, out: &Path) -> Output {
    opuclab(&["run", "--config", config, "--out", out.to_str().unwrap()])
}

/// Column `name` of a CSV table, as numbers.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).expect("column");
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn families_lists_builtins() {
    let out = opuclab(&["families"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["lebesgue", "bernstein_szego", "geronimus", "ell2", "mixed"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn lebesgue_all_passes_with_complete_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"family":{"kind":"lebesgue"},"experiment":"all"}"#);
    let out_dir = dir.path().join("out");
    let out = run_into(&config, &out_dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));

    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["config"]["grid_size"], 4096);
    let verdicts = report["verdicts"].as_array().unwrap();
    let names: Vec<&str> = verdicts.iter().map(|v| v["invariant"].as_str().unwrap()).collect();
    assert_eq!(names, INVARIANTS.to_vec(), "every invariant exactly once, in order");
    for v in verdicts {
        assert_eq!(v["status"], "pass", "{v}");
        // Lower-bound verdicts carry the bounded value itself (|φ*_n| = 1 here).
        if v["invariant"] == "opuc.phi_star_zero_free" {
            assert_eq!(v["residual"].as_f64().unwrap(), 1.0);
        } else if let Some(r) = v["residual"].as_f64() {
            assert!(r.abs() <= 1e-10, "{v}");
        }
    }
    for file in ["entropy.csv", "schur_identities.csv", "mnt.csv", "summability.csv", "scattering.csv"] {
        assert!(out_dir.join(file).exists(), "{file}");
    }
}

#[test]
fn mnt_cesaro_column_approaches_inverse_density() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"family":{"kind":"bernstein_szego","r":0.5},"experiment":"mnt","n_list":[16,64,256]}"#,
    );
    let out = run_into(&config, dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("mnt.csv")).unwrap();
    let cesaro = column(&csv, "cesaro");
    let gaps: Vec<f64> = cesaro.iter().map(|c| (c - 1.0 / 3.0).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{cesaro:?}");
    assert!(gaps[2] < 5e-3);
    assert!(column(&csv, "target").iter().all(|t| (t - 1.0 / 3.0).abs() < 1e-11));
}

#[test]
fn scattering_deviations_decrease() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"family":{"kind":"ell2","c":0.5,"p":1},"experiment":"scattering","n_list":[64,128,256],"test_points":[0.5,2.0]}"#,
    );
    let out = run_into(&config, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join("scattering.csv")).unwrap();
    for side in ["plus_deviation", "minus_deviation"] {
        let d = column(&csv, side);
        for point in d.chunks(3) {
            assert!(point[1] < point[0] && point[2] < point[1], "{side}: {point:?}");
        }
    }
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"family":{"kind":"ell2","c":0.3,"p":2},"experiment":"all","n_list":[8,32,128],"test_points":[0.0,1.5],"seed":99}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run_into(&config, &a).status.success());
    assert!(run_into(&config, &b).status.success());
    let mut compared = 0;
    for entry in std::fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        if name.to_string_lossy().ends_with(".csv") {
            assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap());
            compared += 1;
        }
    }
    assert_eq!(compared, 6, "five suites plus mnt_1.csv for the second test point");
}

#[test]
fn verify_prints_verdicts_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"family":{"kind":"geronimus","a":0.3},"experiment":"mnt"}"#);
    let out = opuclab(&["verify", "--config", &config]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("skip outer.entropy_nonnegative"));
    assert!(text.contains("0 failed"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn bad_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for json in [
        r#"{"family":{"kind":"lebesgue"},"experiment":"all","grid_size":1000}"#,
        r#"{"family":{"kind":"bernstein_szego","r":1.5},"experiment":"all"}"#,
        r#"{"family":{"kind":"ell2","c":0.9,"p":1},"experiment":"all"}"#,
        r#"{"family":{"kind":"lebesgue"},"experiment":"all","typo":1}"#,
    ] {
        let config = write_config(dir.path(), json);
        let out = opuclab(&["verify", "--config", &config]);
        assert_eq!(out.status.code(), Some(2), "{json}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let out = opuclab(&["run", "--config", "/nonexistent/config.json", "--out", "/tmp"]);
    assert_eq!(out.status.code(), Some(2));
}
