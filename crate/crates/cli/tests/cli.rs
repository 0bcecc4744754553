//! End-to-end tests of the command-line surface: flag handling, file
//! outputs, config-file runs and reproducibility.

use std::process::{Command, Output};

fn reur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reur"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn last_json(out: &Output) -> serde_json::Value {
    let text = stdout(out);
    let line = text
        .lines()
        .rev()
        .find(|l| l.starts_with('{'))
        .expect("a JSON line");
    serde_json::from_str(line).expect("valid JSON")
}

#[test]
fn report_single_excitation_values() {
    let out = reur(&["report", "--modes", "1", "--omega", "2", "--excite", "0:1"]);
    assert!(out.status.success());
    let json = last_json(&out);
    let report = &json["report"];
    assert!((report["lhs"].as_f64().unwrap() - 1.4592743).abs() < 1e-6);
    assert_eq!(report["rhs"].as_f64().unwrap(), 2.0);
}

#[test]
fn report_vacuum_is_all_zero() {
    let out = reur(&["report", "--modes", "4", "--vacuum"]);
    assert!(out.status.success());
    let report = &last_json(&out)["report"];
    assert_eq!(report["lhs"].as_f64().unwrap(), 0.0);
    assert_eq!(report["rhs"].as_f64().unwrap(), 0.0);
    assert!(report["tight"].as_bool().unwrap());
}

#[test]
fn report_thermal_single_mode_bound() {
    let out = reur(&[
        "report",
        "--thermal",
        "--beta",
        "1",
        "--modes",
        "1",
        "--omega",
        "1",
    ]);
    assert!(out.status.success());
    let report = &last_json(&out)["report"];
    let expect = 2.0 / (std::f64::consts::E - 1.0);
    assert!((report["rhs"].as_f64().unwrap() - expect).abs() < 1e-12);
}

#[test]
fn fig1_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("fig1.svg");
    let out = reur(&[
        "fig1",
        "--omega",
        "1",
        "--out",
        svg_path.to_str().unwrap(),
        "--format",
        "svg",
    ]);
    assert!(out.status.success());

    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));

    let csv = std::fs::read_to_string(svg_path.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "param,lhs,rhs,deficit");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 50);
    // rhs >= lhs everywhere, both monotone decreasing, both tiny at beta = 10
    for w in rows.windows(2) {
        assert!(w[0][1] >= w[1][1] && w[0][2] >= w[1][2]);
    }
    for r in &rows {
        assert!(r[2] >= r[1]);
        assert!(r[3] >= 0.0);
    }
    let last = rows.last().unwrap();
    assert!(last[1] < 1e-3 && last[2] < 1e-3);
    // LF line endings only
    assert!(!csv.contains('\r'));
}

#[test]
fn n_sweep_excited_bound_is_constant() {
    let out = reur(&[
        "n-sweep", "--excite", "1:1", "--mass", "1", "--n-list", "8,64,512",
    ]);
    assert!(out.status.success());
    let rows = last_json(&out)["rows"].as_array().unwrap().clone();
    for row in &rows {
        assert_eq!(row["rhs"].as_f64().unwrap(), 2.0);
    }
}

#[test]
fn n_sweep_vacuum_is_all_zeros() {
    let out = reur(&["n-sweep", "--vacuum", "--mass", "1", "--n-list", "8,64"]);
    assert!(out.status.success());
    for row in last_json(&out)["rows"].as_array().unwrap() {
        assert_eq!(row["lhs"].as_f64().unwrap(), 0.0);
        assert_eq!(row["rhs"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{
            "lattice": {"n_modes": 1, "spacing": 1.0, "mass": 2.0},
            "state": {"kind": "Excited", "occupations": [{"mode": 0, "n": 1}]},
            "command": "report"
        }"#,
    )
    .unwrap();
    let from_config = reur(&["--config", path.to_str().unwrap()]);
    assert!(from_config.status.success());
    let from_flags = reur(&["report", "--modes", "1", "--omega", "2", "--excite", "0:1"]);
    assert_eq!(
        last_json(&from_config)["report"],
        last_json(&from_flags)["report"]
    );
}

#[test]
fn config_conflicts_with_subcommand() {
    let out = reur(&["report", "--modes", "4", "--config", "/nonexistent.json"]);
    assert!(!out.status.success());
}

#[test]
fn coherent_means_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("means.json");
    std::fs::write(
        &path,
        r#"[{"phi": 0.5, "pi": 0.0}, {"phi": -1.0, "pi": 0.2}, {"phi": 0.0, "pi": 0.0}, {"phi": 1.5, "pi": -0.4}]"#,
    )
    .unwrap();
    let out = reur(&[
        "report",
        "--modes",
        "4",
        "--coherent-means",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = &last_json(&out)["report"];
    assert_eq!(report["lhs"].as_f64().unwrap(), 0.0);
    assert_eq!(report["rhs"].as_f64().unwrap(), 0.0);
}

#[test]
fn verify_is_seed_reproducible() {
    let args = [
        "verify",
        "--modes",
        "4",
        "--mc-samples",
        "50000",
        "--seed",
        "9",
    ];
    let a = reur(&args);
    let b = reur(&args);
    assert!(a.status.success());
    assert_eq!(
        stdout(&a),
        stdout(&b),
        "same seed must reproduce stdout byte for byte"
    );

    let c = reur(&[
        "verify",
        "--modes",
        "4",
        "--mc-samples",
        "50000",
        "--seed",
        "10",
    ]);
    assert!(c.status.success());
    assert_ne!(
        stdout(&a),
        stdout(&c),
        "different seed must change the MC details"
    );
}

#[test]
fn smeared_outputs_unit_bounds() {
    let out = reur(&["smeared", "--packet", "5,0.1", "--mass", "1"]);
    assert!(out.status.success());
    let json = last_json(&out);
    assert!((json["field_sector_bound"].as_f64().unwrap() - 1.0).abs() < 1e-7);
    assert!((json["momentum_sector_bound"].as_f64().unwrap() - 1.0).abs() < 1e-7);
    assert!((json["report"]["rhs"].as_f64().unwrap() - 2.0).abs() < 2e-7);
}

#[test]
fn thermal_sweep_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = reur(&[
        "thermal-sweep",
        "--modes",
        "4",
        "--beta-min",
        "0.5",
        "--beta-max",
        "2.0",
        "--points",
        "4",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("param,lhs,rhs,deficit\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn usage_errors_exit_nonzero() {
    assert!(!reur(&["report"]).status.success()); // missing --modes
    assert!(!reur(&["report", "--modes", "3"]).status.success()); // odd N
    assert!(!reur(&["report", "--modes", "4", "--thermal"])
        .status
        .success()); // no beta
    assert!(!reur(&["smeared", "--packet", "nonsense"]).status.success());
}
