use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_alpha-ring"));
    cmd.env_remove("ALPHA_RING_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(args: &[&str]) -> Vec<Vec<String>> {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn lattice_json_worked_values() {
    let v = json(&["lattice", "--d", "4", "--alpha", "1"]);
    assert_eq!(v["d"], 4);
    assert_eq!(v["alpha"], 1.0);
    assert_eq!(v["angles"][2].as_f64().unwrap(), std::f64::consts::PI);
    assert_eq!(v["sigma"].as_f64().unwrap(), std::f64::consts::FRAC_PI_2);
}

#[test]
fn spectrum_values() {
    let v = json(&["spectrum", "--d", "4", "--alpha", "1", "--N", "1"]);
    let e = v[0]["energy"].as_f64().unwrap();
    assert!((e - 0.405284734569351).abs() < 1e-12);
    assert!((v[0]["bound"].as_f64().unwrap() - 0.810569469138702).abs() < 1e-12);

    let half = json(&[
        "spectrum", "--d", "4", "--alpha", "1", "--case", "half", "--N", "0",
    ]);
    assert!((half[0]["energy"].as_f64().unwrap() - 0.11870515044397294).abs() < 1e-14);

    let all = json(&["spectrum", "--d", "6", "--alpha", "2"]);
    assert_eq!(all.as_array().unwrap().len(), 6);

    let oracle = json(&["spectrum", "--d", "4", "--alpha", "1", "--case", "oracle"]);
    assert_eq!(oracle[3]["provenance"], "oracle");
    assert!((oracle[3]["energy"].as_f64().unwrap() - 0.810569469138702).abs() < 1e-12);
}

#[test]
fn compare_mode_reports_differences() {
    let v = json(&["spectrum", "--d", "9", "--alpha", "3", "--compare"]);
    assert_eq!(v["levels"].as_array().unwrap().len(), 9);
    assert!(v["max_abs_diff"].as_f64().unwrap() < 1e-10);
}

#[test]
fn csv_matches_json() {
    let args = [
        "spectrum", "--d", "5", "--alpha", "0.5", "--case", "quarter",
    ];
    let j = json(&args);
    let rows = csv_rows(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(rows.len(), 5);
    for (row, rec) in rows.iter().zip(j.as_array().unwrap()) {
        assert_eq!(row[4].parse::<f64>().unwrap(), rec["xi"].as_f64().unwrap());
        assert_eq!(
            row[5].parse::<f64>().unwrap(),
            rec["energy"].as_f64().unwrap()
        );
        assert_eq!(
            row[6].parse::<f64>().unwrap(),
            rec["bound"].as_f64().unwrap()
        );
    }

    let wargs = [
        "wavefunction",
        "--d",
        "6",
        "--alpha",
        "2",
        "--case",
        "threequarter",
        "--N",
        "2",
    ];
    let j = json(&wargs);
    let rows = csv_rows(&[&wargs[..], &["--format", "csv"]].concat());
    for (row, s) in rows.iter().zip(j["samples"].as_array().unwrap()) {
        assert_eq!(row[1].parse::<f64>().unwrap(), s["theta"].as_f64().unwrap());
        assert_eq!(
            row[2].parse::<f64>().unwrap(),
            s["psi"][0].as_f64().unwrap()
        );
        assert_eq!(
            row[3].parse::<f64>().unwrap(),
            s["psi"][1].as_f64().unwrap()
        );
    }
}

#[test]
fn wavefunction_defaults_and_consistency() {
    let v = json(&[
        "wavefunction",
        "--d",
        "8",
        "--alpha",
        "1",
        "--case",
        "half",
        "--N",
        "1",
    ]);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 8);
    assert_eq!(samples[0]["psi"][0].as_f64().unwrap(), 0.0);
    assert!((samples[1]["psi"][0].as_f64().unwrap() - 1.0).abs() < 1e-14);

    let bad = run(&[
        "wavefunction",
        "--d",
        "8",
        "--alpha",
        "1",
        "--case",
        "quarter",
        "--psi1-re",
        "-3",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["lattice", "--d", "1", "--alpha", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["lattice", "--d", "4", "--alpha", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["lattice", "--d", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["spectrum", "--d", "4", "--alpha", "1", "--case", "oracle", "--N", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "spectrum",
            "--d",
            "4",
            "--alpha",
            "1",
            "--case",
            "half",
            "--compare"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--grid-d", "3,4", "--grid-alpha", "1,2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_report_shape() {
    let v = json(&["verify", "--d", "5", "--alpha", "2"]);
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["grid"].as_array().unwrap().len(), 1);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), alpha_ring::verification::CATALOGUE.len());
    for c in checks {
        for key in [
            "name",
            "relation",
            "max_residual",
            "tolerance",
            "status",
            "worst_point",
        ] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
    let text = run(&["verify", "--d", "5", "--alpha", "2", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("overall: pass"));
}

#[test]
fn out_flag_and_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.csv");
    let out = run(&[
        "lattice",
        "--d",
        "3",
        "--alpha",
        "2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);

    let out = bin()
        .args(["spectrum", "--d", "3", "--alpha", "1"])
        .env("ALPHA_RING_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written = dir.path().join("spectrum.json");
    assert!(Path::new(&written).exists());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(written).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}
