//! End-to-end tests of the vmlab binary: report contents, exit codes,
//! determinism, and the CSV emitter.

use std::path::Path;
use std::process::{Command, Output};

fn vmlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vmlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const FUNCTION_2ATOM: &str = r#"{"space": {"masses": [0.5, 0.5]},
  "codomain": {"dim": 2, "q": 2.0},
  "values": [[1.0, 0.0], [0.0, 1.0]]}"#;

#[test]
fn pettis_counterexample_report_carries_the_expected_values() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = vmlab(
        dir.path(),
        &["counterexample", "pettis", "--levels", "3", "--p", "2",
          "--out", out_path.to_str().unwrap()],
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let results = &report["results"];
    assert!((results["dunford_norm"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(
        (results["bochner_norm"]["value"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-12
    );
    let sv: Vec<f64> = results["sv_profile"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(sv.len(), 3);
    assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-9));
    // file and stdout agree
    assert_eq!(stdout_json(&out), report);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    // 64: unknown subcommand
    let out = vmlab(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    let err = stdout_json(&out);
    assert_eq!(err["error"]["kind"], "unknown-subcommand");

    // 65: malformed JSON
    let bad = write(dir.path(), "bad.json", "{\"masses\": [0.5,");
    let out = vmlab(dir.path(), &["bochner-norm", "--function", &bad, "--p", "2"]);
    assert_eq!(out.status.code(), Some(65));

    // 2: guard violation (brute-force variation beyond the atom guard)
    let masses: Vec<String> = (0..9).map(|_| format!("{}", 1.0 / 9.0)).collect();
    let atom_values: Vec<String> = (0..9).map(|_| "[1.0]".to_string()).collect();
    let measure = write(
        dir.path(),
        "m9.json",
        &format!(
            r#"{{"space": {{"masses": [{}]}}, "codomain": {{"dim": 1, "q": 2.0}}, "atom_values": [{}]}}"#,
            masses.join(", "),
            atom_values.join(", ")
        ),
    );
    let out = vmlab(
        dir.path(),
        &["variation", "--measure", &measure, "--p", "2", "--method", "brute"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = stdout_json(&out);
    assert_eq!(err["error"]["kind"], "too-many-atoms");

    // 2: invalid instance (valid JSON, masses do not sum to one)
    let badmass = write(
        dir.path(),
        "badmass.json",
        r#"{"space": {"masses": [0.5, 0.6]}, "codomain": {"dim": 1, "q": 2.0},
           "values": [[1.0], [1.0]]}"#,
    );
    let out = vmlab(dir.path(), &["bochner-norm", "--function", &badmass, "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_modulo_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    // q = 3 puts the maximization in the heuristic (seeded) regime
    let f = write(
        dir.path(),
        "f.json",
        r#"{"space": {"masses": [0.5, 0.5]}, "codomain": {"dim": 2, "q": 3.0},
           "values": [[1.0, 0.25], [-0.5, 1.0]]}"#,
    );
    let strip = |out: &Output| {
        let mut v = stdout_json(out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    let a = vmlab(dir.path(), &["dunford-norm", "--function", &f, "--p", "1.5", "--seed", "7"]);
    let b = vmlab(dir.path(), &["dunford-norm", "--function", &f, "--p", "1.5", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(strip(&a), strip(&b));
    // the report declares the heuristic flag
    assert_eq!(stdout_json(&a)["results"]["certification"], "heuristic-lower-bound");
}

#[test]
fn csv_emission_has_index_value_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", FUNCTION_2ATOM);
    let csv_path = dir.path().join("profile.csv");
    let out = vmlab(
        dir.path(),
        &["svprofile", "--function", &f, "--csv", csv_path.to_str().unwrap()],
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 2);
    for (i, row) in rows.iter().enumerate() {
        let (index, value) = row.split_once(',').unwrap();
        assert_eq!(index.parse::<usize>().unwrap(), i + 1);
        let parsed: f64 = value.parse().unwrap();
        assert!((parsed - 0.5f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn composed_function_report_round_trips_as_an_instance() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", FUNCTION_2ATOM);
    let u = write(
        dir.path(),
        "u.json",
        r#"{"domain": {"dim": 2, "q": 2.0}, "codomain": {"dim": 2, "q": 2.0},
           "entries": [[0.0, -1.0], [1.0, 0.0]]}"#,
    );
    let out = vmlab(dir.path(), &["compose", "--operator", &u, "--function", &f]);
    assert!(out.status.success());
    let composed = stdout_json(&out)["results"]["composed_function"].clone();
    let g = write(dir.path(), "g.json", &serde_json::to_string(&composed).unwrap());
    let out = vmlab(dir.path(), &["bochner-norm", "--function", &g, "--p", "2"]);
    assert!(out.status.success());
    // rotation preserves the Bochner norm
    assert!((stdout_json(&out)["results"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn ui_modulus_accepts_repeated_deltas() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", FUNCTION_2ATOM);
    let out = vmlab(
        dir.path(),
        &["ui-modulus", "--function", &f, "--p", "2", "--delta", "0.5", "--delta", "1.0"],
    );
    assert!(out.status.success());
    let entries = stdout_json(&out)["results"]["entries"].as_array().unwrap().clone();
    assert_eq!(entries.len(), 2);
    let eta_half = entries[0]["value"].as_f64().unwrap();
    let eta_one = entries[1]["value"].as_f64().unwrap();
    assert!((eta_half - 0.5).abs() < 1e-9);
    assert!((eta_one - 0.5).abs() < 1e-9); // ‖f‖² = 1/2 with one atom already
}

#[test]
fn thread_cap_env_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", FUNCTION_2ATOM);
    let out = Command::new(env!("CARGO_BIN_EXE_vmlab"))
        .args(["bochner-norm", "--function", &f, "--p", "2"])
        .env("VMLAB_THREADS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_vmlab"))
        .args(["bochner-norm", "--function", &f, "--p", "2"])
        .env("VMLAB_THREADS", "4")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["provenance"]["threads"], 4);
}

#[test]
fn verify_single_criterion_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = vmlab(dir.path(), &["verify", "--suite", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("criterion  9"));
    assert!(text.contains("PASS"));
    // out-of-range suite rejected
    let out = vmlab(dir.path(), &["verify", "--suite", "12"]);
    assert_eq!(out.status.code(), Some(2));
}
