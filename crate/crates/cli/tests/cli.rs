use std::path::Path;
use std::process::{Command, Output};

use macroreal::mrconds::Family;
use macroreal::scan::{evaluate_family, generate_scenario, ScenarioSpec};
use serde_json::Value;

fn run(dir: &Path, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_macroreal"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

const CLASSICAL: &str = r#"{
    "command": "evaluate",
    "scenario": {
        "dim": 3,
        "state": {"kind": "diagonal", "populations": [0.2, 0.3, 0.5]},
        "hamiltonian": {"kind": "zero"},
        "schedule": {"kind": "explicit", "times": [0.0, 1.0, 2.0]}
    }
}"#;

const QUTRIT: &str = r#"{
    "command": "evaluate",
    "families": ["LG3-QRS", "LG3-Nvalued"],
    "scenario": {
        "dim": 3,
        "state": {"kind": "pure_random"},
        "hamiltonian": {"kind": "random_hermitian"},
        "schedule": {"kind": "explicit", "times": [0.3, 1.1, 2.4]},
        "seed": 17
    }
}"#;

fn lg3_qubit(spacing: f64) -> String {
    format!(
        r#"{{
    "command": "evaluate",
    "families": ["LG3-dichotomic"],
    "scenario": {{
        "dim": 2,
        "state": {{"kind": "maximally_mixed"}},
        "hamiltonian": {{"kind": "spin_precession", "omega": 1.0}},
        "schedule": {{"kind": "equal", "count": 3, "spacing": {spacing}}}
    }}
}}"#
    )
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

#[test]
fn exit_code_reflects_violations() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), CLASSICAL, &[]).status.code(), Some(0));
    let violated = lg3_qubit(std::f64::consts::FRAC_PI_3);
    assert_eq!(run(dir.path(), &violated, &[]).status.code(), Some(1));
    // A generous tolerance absorbs the −1/2 violation.
    assert_eq!(run(dir.path(), &violated, &["--tol", "0.6"]).status.code(), Some(0));
}

#[test]
fn unknown_keys_are_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let bad = CLASSICAL.replacen("\"command\"", "\"colour\": \"red\", \"command\"", 1);
    let out = run(dir.path(), &bad, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    let nested = CLASSICAL.replace("\"kind\": \"zero\"", "\"kind\": \"zero\", \"omega\": 1");
    assert_eq!(run(dir.path(), &nested, &[]).status.code(), Some(2));
    assert!(!dir.path().join("out").join("report.csv").exists());
}

#[test]
fn qrs_family_emits_twenty_seven_rows() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), QUTRIT, &["--format", "table"]);
    let rows = csv_rows(&dir.path().join("out").join("report.csv"));
    let qrs = rows.iter().filter(|r| &r[2] == "LG3-QRS").count();
    assert_eq!(qrs, 27);
    assert_eq!(rows.iter().filter(|r| &r[2] == "LG3-Nvalued").count(), 27);
    assert!(!dir.path().join("out").join("report.json").exists());
}

#[test]
fn json_margins_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), QUTRIT, &[]);
    let text = std::fs::read_to_string(dir.path().join("out").join("report.json")).unwrap();
    let json: Value = serde_json::from_str(&text).unwrap();
    let spec: ScenarioSpec =
        serde_json::from_value(serde_json::from_str::<Value>(QUTRIT).unwrap()["scenario"].clone()).unwrap();
    let s = generate_scenario(&spec).unwrap();
    let mut expected = evaluate_family(&s, Family::Lg3Qrs).unwrap();
    expected.extend(evaluate_family(&s, Family::Lg3Nvalued).unwrap());
    let reports = json["conditions"][0]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), expected.len());
    for r in &expected {
        let id = r.id.to_string();
        let found = reports.iter().find(|x| x["id"] == id.as_str()).unwrap();
        assert_eq!(found["margin"].as_f64().unwrap().to_bits(), r.margin.to_bits(), "{id}");
    }
    // The CSV carries the same bits.
    for row in csv_rows(&dir.path().join("out").join("report.csv")) {
        let r = expected.iter().find(|r| r.id.to_string() == row[1]).unwrap();
        assert_eq!(row[4].parse::<f64>().unwrap().to_bits(), r.margin.to_bits());
    }
}

#[test]
fn empty_sections_are_omitted() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &lg3_qubit(0.5), &[]);
    let text = std::fs::read_to_string(dir.path().join("out").join("report.json")).unwrap();
    let json: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for absent in ["audit", "sweep", "extremum"] {
        assert!(!keys.contains(&absent), "{absent} present");
    }
    assert!(keys.contains(&"metadata") && keys.contains(&"conditions"));
    assert!(!dir.path().join("out").join("sweep.csv").exists());
    assert!(!dir.path().join("out").join("audit.csv").exists());
}

#[test]
fn fine_audit_writes_audit_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "command": "fine-audit",
        "batch": {"count": 20, "base_seed": 3},
        "scenario": {
            "dim": 2,
            "state": {"kind": "depolarized", "p": 0.8},
            "hamiltonian": {"kind": "random_hermitian"},
            "schedule": {"kind": "random", "count": 3, "max": 3.0}
        }
    }"#;
    let out = run(dir.path(), cfg, &[]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let rows = csv_rows(&dir.path().join("out").join("audit.csv"));
    assert_eq!(rows.len(), 20);
}

#[test]
fn readme_documents_every_family() {
    let readme = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    for f in Family::ALL {
        assert!(readme.contains(&format!("`{}`", f.tag())), "{} missing from README", f.tag());
    }
}
