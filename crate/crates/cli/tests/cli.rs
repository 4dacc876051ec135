use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn rbcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbcm")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = rbcm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn check_schema(name: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{name}: {msgs:?}");
}

#[test]
fn factor_plus_over_z9() {
    let doc = json_ok(&["factor", "--p", "3", "--k", "2", "--n", "8", "--target", "plus"]);
    check_schema("factor", &doc);
    assert_eq!(doc["product_ok"], true);
    assert_eq!(doc["modulus"], 9);
    let fs = doc["factors"].as_array().unwrap();
    assert_eq!(fs.len(), 2);
    // x^8+1 = (x^4+5x^2+8)(x^4+4x^2+8) over Z_9
    let coeffs: Vec<Value> = fs.iter().map(|f| f["coeffs"].clone()).collect();
    assert!(coeffs.contains(&serde_json::json!([8, 0, 5, 0, 1])));
    assert!(coeffs.contains(&serde_json::json!([8, 0, 4, 0, 1])));
    for (target, n) in [("minus", "8"), ("radical", "6")] {
        let doc = json_ok(&["factor", "--p", "3", "--k", "2", "--n", n, "--target", target]);
        check_schema("factor", &doc);
        assert_eq!(doc["product_ok"], true, "{target}");
    }
}

#[test]
fn lift_and_ideals() {
    let doc = json_ok(&["lift", "--p", "5", "--k", "2", "--base", "2,1", "--target", "1,0,1"]);
    check_schema("lift", &doc);
    assert_eq!(doc["lift"], serde_json::json!([7, 1]));

    let doc = json_ok(&["ideals", "--p", "3", "--k", "2", "--n", "2", "--label", "4,1"]);
    check_schema("ideals", &doc);
    // Z_9[x]/(x^2+1) is a Galois ring: its ideals are the three powers of 3
    assert_eq!(doc["ideals"].as_array().unwrap().len(), 3);

    let doc = json_ok(&["ideals", "--p", "5", "--k", "1", "--n", "2", "--max-index", "5", "--admissible"]);
    check_schema("ideals", &doc);
    assert_eq!(doc["ideals"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_and_oracle_documents() {
    let doc = json_ok(&["classify", "cyclic", "--p", "5", "--k", "1", "--n", "2"]);
    check_schema("maps", &doc);
    assert_eq!(doc["maps"].as_array().unwrap().len(), 2);

    let runs: &[&[&str]] = &[
        &["classify", "elementary", "--p", "3", "--m", "2", "--n", "3"],
        &["classify", "elementary", "--p", "2", "--m", "2", "--n", "1", "--type", "ii"],
        &["classify", "two-group", "--k", "2", "--n", "2"],
        &["classify", "coprime", "--p", "3", "--k", "2", "--n", "2"],
        &["classify", "rank2", "--p", "3", "--k", "2", "--k2", "1", "--n", "3"],
        &["classify", "generic", "--group", "Z9xZ3", "--n", "3"],
        &["oracle", "--group", "Z3xZ3", "--valence", "6"],
    ];
    for args in runs {
        check_schema("maps", &json_ok(args));
    }

    let doc = json_ok(&["crosscheck", "--group", "Z9xZ3", "--valence", "6"]);
    check_schema("crosscheck", &doc);
    assert_eq!(doc["agree"], true);
}

#[test]
fn table_format_and_export() {
    let out = rbcm(&["classify", "cyclic", "--p", "5", "--k", "1", "--n", "2", "--format", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4, "{text}");

    let out = rbcm(&["export-map", "--modulus", "5", "--n", "2", "--gen", "2,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    // Z5 with valence 4: V=5, E=10, F=5, torus
    assert_eq!(lines.next(), Some("5 10 5 1"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("rbcm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.json");
    let args = ["factor", "--p", "7", "--k", "1", "--n", "6"];
    let out = rbcm(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), rbcm(&args).stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(rbcm(&["classify", "--bogus"]).status.code(), Some(2));
    assert_eq!(rbcm(&["factor", "--p", "4", "--k", "1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(rbcm(&["factor", "--p", "3", "--k", "0", "--n", "2"]).status.code(), Some(2));
    assert_eq!(rbcm(&["ideals", "--p", "3", "--k", "1", "--n", "2", "--label", "1,0", "--admissible"]).status.code(), Some(2));

    // domain errors
    let out = rbcm(&["export-map", "--modulus", "5", "--n", "1", "--gen", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: NotAdmissible"));
    assert_eq!(rbcm(&["lift", "--p", "3", "--k", "2", "--base", "1,1", "--target", "1,0,0,1"]).status.code(), Some(1));
    assert_eq!(rbcm(&["oracle", "--group", "Z3x", "--valence", "2"]).status.code(), Some(1));
    assert_eq!(rbcm(&["oracle", "--group", "Z2^9", "--valence", "2"]).status.code(), Some(1));
    // the radical sum needs p | n
    assert_eq!(rbcm(&["factor", "--p", "3", "--k", "2", "--n", "8", "--target", "radical"]).status.code(), Some(1));
    assert_eq!(rbcm(&["ideals", "--p", "3", "--k", "1", "--n", "2", "--label", "9,9"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let runs: &[&[&str]] = &[
        &["factor", "--p", "3", "--k", "3", "--n", "12", "--target", "radical"],
        &["classify", "rank2", "--p", "3", "--k", "2", "--k2", "2", "--n", "3"],
        &["oracle", "--group", "Z4xZ2", "--valence", "4"],
        &["crosscheck", "--group", "Z3^2", "--valence", "4", "--format", "table"],
    ];
    for args in runs {
        let a = rbcm(args);
        let b = rbcm(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
