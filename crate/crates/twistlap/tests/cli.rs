//! End-to-end behaviour of the `twistlap` binary.

use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn twistlap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlap"))
        .args(args)
        .env_remove("TWISTLAP_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let out = twistlap(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    validate(&doc);
    doc
}

fn validate(doc: &Value) {
    let schema: Value = serde_json::from_str(include_str!("../schema/output.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn sphere_spectrum_example() {
    let doc = json(&["spectrum", "--geometry", "sphere", "--R", "2", "--degree", "-1", "--operator", "dolbeault", "--grid", "400", "--k", "5", "--format", "json"]);
    let eig = floats(&doc["eigenvalues"]);
    assert_eq!(eig.len(), 5);
    assert!((eig[0] - 0.5).abs() < 1e-3);
    assert_eq!(doc["command"], "spectrum");
    assert_eq!(doc["params"]["seed"], 0);
    assert!((doc["oracle"][0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!(floats(&doc["residuals"]).iter().all(|r| *r <= 1e-9));
}

#[test]
fn torus_spectrum_example() {
    let doc = json(&["spectrum", "--geometry", "torus", "--vol", "1", "--degree", "-3", "--grid", "64", "--k", "9"]);
    let clusters = doc["clusters"].as_array().unwrap();
    assert_eq!(clusters[0]["multiplicity"], 3);
    assert!((clusters[0]["value"].as_f64().unwrap() / (6.0 * PI) - 1.0).abs() < 0.02);
    assert_eq!(doc["oracle"][0]["multiplicity"], 3);
}

#[test]
fn usage_errors_exit_with_2() {
    let out = twistlap(&["spectrum", "--geometry", "sphere", "--R", "2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(code(&twistlap(&["verify", "--theorem", "main", "--geometry", "sphere", "--degrees", "-1..x"])), 2);
    assert_eq!(code(&twistlap(&["convergence", "--geometry", "sphere", "--degree", "-1", "--grids", "100,200"])), 2);
    assert_eq!(code(&twistlap(&["oracle", "bound-dirac-complex", "--degree", "1", "--vol", "1"])), 2);
    assert_eq!(code(&twistlap(&["spectrum", "--geometry", "sphere", "--degree", "1"])), 2);
    assert_eq!(code(&twistlap(&["spectrum", "--geometry", "torus", "--degree", "-1", "--mode", "0"])), 2);
    assert_eq!(code(&twistlap(&["spectrum", "--geometry", "sphere", "--degree", "-1", "--format", "xml"])), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_twistlap"))
        .args(["oracle", "he-constant", "--degree", "-1", "--vol", "1"])
        .env("TWISTLAP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn numerical_failure_exits_with_3() {
    let out = twistlap(&["spectrum", "--geometry", "torus", "--degree", "-1", "--grid", "24", "--k", "1", "--tol", "1e-300"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bound_violation_exits_with_1() {
    // The discrete ground state lies slightly below the bound; a zero-width
    // slack turns that into a reported violation.
    let out = twistlap(&["verify", "--theorem", "main", "--geometry", "torus", "--degrees", "-1", "--grid", "16", "--slack", "1e-12"]);
    assert_eq!(code(&out), 1);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    validate(&doc);
    assert_eq!(doc["report"]["all_satisfied"], false);
}

#[test]
fn verify_full_sphere_sweep() {
    let doc = json(&["verify", "--theorem", "all", "--geometry", "sphere", "--R", "2", "--degrees", "-1..-6", "--grid", "800"]);
    let rows = doc["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|r| r["bound_satisfied"] == true && r["sharp"] == true));
    let order: Vec<(String, i64)> = rows.iter().map(|r| (r["theorem"].as_str().unwrap().to_owned(), r["degree"].as_i64().unwrap())).collect();
    assert_eq!(order[0], ("main".into(), -1));
    assert_eq!(order[5], ("main".into(), -6));
    assert_eq!(order[17], ("cor2".into(), -6));
}

#[test]
fn verify_torus_sweep_is_sharp() {
    let doc = json(&["verify", "--theorem", "main", "--geometry", "torus", "--vol", "1", "--degrees", "-1..-4", "--grid", "64"]);
    let rows = doc["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (r, d) in rows.iter().zip(1..) {
        assert_eq!(r["sharp"], true);
        assert_eq!(r["ground_multiplicity"], d);
    }
}

#[test]
fn convergence_order_and_csv_round_trip() {
    let args = ["convergence", "--geometry", "sphere", "--R", "2", "--degree", "-1", "--grids", "100,200,400"];
    let doc = json(&args);
    let p = doc["report"]["order"]["estimated"].as_f64().unwrap();
    assert!((p - 2.0).abs() < 0.1, "{p}");

    let csv_args: Vec<&str> = args.iter().copied().chain(["--format", "csv"]).collect();
    let out = twistlap(&csv_args);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "grid,value,error,observed_order");
    let json_rows = doc["report"]["rows"].as_array().unwrap();
    for (line, row) in lines.zip(json_rows) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0].parse::<u64>().unwrap(), row["grid"].as_u64().unwrap());
        for (i, key) in [(1, "value"), (2, "error")] {
            let parsed: f64 = fields[i].parse().unwrap();
            assert_eq!(parsed.to_bits(), row[key].as_f64().unwrap().to_bits(), "{key}");
            assert_eq!(format!("{parsed:.16e}"), fields[i]);
        }
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = std::env::temp_dir().join(format!("twistlap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "3", "0"].iter().enumerate() {
        let path = dir.join(format!("out{i}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_twistlap"))
            .args(["verify", "--geometry", "torus", "--degrees", "-1..-3", "--grid", "24", "--seed", "7", "--out"])
            .arg(&path)
            .env("TWISTLAP_THREADS", threads)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let a = twistlap(&["spectrum", "--geometry", "torus", "--degree", "-2", "--grid", "32", "--k", "4", "--format", "csv"]);
    let b = twistlap(&["spectrum", "--geometry", "torus", "--degree", "-2", "--grid", "32", "--k", "4", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_examples() {
    let doc = json(&["oracle", "bound-main", "--n", "2", "--degree", "-1", "--rank", "1", "--vol", "1"]);
    assert!((doc["report"]["value"].as_f64().unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
    let doc = json(&["oracle", "sphere-dirac", "--R", "2", "--degL", "0", "--qmax", "3"]);
    let v: Vec<f64> = doc["oracle"].as_array().unwrap().iter().map(|o| o["value"].as_f64().unwrap()).collect();
    assert_eq!(v, vec![1.0, 2.0, 3.0, 4.0]);
    let doc = json(&["oracle", "dirac-from-dolbeault", "--values", "0,8"]);
    assert_eq!(doc["oracle"][0]["value"], 4.0);
    let doc = json(&["oracle", "torus-dolbeault", "--vol", "1", "--degree", "-3", "--kmax", "1"]);
    assert_eq!(doc["oracle"][1]["multiplicity"], 3);
    let doc = json(&["oracle", "twist-degree", "--degree", "-1", "--genus", "0"]);
    assert_eq!(doc["report"]["value"], -2);
    let out = twistlap(&["oracle", "sphere-dolbeault", "--R", "2", "--degree", "-1", "--qmax", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "index,value,multiplicity\n0,5.0000000000000000e-1,\n1,2.0000000000000000e0,\n2,4.5000000000000000e0,\n");
}

#[test]
fn schema_subcommand_prints_the_published_schema() {
    let out = twistlap(&["schema"]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, include_bytes!("../schema/output.schema.json"));
}
