use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn coex(args: &[&str]) -> (i32, Value) {
    coex_env(args, &[])
}

fn coex_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coex"));
    cmd.args(args).env_remove("COEX_MAX_GROUND");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

#[test]
fn verify_exit_codes() {
    let (code, r) = coex(&["verify", &fixture("meet_c2xc3.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["report"]["pairs_checked"], 27);

    let (code, r) = coex(&["verify", &fixture("penta_bad_pair.json")]);
    assert_eq!(code, 1);
    let v = &r["report"]["violations"][0];
    assert_eq!((v["axiom"].as_str(), &v["X"], &v["A"]), (Some("A3"), &serde_json::json!([]), &serde_json::json!([0, 1])));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    let text = std::fs::read_to_string(fixture("meet_c2xc3.json")).unwrap();
    f.write_all(&text.as_bytes()[..text.len() / 2]).unwrap();
    let (code, r) = coex(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "input");

    let (code, _) = coex(&["verify", "/nonexistent/beta.json"]);
    assert_eq!(code, 2);
}

#[test]
fn ground_cap_from_environment() {
    let (code, r) = coex_env(&["verify", &fixture("meet_c2xc3.json")], &[("COEX_MAX_GROUND", "2")]);
    assert_eq!(code, 3);
    assert_eq!(r["error"]["kind"], "size_exceeded");
    let (code, _) = coex_env(&["verify", "--max-ground", "3", &fixture("meet_c2xc3.json")], &[("COEX_MAX_GROUND", "2")]);
    assert_eq!(code, 0);
}

#[test]
fn certify_outputs() {
    let (code, r) = coex(&["certify", &fixture("meet_c2xc3.json")]);
    assert_eq!(code, 0);
    let cert = &r["certificate"];
    assert_eq!(cert["observables"].as_array().unwrap().len(), 8);
    assert_eq!(cert["range_witnesses"].as_array().unwrap().len(), 3);
    assert_eq!(cert["projective_checks"]["compatibility"], 416);

    let (code, r) = coex(&["certify", &fixture("penta_bad_pair.json")]);
    assert_eq!((code, &r["certified"]), (1, &Value::Bool(false)));

    // Hermitian product witness, certified within tolerance
    let (_, p) = coex(&["product", &fixture("qubit_commuting.json")]);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(p["beta"].to_string().as_bytes()).unwrap();
    let (code, r) = coex(&["certify", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(r["certificate"]["projective_checks"]["max_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn oracle_agreement() {
    for name in ["CHAIN4", "BOOL2", "PENTA"] {
        let (code, r) = coex(&["oracle", "--fixture", name]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(r["all_agree"], true);
        assert_eq!(r["complete"], true);
    }
    let (code, r) = coex(&["oracle", "--fixture", "PENTA", "--max-ground", "1"]);
    assert_eq!(code, 0);
    assert!(r["rows"].as_array().unwrap().iter().all(|row| row["coexistent"] == true));

    let (code, r) = coex(&["oracle", "--fixture", "QUBIT"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (2, Some("unsupported_carrier")));

    let (code, r) = coex(&["oracle", "--fixture", "CHAIN4", "--node-budget", "3"]);
    assert_eq!(code, 3);
    assert!(!r["rows"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_accepts_algebra_files() {
    let (code, r) = coex(&["oracle", "--algebra", &fixture("C2xC3.json"), "--max-ground", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["rows"].as_array().unwrap().len(), 1 + 6 + 15);
}

#[test]
fn pair_product_meet() {
    let (code, r) = coex(&["pair", "--fixture", "CHAIN4", "[1]", "[2]"]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"], serde_json::json!([[0], [1]]));
    let (code, r) = coex(&["pair", "--fixture", "PENTA", "[1,0]", "[1,1]"]);
    assert_eq!((code, &r["exhaustive"]), (1, &Value::Bool(true)));
    let (code, r) = coex(&["pair", "--fixture", "QUBIT", "[[0.5,0],[0,0.5]]", "[[0.5,0],[0,0.5]]"]);
    assert_eq!((code, &r["exhaustive"]), (0, &Value::Bool(false)));

    let (code, r) = coex(&["product", &fixture("qubit_commuting.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["factorization"]["passed"], true);

    let (code, r) = coex(&["meet", "--fixture", "C2xC3", "[[1,1],[0,2],[1,0]]"]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(fixture("meet_c2xc3.json")).unwrap();
    assert_eq!(r, serde_json::from_str::<Value>(&text).unwrap());
    let (code, r) = coex(&["meet", "--fixture", "PENTA", "[[1,0]]"]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "not_mv");
}

#[test]
fn non_commuting_product_is_a_failure() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let doc = r#"{"algebra": {"group": {"kind": "hermitian", "dimension": 2}, "unit": [[1,0],[0,1]]},
                 "ground": [[[1,0],[0,0]], [[0.5,0.5],[0.5,0.5]]]}"#;
    f.write_all(doc.as_bytes()).unwrap();
    let (code, r) = coex(&["product", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["non_commuting"]["residual"], 0.5);
}

#[test]
fn output_is_byte_stable() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_coex")).args(["certify", &fixture("meet_c2xc3.json")]).output().unwrap().stdout
    };
    assert_eq!(run(), run());
}
