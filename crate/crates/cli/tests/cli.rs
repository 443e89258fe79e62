//! End-to-end behavior of the `dualis` binary: exit codes, report files,
//! fixture diffs, and stdout formats.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dualis"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dualis-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_map_example_passes() {
    let out = bin()
        .args(["verify-map", "--seed", "7", "--dims", "2,4", "--arities", "1:0,1:1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] spectral:n2:p1q0"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn verification_failure_still_writes_report() {
    let json = tmp("failing.json");
    let out = bin()
        .args(["verify-map", "--seed", "7", "--dims", "2", "--arities", "1:0", "--tol", "1e-18"])
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&json).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema"], "dualis/1");
    assert!(doc["summary"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn report_checks_are_sorted_by_name() {
    let json = tmp("sorted.json");
    let out = bin()
        .args(["equivalence", "--seed", "5"])
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn recover_spectrum_prints_clean_integers() {
    let out = bin()
        .args(["recover-spectrum", "--moments", "6,14,36", "--d", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 2 3");
}

#[test]
fn recover_spectrum_accepts_power_sum_json() {
    let input = tmp("sums.json");
    std::fs::write(&input, r#"{"alpha":[1,1],"sums":[0.0,2.0,0.0,2.0]}"#).unwrap();
    let out = bin()
        .args(["recover-spectrum", "--d", "4"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "-1 0 0 1");
}

#[test]
fn kw_writes_csv_with_expected_columns() {
    let csv = tmp("kw.csv");
    let out = bin()
        .args(["kw", "--K", "0.4406868", "--lattice", "4x4"])
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "K,K_dual,Z,Z_dual,residual_f,residual_Z");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 6);
    let residual_z: f64 = row[5].parse().unwrap();
    assert!(residual_z <= 1e-9, "residual_Z {residual_z}");
}

#[test]
fn kw_histogram_matches_2x2_enumeration() {
    let hist = tmp("hist.json");
    let out = bin()
        .args(["kw", "--lattice", "2x2"])
        .arg("--histogram")
        .arg(&hist)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&hist).unwrap()).unwrap();
    assert_eq!(doc["energies"], serde_json::json!([-8.0, 0.0, 8.0]));
    assert_eq!(doc["counts"], serde_json::json!([2, 12, 2]));
}

#[test]
fn malformed_json_input_is_a_parse_error() {
    let bad = tmp("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = bin().args(["verify-map"]).arg("--map").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn bad_flag_values_are_parse_errors() {
    for args in [
        vec!["verify-map", "--dims", "two"],
        vec!["verify-map", "--arities", "1-0"],
        vec!["kw", "--lattice", "4by4"],
        vec!["approx-audit", "--scales", "-0.1"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn env_seed_matches_flag_seed() {
    let a = tmp("env-a.json");
    let b = tmp("env-b.json");
    let out = bin()
        .args(["equivalence", "--seed", "23"])
        .arg("--json")
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["equivalence"])
        .env("DUALIS_SEED", "23")
        .arg("--json")
        .arg(&b)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn fixtures_round_trip_and_detect_corruption() {
    let dir = tmp("fixtures");
    let out = bin().args(["fixtures", "generate"]).arg("--dir").arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin().args(["fixtures", "check"]).arg("--dir").arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    // Corrupt one value by 1e-3: the check must fail and name the field.
    let golden = dir.join("golden.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&golden).unwrap()).unwrap();
    let old = doc["values"]["kw.kstar"].as_f64().unwrap();
    doc["values"]["kw.kstar"] = serde_json::json!(old + 1e-3);
    std::fs::write(&golden, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = bin().args(["fixtures", "check"]).arg("--dir").arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("kw.kstar"));

    // A missing golden file is an input error, not a verification failure.
    std::fs::remove_file(&golden).unwrap();
    let out = bin().args(["fixtures", "check"]).arg("--dir").arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_map_fixture_is_verifiable() {
    let dir = tmp("fixtures-map");
    let out = bin().args(["fixtures", "generate"]).arg("--dir").arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let map = dir.join("sample-map.json");
    let out = bin()
        .args(["verify-map", "--seed", "3"])
        .arg("--map")
        .arg(&map)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("spectral:loaded"));
}
