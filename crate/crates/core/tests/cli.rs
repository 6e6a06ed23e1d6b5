use std::fs;
use std::process::Command;

use serde_json::Value;

fn qltc(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qltc")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, stderr)
}

#[test]
fn build_toric_reports_rank() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toric3.json");
    let (code, report, _) = qltc(&["build", "toric:3", "--code-out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], "qltc.report/1");
    assert_eq!(report["code"]["rank"]["value"], 16);
    let (code, report, _) = qltc(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["code"]["n"], 18);
}

#[test]
fn build_steane_and_reject_non_orthogonal_css() {
    let (code, report, _) = qltc(&["build", "steane"]);
    assert_eq!(code, 0);
    assert_eq!(report["code"]["n"], 7);
    assert_eq!(report["code"]["warnings"].as_array().unwrap().len(), 1);
    let (code, _, stderr) = qltc(&["build", "steane", "--strict-degree"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("generators"), "{stderr}");

    let dir = tempfile::tempdir().unwrap();
    let hx = dir.path().join("hx.txt");
    let hz = dir.path().join("hz.txt");
    fs::write(&hx, "1 3\n0 1\n").unwrap();
    fs::write(&hz, "1 3\n0 2\n").unwrap();
    let spec = format!("css:{},{}", hx.display(), hz.display());
    let (code, _, stderr) = qltc(&["build", &spec]);
    assert_eq!(code, 1);
    assert!(stderr.contains("orthogonal"), "{stderr}");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2 3\n0 1\n0 7\n").unwrap();
    let spec = format!("classical:{}", bad.display());
    let (code, _, stderr) = qltc(&["build", &spec]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn analyze_toric_distance_and_steane_profile() {
    let (code, report, _) = qltc(&["analyze", "toric:4", "--distance"]);
    assert_eq!(code, 0);
    assert_eq!(report["distance"]["bound"]["exactness"], "exact");
    assert_eq!(report["distance"]["bound"]["value"], 4);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let (code, report, _) = qltc(&["analyze", "steane", "--profile", "--wcap", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = report["profile"]["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["delta"].as_f64().unwrap() <= 2.0 / 7.0 + 1e-12));
    let table = fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("weight,delta,R,r\n"));
}

#[test]
fn analyze_expansion_pairs_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toric4.json");
    qltc(&["build", "toric:4", "--code-out", path.to_str().unwrap()]);
    let (code, report, _) = qltc(&["analyze", path.to_str().unwrap(), "--expansion", "--sets", "2"]);
    assert_eq!(code, 0);
    assert_eq!(report["expansion"]["epsilon"]["exactness"], "exact");
    assert_eq!(report["expansion"]["epsilon"]["value"], 0.25);
}

#[test]
fn attacks_emit_reports_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("row.csv");
    let (code, report, _) = qltc(&["attack", "toric:4", "expander", "--delta", "0.03", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["bound"]["label"], "2*eps*");
    let table = fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("delta,R,r,bound,bound_holds\n"));
    assert!(table.trim_end().ends_with("true"));

    let (code, report, _) = qltc(&["attack", "steane", "alphabet", "--delta", "0.14"]);
    assert_eq!(code, 0);
    let pre = &report["result"]["preconditions"][0];
    assert_eq!(pre["holds"], false);

    let (code, report, _) = qltc(&["attack", "hgp:ring8,ring8", "island", "--trials", "500", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["exactness"], "sampled");
    assert_eq!(report["result"]["trials"], 500);

    let (code, _, stderr) = qltc(&["attack", "toric:4", "island", "--trials", "10"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("--seed"));
}

#[test]
fn verify_small_codes_and_refuse_large_ones() {
    let (code, report, _) = qltc(&["verify", "steane"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["passes"], true);
    assert!(report["result"]["detectability"]["max_residual"].as_f64().unwrap() < 1e-9);
    let (code, report, _) = qltc(&["verify", "toric:2"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["code_dimension"], 4);
    let (code, report, _) = qltc(&["verify", "toric:4"]);
    assert_eq!(code, 0);
    assert_eq!(report["refused"], true);
}

#[test]
fn config_file_overrides_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"schema":"qltc.config/1","source":"toric:5","attack":{"delta":0.02,"seed":3}}"#).unwrap();
    let (code, report, _) = qltc(&["attack", "toric:3", "expander", "--delta", "0.5", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["source"], "toric:5");
    assert_eq!(report["result"]["weight"], 1);

    fs::write(&cfg, r#"{"schema":"qltc.config/1","delta":0.1}"#).unwrap();
    let (code, _, stderr) = qltc(&["attack", "toric:3", "expander", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("unknown field"), "{stderr}");
}

#[test]
fn identical_seeds_give_identical_output() {
    let args = ["attack", "hgp:ring6,ring6", "island", "--trials", "200", "--seed", "11"];
    let a = Command::new(env!("CARGO_BIN_EXE_qltc")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_qltc"))
        .args(args)
        .env("QLTC_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_qltc"))
        .args(args)
        .env("QLTC_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
