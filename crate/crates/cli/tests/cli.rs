use std::path::Path;
use std::process::{Command, Output};

fn plurispec(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plurispec"))
        .args(args)
        .env("PLURISPEC_OUT_DIR", out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const SEMICOMM: &str = r#"{
  "domain": "fock_plane",
  "lambdas": [2, 5, 10],
  "f": "(z+conj(z))/2",
  "g": "(z+conj(z))/2"
}"#;

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = plurispec(&["selftest"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn semicommutator_sweep_writes_decreasing_column_and_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "semi.json", SEMICOMM);
    let out = plurispec(
        &["quantize-semicomm", "--config", &cfg, "--jobs", "2"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // One summary line per λ, then the written files.
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("λ = ")).count(), 3);

    let csv = std::fs::read_to_string(dir.path().join("quantize-semicomm.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "lambda");
    let col = header.iter().position(|h| *h == "semicommutator").unwrap();
    let values: Vec<f64> = lines
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|&v| v > 0.0));
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");

    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("quantize-semicomm.json")).unwrap())
            .unwrap();
    assert!(json["version"].as_str().unwrap().starts_with("plurispec "));
    assert_eq!(json["command"], "quantize-semicomm");
    // Defaults are filled into the resolved config.
    assert_eq!(json["config"]["truncation"]["kind"], "scaled");
    assert_eq!(json["config"]["lambdas"].as_array().unwrap().len(), 3);
    assert_eq!(json["report"].as_array().unwrap().len(), 3);
}

#[test]
fn overrides_and_output_stem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "semi.json", SEMICOMM);
    let out = plurispec(
        &[
            "quantize-semicomm",
            "--config",
            &cfg,
            "--set",
            "lambdas=[4]",
            "--set",
            "output.stem=\"short\"",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("short.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("4e0,"));
}

#[test]
fn phh_check_meets_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "phh.json",
        r#"{"lambda": 0, "g": "z*conj(z)", "cutoffs": 3}"#,
    );
    let out = plurispec(&["phh-check", "--config", &cfg], dir.path());
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("phh-check.json")).unwrap()).unwrap();
    assert!(json["report"]["max_matched_discrepancy"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(
        dir.path(),
        "u.json",
        r#"{"domain": "fock_plane", "lambdas": [1], "f": "z", "colour": 1}"#,
    );
    let bad_symbol = write_config(
        dir.path(),
        "s.json",
        r#"{"domain": "fock_plane", "lambdas": [1], "f": "z*"}"#,
    );
    let descending = write_config(
        dir.path(),
        "d.json",
        r#"{"domain": "fock_plane", "lambdas": [2, 1], "f": "z"}"#,
    );
    let cases: [&[&str]; 6] = [
        &["quantize-norm", "--config", &unknown],
        &["quantize-norm", "--config", &bad_symbol],
        &["quantize-norm", "--config", &descending],
        &["quantize-norm"],
        &["quantize-norm", "--config", "/nonexistent/config.json"],
        &["frobnicate", "--config", &unknown],
    ];
    for args in cases {
        let out = plurispec(args, dir.path());
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn numeric_failure_exits_3_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    // 1/im(z) is infinite on the θ = 0 quadrature ray.
    let cfg = write_config(
        dir.path(),
        "n.json",
        r#"{"domain": "unit_disk", "lambdas": [1, 2], "f": "1/im(z)"}"#,
    );
    let out = plurispec(&["quantize-norm", "--config", &cfg], dir.path());
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("quantize-norm.csv.partial").exists());
    assert!(!dir.path().join("quantize-norm.csv").exists());
}
