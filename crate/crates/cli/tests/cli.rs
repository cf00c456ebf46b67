use std::path::Path;
use std::process::{Command, Output};

use ssflab_cli::{ExperimentConfig, ExperimentRecord};

fn ssflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssflab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const MINIMAL_WEGNER: &str = r#"{
  "experiment": "wegner",
  "seed": 3,
  "model": { "dimension": 1, "side": 12, "spacing": 1.0 },
  "numeric": { "epsilon_grid": [0.25, 0.125], "realizations": 2 }
}"#;

#[test]
fn minimal_wegner_writes_record_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "w.json", MINIMAL_WEGNER);
    let out = ssflab(&["run", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = ExperimentRecord::load(&dir.path().join("wegner.record.json")).unwrap();
    assert_eq!(rec.payload["counts"].as_array().unwrap().len(), 2);
    assert_eq!(rec.tool_version, env!("CARGO_PKG_VERSION"));
    let table = std::fs::read_to_string(dir.path().join("wegner.wegner.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert!(lines.iter().any(|l| l.starts_with("# units: epsilon [energy]")));
    assert!(lines.contains(&"epsilon,mean,std_error,s_eps,s_2eps,ratio,ratio_single"));
    assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn out_of_range_epsilon_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", &MINIMAL_WEGNER.replace("0.125", "0.7"));
    let out = ssflab(&["run", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon_grid"));
}

#[test]
fn missing_realizations_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", &MINIMAL_WEGNER.replace(r#", "realizations": 2"#, ""));
    let out = ssflab(&["run", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("realizations"));
}

#[test]
fn parse_error_names_field_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", &MINIMAL_WEGNER.replace(r#""side": 12"#, r#""side": "twelve""#));
    let out = ssflab(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("model.side"));
    let cfg = write(dir.path(), "typo.json", &MINIMAL_WEGNER.replace("realizations", "realisations"));
    let out = ssflab(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("realisations"));
}

#[test]
fn dense_cap_exceeded_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let text = MINIMAL_WEGNER.replace(r#""realizations": 2"#, r#""realizations": 2, "dense_cap": 8"#);
    let cfg = write(dir.path(), "cap.json", &text);
    let out = ssflab(&["run", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn rerun_reproduces_hash_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = write(dir.path(), "w.json", &MINIMAL_WEGNER.replace(r#""realizations": 2"#, r#""realizations": 16"#));
    let first = ssflab(&["run", &cfg, "--out-dir", d, "--threads", "1"]);
    assert!(first.status.success());
    let record = dir.path().join("wegner.record.json");
    let second = ssflab(&["rerun", record.to_str().unwrap(), "--out-dir", d, "--threads", "4"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn seed_override_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = write(dir.path(), "w.json", MINIMAL_WEGNER);
    let out = ssflab(&["run", &cfg, "--out-dir", d, "--seed-override", "99"]);
    assert!(out.status.success());
    let rec = ExperimentRecord::load(&dir.path().join("wegner.record.json")).unwrap();
    assert_eq!(rec.config.seed, 99);
}

#[test]
fn config_round_trips_through_record() {
    let cfg = ExperimentConfig::from_json(MINIMAL_WEGNER).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let rec = ssflab_cli::execute(&cfg, dir.path()).unwrap();
    let stored = ExperimentRecord::load(&dir.path().join("wegner.record.json")).unwrap();
    assert_eq!(stored.config, cfg);
    assert_eq!(stored.payload, rec.payload);
    assert_eq!(ssflab_cli::payload_hash(&stored.payload), rec.payload_sha256);
}

#[test]
fn list_and_describe() {
    let out = ssflab(&["list"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 8);
    let out = ssflab(&["describe", "wegner"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Theorem 3") && text.contains("eps-scaling"));
    assert_eq!(ssflab(&["describe", "bogus"]).status.code(), Some(2));
}

#[test]
fn ssf_curve_table_is_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"experiment": "ssf-identities", "seed": 1,
                  "model": {"dimension": 1, "side": 8, "spacing": 1.0},
                  "numeric": {"trials": 3}}"#;
    let path = write(dir.path(), "s.json", cfg);
    assert!(ssflab(&["run", &path, "--out-dir", dir.path().to_str().unwrap()]).status.success());
    let table = std::fs::read_to_string(dir.path().join("ssf-identities.ssf.csv")).unwrap();
    assert!(table.contains("# units: breakpoint [energy], value [count]"));
    assert!(table.contains("\nbreakpoint,value\n"));
}
