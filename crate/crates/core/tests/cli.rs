use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tancert(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tancert"))
        .current_dir(cwd)
        .env_remove("TANCERT_OUT")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn certify_writes_a_checkable_certificate() {
    let dir = TempDir::new().unwrap();
    let o = tancert(dir.path(), &["--out", "certs", "certify", "main_lower"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("main_lower: certified"));
    let cert = dir.path().join("certs/cert-main_lower.json");
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"schema\": \"tancert-cert-v1\""));
    assert!(text.contains("\"status\": \"certified\""));

    let o = tancert(dir.path(), &["check", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("valid"));
}

#[test]
fn tampered_certificate_fails_check() {
    let dir = TempDir::new().unwrap();
    let o = tancert(dir.path(), &["--out", ".", "certify", "prop1_lower"]);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.path().join("cert-prop1_lower.json");
    let mut cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let boxes = cert["boxes"].as_array_mut().unwrap();
    assert!(boxes.len() > 1);
    boxes.remove(1);
    fs::write(&path, serde_json::to_string_pretty(&cert).unwrap()).unwrap();

    let o = tancert(dir.path(), &["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("gap"), "{}", stdout(&o));

    fs::write(&path, "{ not json").unwrap();
    assert_eq!(tancert(dir.path(), &["check", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn unknown_id_lists_the_catalog() {
    let dir = TempDir::new().unwrap();
    let o = tancert(dir.path(), &["certify", "cot_upper"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    for id in ["prop1_lower", "main_upper", "qi_upper", "lemma_phi"] {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn bad_arguments_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(tancert(dir.path(), &["certify"]).status.code(), Some(1));
    assert_eq!(tancert(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(tancert(dir.path(), &["certify", "main_lower", "--delta", "2.0"]).status.code(), Some(1));
    assert_eq!(tancert(dir.path(), &["crossover", "upper", "--tol", "1e-9"]).status.code(), Some(1));
}

#[test]
fn guard_without_near_zero_stage_is_undecided() {
    let dir = TempDir::new().unwrap();
    let o = tancert(dir.path(), &["--out", ".", "certify", "main_lower", "--no-near-zero"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("cert-main_lower.json")).unwrap();
    assert!(text.contains("\"status\": \"undecided\""));
    assert!(!text.contains("falsified"));
}

#[test]
fn output_directory_precedence() {
    let dir = TempDir::new().unwrap();
    let base = dir.path();
    fs::write(base.join("cfg.json"), r#"{ "out": "from_config" }"#).unwrap();

    assert_eq!(tancert(base, &["sequences", "--n-max", "5"]).status.code(), Some(0));
    assert!(base.join("out/sequences.csv").exists());

    let o = Command::new(env!("CARGO_BIN_EXE_tancert"))
        .current_dir(base)
        .env("TANCERT_OUT", base.join("from_env"))
        .args(["sequences", "--n-max", "5"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(base.join("from_env/sequences.csv").exists());

    let o = Command::new(env!("CARGO_BIN_EXE_tancert"))
        .current_dir(base)
        .env("TANCERT_OUT", base.join("from_env2"))
        .args(["--config", "cfg.json", "sequences", "--n-max", "5"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(base.join("from_config/sequences.csv").exists());
    assert!(!base.join("from_env2").exists());

    assert_eq!(tancert(base, &["--config", "cfg.json", "--out", "flag", "sequences", "--n-max", "5"]).status.code(), Some(0));
    assert!(base.join("flag/sequences.csv").exists());
}

#[test]
fn config_file_settings_and_strictness() {
    let dir = TempDir::new().unwrap();
    let base = dir.path();
    fs::write(base.join("cfg.json"), r#"{ "delta": "0x1p-3", "degree": 18, "threads": 2 }"#).unwrap();
    let o = tancert(base, &["--config", "cfg.json", "--out", ".", "certify", "prop1_upper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(base.join("cert-prop1_upper.json")).unwrap()).unwrap();
    assert_eq!(cert["config"]["delta"], "0x1p-3");
    assert_eq!(cert["config"]["degree"], 18);

    let o = tancert(base, &["--config", "cfg.json", "--out", ".", "certify", "prop1_upper", "--delta", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(base.join("cert-prop1_upper.json")).unwrap()).unwrap();
    assert_eq!(cert["config"]["delta"], "0x1.999999999999ap-3");

    fs::write(base.join("bad.json"), r#"{ "dleta": 0.1 }"#).unwrap();
    assert_eq!(tancert(base, &["--config", "bad.json", "certify", "prop1_upper"]).status.code(), Some(1));
}

#[test]
fn sequences_table() {
    let dir = TempDir::new().unwrap();
    let o = tancert(dir.path(), &["--out", ".", "sequences", "--n-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("sequences.csv")).unwrap();
    assert_eq!(stdout(&o).trim_end(), csv.trim_end());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,T,U,A,B");
    assert_eq!(lines.len(), 8);
    assert!(lines[1].starts_with("0,0,"));
    assert_eq!(lines[5], "4,4096,110592,99,38421");
}

#[test]
fn phi_crossover_and_replay() {
    let dir = TempDir::new().unwrap();
    let base = dir.path();
    let o = tancert(base, &["--out", ".", "phi", "--grid", "0.05:1.5:20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(base.join("phi.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,phi"));
    assert_eq!(csv.lines().count(), 21);

    let o = tancert(base, &["--out", ".", "crossover", "upper", "--tol", "1e-3"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(base.join("crossover-upper_x0.json")).unwrap()).unwrap();
    let lo = tancert::hexfloat::parse(j["bracket"][0].as_str().unwrap()).unwrap();
    let hi = tancert::hexfloat::parse(j["bracket"][1].as_str().unwrap()).unwrap();
    assert!(lo <= 1.2332 && 1.2332 <= hi && hi - lo <= 1e-3);

    assert_eq!(tancert(base, &["--out", ".", "crossover", "lower"]).status.code(), Some(0));
    assert!(base.join("crossover-lower_x1.json").exists());

    let o = tancert(base, &["replay", "thm_a_h_prime", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(tancert(base, &["replay", "thm_a_h_prime", "--samples", "20", "--tol", "0"]).status.code(), Some(3));
    assert_eq!(tancert(base, &["replay", "eq99"]).status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for sub in ["a", "b"] {
        let o = tancert(dir.path(), &["--out", sub, "--threads", "4", "certify", "qi_upper"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a/cert-qi_upper.json")).unwrap();
    let b = fs::read(dir.path().join("b/cert-qi_upper.json")).unwrap();
    assert_eq!(a, b);
}
