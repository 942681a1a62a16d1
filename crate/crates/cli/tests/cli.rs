use std::path::PathBuf;
use std::process::{Command, Output};

fn specrec(args: &[&str]) -> Output {
    run(args, &[])
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_specrec"));
    cmd.args(args);
    for key in ["SPECREC_FIXTURES", "SPECREC_FORMAT", "SPECREC_JOBS", "SPECREC_QMAX", "SPECREC_CAP", "SPECREC_MODE", "SPECREC_SEED"] {
        cmd.env_remove(key);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("each record line is JSON")).collect()
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

#[test]
fn kgpd_prints_547() {
    let o = specrec(&["kgpd", "-3", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("547"));
}

#[test]
fn sigma_prints_seven() {
    let o = specrec(&["sigma", "7", "5", "t-m"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("{7}"));
}

#[test]
fn records_header_and_result() {
    let o = specrec(&["--format", "records", "kgpd", "-3", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    let h = &lines[0];
    assert_eq!(h["record"], "header");
    assert_eq!(h["tool"], "specrec");
    assert_eq!(h["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(h["schema"], 1);
    assert_eq!(h["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(lines[1]["data"]["value"]["value"], "547");
}

#[test]
fn records_are_reproducible() {
    let args = ["--format", "records", "verify", "table3"];
    let a = specrec(&args);
    let b = specrec(&args);
    let c = run(&args, &[("SPECREC_JOBS", "1")]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(json_lines(&a).len() > 30);
}

#[test]
fn config_hash_tracks_configuration_only() {
    let hash = |o: &Output| json_lines(o)[0]["config_hash"].as_str().unwrap().to_string();
    let base = hash(&specrec(&["--format", "records", "kgpd", "-3", "7"]));
    let jobs = hash(&specrec(&["--format", "records", "--jobs", "1", "kgpd", "-3", "7"]));
    let seed = hash(&specrec(&["--format", "records", "--seed", "5", "kgpd", "-3", "7"]));
    assert_eq!(base, jobs);
    assert_ne!(base, seed);
}

#[test]
fn environment_overrides_flags() {
    let o = run(&["kgpd", "-3", "7"], &[("SPECREC_FORMAT", "records"), ("SPECREC_MODE", "staged")]);
    let h = &json_lines(&o)[0];
    assert_eq!(h["record"], "header");
    assert_eq!(h["config"]["mode"], "staged");
}

#[test]
fn fixture_directory_matches_embedded() {
    let dir = fixture_dir();
    let a = specrec(&["--format", "records", "verify", "table4"]);
    let b = specrec(&["--format", "records", "--fixtures", dir.to_str().unwrap(), "verify", "table4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(specrec(&["bogus"]).status.code(), Some(2));
    assert_eq!(specrec(&["--fixtures", "/nonexistent", "verify", "table4"]).status.code(), Some(2));
    assert_eq!(specrec(&["sigma", "7", "4", "t-m"]).status.code(), Some(2));
    assert_eq!(specrec(&["verify", "case1", "7"]).status.code(), Some(0));
    // the printed n=23, q=3 value is not n_2(U_23(3))
    assert_eq!(specrec(&["verify", "table4"]).status.code(), Some(1));
    let capped = specrec(&["--cap", "10", "verify", "case1", "7"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("below the required"));
}

#[test]
fn errors_are_not_silent() {
    let o = specrec(&["solve", "nonsense", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}
