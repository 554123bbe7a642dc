use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn semslice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semslice"))
        .args(args)
        .env_remove("SEMSLICE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn generated(dir: &Path) -> String {
    let path = dir.join("scenario.toml");
    let out = semslice(&["generate", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

fn comparison_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect()
}

#[test]
fn run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let scn = generated(dir.path());
    let out = dir.path().join("out");
    let res = semslice(&["run", "--scenario", &scn, "--policy", "semantic", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for f in ["metrics_series.csv", "metrics_summary.json", "event_log.csv", "action_log.csv", "ledger_log.csv"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("metrics_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["policy"], "SEMANTIC");
    assert!(String::from_utf8_lossy(&res.stdout).contains("qos_satisfaction_rate"));
}

#[test]
fn invalid_scenario_exits_one_with_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let scn = generated(dir.path());
    let text = fs::read_to_string(&scn).unwrap().replacen("hits", "smashes", 1);
    fs::write(&scn, text).unwrap();
    let res = semslice(&["validate", "--scenario", &scn]);
    assert_eq!(res.status.code(), Some(1));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("line ") && err.contains("`smashes`"), "{err}");
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let scn = generated(dir.path());
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let res = semslice(&["run", "--scenario", &scn, "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn missing_scenario_file_exits_two() {
    let res = semslice(&["validate", "--scenario", "/nonexistent/scenario.toml"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn compare_writes_one_row_per_policy() {
    let dir = tempfile::tempdir().unwrap();
    let scn = generated(dir.path());
    let out = dir.path().join("all");
    let res = semslice(&["compare", "--scenario", &scn, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(comparison_rows(&out.join("comparison.csv")), ["STATIC", "DNS", "CONTEXT_AWARE", "SEMANTIC"]);
    for p in ["static", "dns", "context", "semantic"] {
        assert!(out.join(p).join("metrics_series.csv").is_file(), "{p}");
    }

    let two = dir.path().join("two");
    let res = semslice(&[
        "compare", "--scenario", &scn, "--policies", "semantic,static", "--out", two.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    assert_eq!(comparison_rows(&two.join("comparison.csv")), ["STATIC", "SEMANTIC"]);
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let scn = generated(dir.path());
    let out = dir.path().join("env-out");
    let res = Command::new(env!("CARGO_BIN_EXE_semslice"))
        .args(["run", "--scenario", &scn, "--policy", "static"])
        .env("SEMSLICE_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(out.join("metrics_summary.json").is_file());
}

#[test]
fn seed_and_set_overrides_reach_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let scn = generated(dir.path());
    let out = dir.path().join("o");
    let res = semslice(&[
        "run", "--scenario", &scn, "--seed", "7", "--set", "policy_params.gamma=3", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("metrics_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 7);

    let bad = semslice(&["validate", "--scenario", &scn, "--set", "pool.ran=-1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn generate_rejects_bad_parameters() {
    let res = semslice(&["generate", "--duration", "100", "--t-accident", "500"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("t_accident"));
    let res = semslice(&["generate", "--ues", "3"]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).contains("[[ues]]"));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(semslice(&["run", "--bogus"]).status.code(), Some(1));
    assert_eq!(semslice(&["--help"]).status.code(), Some(0));
}

#[test]
fn schema_is_json() {
    let res = semslice(&["emit-schema"]);
    assert!(res.status.success());
    let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert!(v["properties"]["timeline"].is_object());
}
