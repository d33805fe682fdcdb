//! End-to-end runs of the `hankel` binary: output, exit codes and the budget
//! environment variable.

use std::process::{Command, Output};

fn hankel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankel")).args(args).env_remove("HANKEL_BUDGET").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn det_prints_a_versioned_record() {
    let o = hankel(&["det", "2", "-2", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["determinant"], "-5");
    let csv = stdout(&hankel(&["det", "2", "2", "1", "--format", "csv"]));
    assert_eq!(csv.lines().nth(1), Some("1,2,2,1,5"));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let args = ["verify", "--k", "1..2", "--m", "1..2", "--n-max", "2"];
    let a = hankel(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&hankel(&args)));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["summary"]["instances"], 24);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn injected_fault_exits_with_one() {
    let o = hankel(&["verify", "--k", "1", "--m", "1", "--n", "1", "--inject-fault", "rhs-determinant"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"fail\""));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--k", "0"][..],
        &["verify", "--k", "3..1"],
        &["det", "0", "1", "1"],
        &["frobnicate"],
        &["render", "--k", "1", "--m", "1", "--n", "1", "--parity", "both"],
        &["render", "--k", "1", "--m", "1", "--n", "1", "--index", "999"],
    ] {
        assert_eq!(hankel(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn budget_environment_variable_overrides_the_default() {
    let args = ["verify", "--k", "2", "--m", "2", "--n", "2", "--parity", "even"];
    let o = Command::new(env!("CARGO_BIN_EXE_hankel")).args(args).env("HANKEL_BUDGET", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["budget"]["tuples"], 1);
    assert_eq!(v["instances"][0]["status"], "determinant-only pass");
    assert!(!stdout(&hankel(&args)).contains("determinant-only"));
}

#[test]
fn out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("hankel-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let o =
        hankel(&["verify", "--k", "1", "--m", "1", "--n-max", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("k,m,n,parity"));
    assert_eq!(text.lines().count(), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn enumerate_and_bijection_check_agree() {
    let o = hankel(&["enumerate", "--k", "2", "--m", "1", "--n", "2", "--parity", "odd"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agree"], true);
    let o = hankel(&["bijection-check", "--k", "2", "--m", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bijection"].as_array().unwrap().len(), 2);
}

#[test]
fn render_is_deterministic_svg() {
    for kind in ["survivor", "overlay", "graph"] {
        let args = ["render", "--k", "2", "--m", "1", "--n", "2", "--kind", kind];
        let a = hankel(&args);
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert!(stdout(&a).contains("<svg"));
        assert_eq!(a.stdout, hankel(&args).stdout);
    }
}
