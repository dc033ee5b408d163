use std::process::{Command, Output};

fn thetaq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetaq"))
        .args(args)
        .env_remove("THETAQ_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn theorem_sweep_passes() {
    let o = thetaq(&[
        "verify", "theorem", "--k-min", "2", "--k-max", "12", "--delta", "both", "--order", "60",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("PASS half-sum"))
            .count(),
        22
    );
    assert!(text.contains("22 reports, 0 failed"));
}

#[test]
fn degenerate_range_passes() {
    let o = thetaq(&["verify", "all", "--k-max", "1", "--order", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "theorem", "--k-max", "0"][..],
        &["verify", "--k-min", "5", "--k-max", "3"],
        &["verify", "meq1", "--jet-degree", "1"],
        &["verify", "lem22", "--jet-degree", "2"],
        &["verify", "--order", "0"],
        &["verify", "--delta", "2"],
        &["verify", "nonsense"],
    ] {
        let o = thetaq(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(
            String::from_utf8_lossy(&o.stderr).starts_with("error:"),
            "{args:?}"
        );
    }
}

#[test]
fn json_reports_are_schema_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = thetaq(&[
        "verify",
        "lem2",
        "bridges",
        "--k-max",
        "3",
        "--order",
        "20",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        let mut keys: Vec<_> = r.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "elapsed_ms",
                "first_mismatch",
                "identity",
                "order",
                "params",
                "status"
            ]
        );
        assert_eq!(r["status"], "pass");
        assert_eq!(r["order"], 20);
        assert!(r["first_mismatch"].is_null());
    }
    assert!(reports.iter().any(|r| r["identity"] == "half-product"));
    assert!(reports.iter().any(|r| r["identity"] == "theta-null"));
}

#[test]
fn jobs_env_override_is_accepted() {
    let o = Command::new(env!("CARGO_BIN_EXE_thetaq"))
        .args(["verify", "k3", "--order", "50"])
        .env("THETAQ_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_thetaq"))
        .args(["verify", "k3", "--order", "50"])
        .env("THETAQ_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_groups() {
    let o = thetaq(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 5);
    let o = thetaq(&["selftest", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 5);
}

#[test]
fn selftest_catches_injected_fault() {
    let o = thetaq(&["selftest", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL pentagonal"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 of"));
}
