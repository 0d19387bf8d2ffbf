use std::process::Command;

fn verify(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("verify runs")
}

#[test]
fn report_is_deterministic_without_timings() {
    let a = verify(&["s2_euler", "--no-timings", "--seed", "4"]);
    let b = verify(&["s2_euler", "--no-timings", "--seed", "4", "--parallel"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["version"], "1");
    assert_eq!(json["scenario"], "s2_euler");
    assert_eq!(json["seed"], 4);
    let check = &json["checks"][0];
    for key in ["check_id", "abs_err", "rel_err", "tol", "passed", "runtime_ms"] {
        assert!(check.get(key).is_some(), "missing {key}");
    }
    assert_eq!(check["runtime_ms"], 0.0);
}

#[test]
fn failing_gating_check_sets_exit_code() {
    let out = verify(&["appendix_bounds", "--tol-scale", "1e-30", "--format", "markdown"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(verify(&["torus"]).status.code(), Some(2));
    assert_eq!(verify(&["s2_euler", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(verify(&["s2_euler", "--tol-scale", "-1"]).status.code(), Some(2));
}

#[test]
fn writes_report_file() {
    let dir = std::env::temp_dir().join(format!("verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.md");
    let out = verify(&["s2_euler", "--format", "markdown", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("s2_euler_number"));
    std::fs::remove_dir_all(&dir).unwrap();
}
