use std::process::Command;

fn ewbench(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ewbench"))
        .args(args)
        .env("EWBENCH_THREADS", "2")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn without_wall_time(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.contains("\"wall_time_s\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn heisenberg_verification_exits_zero() {
    let (code, out) = ewbench(&[
        "verify",
        "--case",
        "heisenberg",
        "--ell",
        "1",
        "--checks",
        "gt,monopole,weyl",
        "--points",
        "200",
        "--seed",
        "7",
        "--tol",
        "1e-7",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"schema\": 1"));
}

#[test]
fn class_b_lift_exits_zero() {
    let (code, out) = ewbench(&[
        "lift",
        "--case",
        "class-b",
        "--F",
        "1",
        "--c",
        "0.5",
        "--checks",
        "em,maxwell",
        "--tol",
        "1e-6",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"ell\": 4.0"));
}

#[test]
fn non_solution_exits_one() {
    let (code, out) = ewbench(&["verify", "--case", "from-H", "--H", "x*y", "--checks", "gt"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"verdict\": \"fail\""));
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(ewbench(&["verify", "--case", "class-z"]).0, 2);
    assert_eq!(ewbench(&["verify", "--checks", "gt,nonsense"]).0, 2);
    assert_eq!(ewbench(&["verify", "--tol", "-1"]).0, 2);
    assert_eq!(ewbench(&["verify", "--case", "class-b", "--F", "1+"]).0, 2);
    assert_eq!(ewbench(&["verify", "--checks", "em"]).0, 2);
    assert_eq!(ewbench(&["verify", "--config", "/nonexistent.json"]).0, 2);
    assert_eq!(ewbench(&["frobnicate"]).0, 2);
}

#[test]
fn sampling_errors_exit_three() {
    // the guard F² > 1e-12 rejects every point when F vanishes identically
    assert_eq!(ewbench(&["verify", "--case", "class-b", "--F", "0*p"]).0, 3);
}

#[test]
fn json_config_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("ewbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"case": "from-H", "H": "x*y", "checks": ["gt"], "points": 10}"#,
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    assert_eq!(ewbench(&["verify", "--config", path]).0, 1);
    assert_eq!(ewbench(&["verify", "--config", path, "--case", "heisenberg"]).0, 0);
    let report = dir.join("report.json");
    let (code, stdout) = ewbench(&[
        "verify",
        "--config",
        path,
        "--case",
        "class-a",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(&report)
        .unwrap()
        .contains("\"case\": \"class-a\""));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_byte_stable() {
    let args = [
        "lift",
        "--case",
        "class-a",
        "--ell",
        "2",
        "--c",
        "0.5",
        "--points",
        "30",
        "--seed",
        "4",
        "--checks",
        "em,invariants",
    ];
    let (a, first) = ewbench(&args);
    let (b, second) = ewbench(&args);
    assert_eq!((a, b), (0, 0));
    assert_eq!(without_wall_time(&first), without_wall_time(&second));
}

#[test]
fn limit_and_eval_subcommands() {
    assert_eq!(ewbench(&["limit", "--case", "heisenberg", "--points", "10"]).0, 0);
    assert_eq!(ewbench(&["limit", "--case", "frozen", "--points", "10"]).0, 1);
    let (code, out) = ewbench(&["eval", "--expr", "x^2*y", "--vars", "x,y", "--at", "3,2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"value\": 18.0"));
}
