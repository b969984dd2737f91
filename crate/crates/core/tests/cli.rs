use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latticek")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_table1_json() {
    let o = run(&["verify", "--filter", "table1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "table1");
    assert_eq!(v["summary"]["records"], 38);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["timestamp"].is_u64());
}

#[test]
fn empty_filter_match_succeeds() {
    let o = run(&["verify", "--filter", "nothing-here", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn failures_exit_two_and_report_exits_zero() {
    let dir = std::env::temp_dir().join(format!("latticek-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wrong.json");
    let wrong = serde_json::json!([{
        "id": "wrong:eq1.10", "citation": "test", "tags": ["wrong"], "tolerance_class": "STANDARD",
        "lhs": {"kind": "k_integral", "alpha": -0.5, "beta": -1.5, "gamma_k": -1, "delta_kp": 0},
        "rhs": 2
    }]);
    std::fs::write(&path, wrong.to_string()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["verify", "--registry", p, "--filter", "wrong"]).status.code(), Some(2));
    let o = run(&["report", "--registry", p, "--filter", "wrong", "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| wrong:eq1.10 | - | FAIL |"));

    std::fs::write(&path, "[{\"id\": 3}]").unwrap();
    assert_eq!(run(&["verify", "--registry", p]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["lattice", "--m", "1"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn numeric_failures_exit_three() {
    // K'^{-1} k^{-1}: not integrable at k = 0
    let o = run(&["eval", "--alpha", "-1", "--delta", "-1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn eisenstein_n3() {
    let o = run(&["eisenstein", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("p_3(k) = 1 - 2*k^2"), "{out}");
    assert!(out.contains("K^(5-s) K'^(s-1)"), "{out}");
    assert!(out.contains("1/2 pi^(5-s) Gamma(s) eta(s-5) lambda(s)"), "{out}");
}

#[test]
fn modular_p1() {
    let o = run(&["modular", "--p", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("K'^3"));
}

#[test]
fn lattice_both_methods_agree() {
    let o = run(&["lattice", "--m", "1", "--n", "0", "--p", "1", "--s", "2", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let vals: Vec<f64> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("mellin") || l.starts_with("direct"))
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 2);
    assert!((vals[0] - vals[1]).abs() / vals[0].abs() <= 1e-6);
}

#[test]
fn eval_and_derive_e() {
    let o = run(&["eval", "--alpha=-0.5", "--beta=-1.5", "--gamma=-1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).lines().next().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((v - 2.0 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);

    let o = run(&["derive-e", "--base", "theta2-squared", "--s", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("exact agreement through q^30: yes"));
}

#[test]
fn list_shows_citations() {
    let o = run(&["list", "--filter", "intro"]);
    let out = stdout(&o);
    let cite = latticek::registry::bundled_registry().unwrap().into_iter().find(|r| r.id == "intro:eq1.10").unwrap().citation;
    assert!(out.lines().any(|l| l.starts_with("intro:eq1.10\t") && l.ends_with(&cite)), "{out}");
    let all = stdout(&run(&["list"]));
    assert!(all.lines().any(|l| l.starts_with("generated:odd_powers:p1\t") && l.ends_with("(generated)")));
}
