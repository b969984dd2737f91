use std::f64::consts::PI;

use latticek::quadrature::{k_integral, KIntegralSpec};
use latticek::registry::*;
use latticek::specfun::gamma_fn;
use latticek::Error;
use serde_json::json;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn bundled() -> Vec<IdentityRecord> {
    bundled_registry().unwrap()
}

fn record(id: &str) -> IdentityRecord {
    bundled().into_iter().find(|r| r.id == id).unwrap_or_else(|| panic!("{id} missing"))
}

fn expr(v: serde_json::Value) -> ClosedFormExpr {
    ClosedFormExpr::from_json(&v).unwrap()
}

#[test]
fn bundled_registry_shape() {
    let recs = bundled();
    let table1 = recs.iter().filter(|r| r.matches("table1")).count();
    assert_eq!(table1, 38);
    let cited = recs.iter().filter(|r| !r.is_generated() && !r.matches("table1")).count();
    assert!(cited >= 30, "{cited}");
    for r in &recs {
        r.validate().unwrap_or_else(|e| panic!("{}: {e}", r.id));
        if !r.is_generated() {
            assert!(!r.citation.is_empty(), "{}", r.id);
            assert!(r.rhs.citations().iter().all(|c| !c.is_empty()), "{}", r.id);
        }
    }
}

#[test]
fn empty_file_is_an_empty_registry() {
    assert!(parse_registry("").unwrap().is_empty());
    assert!(parse_registry("  \n").unwrap().is_empty());
    assert!(parse_registry("[]").unwrap().is_empty());
}

#[test]
fn schema_errors_name_the_record() {
    let bad = json!([{
        "id": "bad:exponent",
        "citation": "somewhere",
        "tags": [],
        "tolerance_class": "STANDARD",
        "lhs": {"kind": "k_integral", "alpha": "one half", "beta": 0, "gamma_k": 0, "delta_kp": 0},
        "rhs": 1
    }]);
    match parse_registry(&bad.to_string()) {
        Err(Error::Schema { id, .. }) => assert_eq!(id, "bad:exponent"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_registry("[{"), Err(Error::Parse(_))));
    assert!(matches!(parse_registry("{}"), Err(Error::Schema { .. })));

    // a constant without a citation
    let uncited = json!([{
        "id": "bad:cite", "citation": "x", "tags": [], "tolerance_class": "STANDARD",
        "lhs": {"kind": "complete_k", "k": 0.5}, "rhs": {"const": "pi"}
    }]);
    assert!(matches!(parse_registry(&uncited.to_string()), Err(Error::Schema { id, .. }) if id == "bad:cite"));
}

#[test]
fn duplicate_ids_are_rejected() {
    let one = json!({
        "id": "dup", "citation": "x", "tags": [], "tolerance_class": "STANDARD",
        "lhs": {"kind": "complete_k", "k": 0}, "rhs": {"op": "div", "args": [{"const": "pi", "cite": "x"}, 2]}
    });
    let text = json!([one.clone(), one]).to_string();
    assert!(matches!(parse_registry(&text), Err(Error::DuplicateId(id)) if id == "dup"));
}

#[test]
fn registry_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("latticek-reg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    std::fs::write(&path, BUNDLED_REGISTRY).unwrap();
    let loaded = load_registry(&path).unwrap();
    assert_eq!(loaded, parse_registry(BUNDLED_REGISTRY).unwrap());
    let again = parse_registry(&serde_json::to_string(&loaded).unwrap()).unwrap();
    assert_eq!(again, loaded);
    assert!(matches!(load_registry(dir.join("missing.json")), Err(Error::Io(_))));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn evaluator_examples() {
    let pi3_16 = expr(json!({"op": "div", "args": [{"op": "pow", "args": [{"const": "pi", "cite": "c"}, 3]}, 16]}));
    assert!(rel(evaluate_closed_form(&pi3_16, None).unwrap(), PI.powi(3) / 16.0) < 1e-15);

    let first = expr(json!({"op": "div", "args": [
        {"op": "pow", "args": [{"const": "gamma", "args": ["1/4"], "cite": "c"}, 8]},
        {"op": "mul", "args": [128, {"op": "pow", "args": [{"const": "pi", "cite": "c"}, 2]}]}
    ]}));
    let v = first.eval(None).unwrap();
    assert!(rel(v, gamma_fn(0.25).unwrap().powi(8) / (128.0 * PI * PI)) < 1e-14);
    let q = k_integral(&KIntegralSpec::monomial(0.0, 0.0, 0.0, 3.0), 1e-12).unwrap().value;
    assert!(rel(q, v) < 1e-8, "{q} {v}");

    // (pi^2/12) sqrt(5 + 1/sqrt 2) against the integral of (k/k')^{3/4} K
    let e = expr(json!({"op": "mul", "args": [
        {"op": "div", "args": [{"op": "pow", "args": [{"const": "pi", "cite": "c"}, 2]}, 12]},
        {"op": "sqrt", "args": [{"op": "add", "args": [5, {"op": "div", "args": [1, {"op": "sqrt", "args": [2]}]}]}]}
    ]}));
    let q = k_integral(&KIntegralSpec::monomial(0.75, -0.75, 1.0, 0.0), 1e-12).unwrap().value;
    assert!(rel(q, e.eval(None).unwrap()) < 1e-8);

    let s_dep = expr(json!({"op": "mul", "args": ["s", {"const": "L", "args": ["ZETA", "s"], "cite": "c"}]}));
    assert!(rel(s_dep.eval(Some(2.0)).unwrap(), PI * PI / 3.0) < 1e-14);
    assert!(s_dep.eval(None).is_err());
    assert!(matches!(s_dep.eval(Some(1.0)), Err(Error::Pole(_))));
    assert!(matches!(expr(json!({"op": "div", "args": [1, 0]})).eval(None), Err(Error::Pole(_))));
}

#[test]
fn expression_json_round_trip() {
    for r in bundled() {
        let back = ClosedFormExpr::from_json(&r.rhs.to_json()).unwrap();
        assert_eq!(back, r.rhs, "{}", r.id);
    }
}

#[test]
fn named_records_verify() {
    let row = verify_identity(&record("intro:eq1.10"), None, 1e-10);
    assert!(row.pass(), "{row:?}");
    assert!(row.rel_err.unwrap() <= 1e-10);
    let row = verify_identity(&record("new:en6"), None, 1e-8);
    assert!(row.pass(), "{row:?}");
    let k4 = record("eisenstein:k4nice:s1");
    let row = verify_identity(&k4, k4.grid()[0], 1e-8);
    assert!(row.pass(), "{row:?}");
}

#[test]
fn failures_become_rows() {
    let mut r = record("table1:t2^4");
    r.s_values = vec![1.5];
    r.skipped.clear();
    let row = verify_identity(&r, Some(1.5), 1e-8);
    assert_eq!(row.status, Status::Fail);
    assert!(row.reason.unwrap().starts_with("lhs:"));

    let mut wrong = record("intro:eq1.10");
    wrong.rhs = ClosedFormExpr::int(1);
    let row = verify_identity(&wrong, None, 1e-8);
    assert_eq!(row.status, Status::Fail);
    assert!(row.rel_err.unwrap() > 0.5);
}

#[test]
fn filters() {
    let recs = bundled();
    let r = run_suite(&recs, "no-such-tag", Some(2)).unwrap();
    assert!(r.rows.is_empty() && r.all_passed());

    let ids = |f: &str| recs.iter().filter(|r| r.matches(f)).map(|r| r.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids("generated:thm31").len(), 5);
    assert_eq!(ids("generated:thm42").len(), 4);
    assert_eq!(ids("intro:eq1.8"), ["intro:eq1.8", "intro:eq1.8:direct"]);
    assert_eq!(ids("intro:eq1.1"), Vec::<String>::new(), "prefixes stop at separators");
    assert_eq!(ids("all").len(), recs.len());
}

#[test]
fn table1_suite() {
    let r = run_suite(&bundled(), "table1", None).unwrap();
    assert_eq!(r.summary.records, 38);
    assert_eq!(r.summary.failed, 0, "{}", r.to_markdown());
    assert!(r.summary.passed >= 38);
    for row in r.rows.iter().filter(|x| x.status == Status::Skipped) {
        assert!(row.reason.as_deref().unwrap().contains("not integrable"));
    }
}

#[test]
fn generated_suites() {
    for f in ["generated:thm31", "generated:thm42"] {
        let r = run_suite(&bundled(), f, None).unwrap();
        assert!(r.summary.rows > 0);
        assert!(r.all_passed(), "{}", r.to_markdown());
    }
    let r = run_suite(&bundled(), "generated:thm31", None).unwrap();
    assert!(r.rows.iter().any(|x| x.s == Some(1.0)));
}

#[test]
fn whole_registry_passes_and_is_deterministic() {
    let recs = bundled();
    let a = run_suite(&recs, "", None).unwrap();
    assert!(a.all_passed(), "{}", a.to_markdown());
    let b = run_suite(&recs, "", Some(1)).unwrap();
    assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
    let parsed: VerificationReport = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(parsed, a);
}

#[test]
fn pass_rule_uses_absolute_error_at_zero() {
    let r = record("new:Lf4:difference");
    assert_eq!(r.rhs.eval(None).unwrap(), 0.0);
    let row = verify_identity(&r, None, 1e-8);
    assert!(row.pass() && row.rel_err.is_none() && row.abs_err.unwrap() <= 1e-8, "{row:?}");
}

#[test]
fn coverage_manifest() {
    let manifest = parse_coverage(BUNDLED_COVERAGE).unwrap();
    assert_eq!(manifest.len(), 58);
    assert_eq!(check_coverage(&manifest, &bundled()), Vec::<String>::new());

    // every test named in the manifest exists
    let root = env!("CARGO_MANIFEST_DIR");
    for e in &manifest {
        for t in e.checked_by.iter().flat_map(|c| c.split([',', ';'])) {
            let Some((module, name)) = t.trim().split_once("::") else { continue };
            let src = std::fs::read_to_string(format!("{root}/tests/{module}.rs")).unwrap();
            assert!(src.contains(&format!("fn {name}(")), "{}: {module}::{name}", e.label);
        }
    }

    let uncovered = vec![CoverageEntry { label: "x".into(), kind: "identity".into(), records: vec![], checked_by: None, out_of_scope: None }];
    assert_eq!(check_coverage(&uncovered, &[]).len(), 1);
    let dangling = vec![CoverageEntry { label: "x".into(), kind: "section".into(), records: vec!["nope".into()], checked_by: None, out_of_scope: None }];
    assert_eq!(check_coverage(&dangling, &[]).len(), 1);
}
