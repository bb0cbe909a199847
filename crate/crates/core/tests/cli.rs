use std::io::Write;

use samelson::cli::{parse_metric, run, Command, RunConfig};
use samelson::compact_algebra::build_compact_form;
use samelson::error::{Error, ParseError};
use samelson::root_data::build_root_system;

fn cfg(command: Command, group: &str) -> RunConfig {
    RunConfig { group: Some(group.into()), ..RunConfig::new(command) }
}

fn metric_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

#[test]
fn check_reports_first_violation() {
    let f = metric_file(r#"{"lambda": {"0": "2", "1": "2", "2": "2/3"}}"#);
    let c = RunConfig { metric: Some(f.path().into()), ..cfg(Command::Check, "A2") };
    let out = run(&c).unwrap();
    assert!(!out.ok);
    assert_eq!(out.report["cyt"]["holds"], true);
    assert_eq!(out.report["skt"]["holds"], false);
    assert!(out.report["skt"]["violation"].as_str().unwrap().starts_with("ddcF("));
}

#[test]
fn bi_invariant_metric_passes_check() {
    let out = run(&cfg(Command::Check, "G2")).unwrap();
    assert!(out.ok, "{}", out.summary);
}

#[test]
fn reports_are_deterministic() {
    let c = RunConfig { restarts: 10, ..cfg(Command::Rigidity, "B2") };
    let a = serde_json::to_string(&run(&c).unwrap().report).unwrap();
    let b = serde_json::to_string(&run(&c).unwrap().report).unwrap();
    assert_eq!(a, b);
}

#[test]
fn solve_cyt_finds_the_su3_point() {
    let f = metric_file(r#"{"lambda": {"0": 2, "1": 2, "2": 2}}"#);
    let c = RunConfig { metric: Some(f.path().into()), ..cfg(Command::SolveCyt, "A2") };
    let out = run(&c).unwrap();
    assert!(out.ok);
    assert_eq!(out.report["certified"], serde_json::json!(["2/3", "2/3", "2"]));
}

#[test]
fn so9_verify_passes_with_errata() {
    let out = run(&RunConfig::new(Command::So9Verify)).unwrap();
    assert!(out.ok, "{}", out.summary);
    assert!(out.summary.contains("16/18 verbatim, 18/18"));
}

#[test]
fn metric_schema_errors_carry_paths() {
    let rs = build_root_system(&"A2".parse().unwrap()).unwrap();
    let alg = build_compact_form(&rs).unwrap();
    for (json, path) in [
        (r#"{"lambda": {"7": "1"}}"#, "$.lambda.7"),
        (r#"{"lambda": {"0": 0.5}}"#, "$.lambda.0"),
        (r#"{"Lambda_t": [["1", "0"]]}"#, "$.Lambda_t"),
        (r#"{"fixed": [-1]}"#, "$.fixed[0]"),
        (r#"{"colour": 1}"#, "$.colour"),
    ] {
        match parse_metric(json, &alg) {
            Err(Error::Parse(ParseError::Schema { path: p, .. })) => assert_eq!(p, path, "{json}"),
            other => panic!("{json}: {other:?}"),
        }
    }
    assert!(parse_metric(r#"{"lambda": {"0": "-1"}}"#, &alg).is_err());
}

#[test]
fn missing_group_is_an_error() {
    assert!(run(&RunConfig::new(Command::Roots)).is_err());
}
