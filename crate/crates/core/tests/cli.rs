use std::process::Command;

use grouplab::cli::{run, EXIT_FINDING, EXIT_OK, EXIT_USAGE};
use proptest::prelude::*;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("grouplab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    (
        code,
        serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}\n{err}")),
    )
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_grouplab");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["classify", "S4"]), 0);
    assert_eq!(status(&["ok-scan", "Q8"]), 1);
    assert_eq!(status(&["ok-scan", "Z3 x"]), 2);
    assert_eq!(status(&["verify", "theorem5-6", "--primes", "2,3"]), 0);
    assert_eq!(status(&["verify", "theorem3", "--primes", "4"]), 2);
    assert_eq!(status(&["--version"]), 0);
    let out = Command::new(bin).args(["order", "PSL(2,7)"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "168\n");
}

#[test]
fn subcommand_outputs() {
    assert_eq!(call(&["order", "A5"]), (EXIT_OK, "60\n".into(), String::new()));
    assert_eq!(call(&["aut", "A4"]).1, "|Aut(A4)| = 24\n");
    assert!(call(&["inn-out", "A5"]).1.contains("|Out| = 2"));
    assert_eq!(call(&["classify", "PSL(2,5)"]).1, "A5\n");
    assert_eq!(call(&["h2", "Z8", "-m", "2", "--action", "5"]).1, "H^2(Z2, Z8) = 0\n");
    assert_eq!(call(&["h2", "Z2 x Z2", "-m", "2"]).1, "H^2(Z2, Z2 x Z2) = Z2 x Z2\n");
    let (code, out, _) = call(&["ext", "A4", "--p", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("2 extension class(es) of A4 by Z2"));
    let (code, out, _) = call(&["ok-scan", "S5"]);
    assert_eq!(code, EXIT_FINDING);
    assert!(out.contains("Type5(p=5,n=2)"));
    let (code, out, _) = call(&["build", "Q8"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("element orders: 1:1 2:1 4:6"));
}

#[test]
fn json_outputs() {
    let (_, v) = json(&["build", "D8"]);
    assert_eq!(v["order"], 8);
    assert_eq!(v["classification"], "Dihedral(4)");
    assert_eq!(v["element_orders"]["2"], 5);
    let (_, v) = json(&["ext", "Z4", "--p", "2", "--action", "-1"]);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    assert!(cases.iter().any(|c| c["classification"] == "Dihedral(4)"));
    assert!(cases.iter().any(|c| c["findings"][0]["descriptor"] == "Type3(m=2)"));
    let (code, v) = json(&["ok-scan", "Z7 x| Z3 [2]"]);
    assert_eq!(code, EXIT_FINDING);
    assert_eq!(v["findings"][0]["descriptor"], "RuleROdd");
    let (_, v) = json(&["h2", "Z6", "-m", "2", "--action", "-1"]);
    assert_eq!(v["invariants"], serde_json::json!([2]));
}

#[test]
fn usage_errors() {
    for args in [
        &["frobnicate"][..],
        &["order"],
        &["order", "Z3", "--element", "(123)"],
        &["h2", "Z6", "-m", "2", "--action", "2"],
        &["h2", "D8", "-m", "2"],
        &["ext", "Z6", "--p", "4"],
        &["--cap", "10", "build", "S4"],
        &["verify", "theorem5-6", "--primes", "11"],
        &["verify", "nonsolvable", "--p-max", "17"],
        &["classify", "Z3 x| Z2"],
    ] {
        let (code, out, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
    let (_, _, err) = call(&["classify", "Z3 x"]);
    assert!(err.contains("column 5"), "{err}");
}

#[test]
fn verify_reports_are_byte_identical_without_timing() {
    for args in [
        &["verify", "theorem4", "--n-max", "12"][..],
        &["verify", "theorem5-6"],
        &["verify", "nonsolvable", "--p-max", "7"],
    ] {
        let (c1, a) = json(args);
        let (c2, b) = json(args);
        assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
        assert_eq!(a["verdict"], "confirmed");
        let a = serde_json::to_string(&strip_timing(a)).unwrap();
        let b = serde_json::to_string(&strip_timing(b)).unwrap();
        assert_eq!(a, b, "{args:?}");
    }
    let (_, a) = json(&["build", "S5", "--seed", "3"]);
    let (_, b) = json(&["build", "S5", "--seed", "3"]);
    assert_eq!(a, b);
    assert_eq!(a["associativity_check"], "sampled");
}

#[test]
fn report_file_matches_stdout_json() {
    let dir = std::env::temp_dir().join(format!("grouplab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["--report", p, "verify", "theorem3", "--n-max", "12"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("verify theorem3: "));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file["command"], "verify theorem3");
    assert_eq!(file["parameters"]["n_max"], 12);
    let schema: Value = serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap();
    assert!(jsonschema::is_valid(&schema, &file));
    let (code, _, err) = call(&["--report", "/nonexistent-dir/x.json", "classify", "Z2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cannot write"));
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn arbitrary_specs_never_panic(spec in "[ZDQASPL(),2x|\\[\\]0-9 -]{0,12}") {
        let (code, _, _) = call(&["--cap", "200", "classify", &spec]);
        prop_assert!(code == EXIT_OK || code == EXIT_USAGE);
    }

    #[test]
    fn arbitrary_argument_lists_never_panic(args in prop::collection::vec("[a-z0-9-]{0,8}", 0..5)) {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut full = vec!["--cap", "100"];
        full.extend(refs);
        let (code, _, _) = call(&full);
        prop_assert!([EXIT_OK, EXIT_FINDING, EXIT_USAGE].contains(&code));
    }
}
