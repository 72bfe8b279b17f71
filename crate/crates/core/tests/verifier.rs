mod common;

use std::sync::{Arc, OnceLock};

use common::g;
use grouplab::extension::{classify, enumerate_extensions, Classification, ExtensionProblem};
use grouplab::iso::is_isomorphic;
use grouplab::ok::{revalidate, Finding};
use grouplab::verify::{
    recompute_verdict, verify_a4_s4, verify_corollary3, verify_cyclic_kernel, verify_dihedral_kernel,
    verify_nonsolvable, CaseRecord, Report, SweepOptions, Verdict, NONSOLVABLE_P_MAX, THEOREM3_N_MAX, THEOREM3_PRIMES,
    THEOREM4_N_MAX, THEOREM4_PRIMES, THEOREM56_PRIMES,
};
use proptest::prelude::*;
use serde_json::Value;

fn opts() -> SweepOptions {
    SweepOptions::default()
}

fn theorem3() -> &'static Report {
    static R: OnceLock<Report> = OnceLock::new();
    R.get_or_init(|| verify_cyclic_kernel(THEOREM3_N_MAX, &THEOREM3_PRIMES, &opts()).unwrap())
}

fn theorem4() -> &'static Report {
    static R: OnceLock<Report> = OnceLock::new();
    R.get_or_init(|| verify_dihedral_kernel(THEOREM4_N_MAX, &THEOREM4_PRIMES, &opts()).unwrap())
}

fn theorem56() -> &'static Report {
    static R: OnceLock<Report> = OnceLock::new();
    R.get_or_init(|| verify_a4_s4(&THEOREM56_PRIMES, &opts()).unwrap())
}

fn nonsolvable() -> &'static Report {
    static R: OnceLock<Report> = OnceLock::new();
    R.get_or_init(|| verify_nonsolvable(NONSOLVABLE_P_MAX, &opts()).unwrap())
}

fn schema() -> Value {
    serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap()
}

#[test]
fn default_sweeps_are_confirmed() {
    for r in [theorem3(), theorem4(), theorem56(), nonsolvable()] {
        assert_eq!(r.verdict, Verdict::Confirmed, "{}", r.command);
        assert!(r.cases.iter().all(CaseRecord::is_ok));
    }
}

#[test]
fn cyclic_kernel_sweep_shape() {
    let r = theorem3();
    // Every (n, p) pair contributes at least the split class.
    assert!(r.cases.len() >= THEOREM3_N_MAX * THEOREM3_PRIMES.len());
    for c in &r.cases {
        if c.admissible {
            assert!(matches!(
                c.classification,
                Classification::Cyclic(_) | Classification::Dihedral(_)
            ));
        } else {
            assert!(!c.findings.is_empty());
        }
    }
    // Z_n by Z_2 with n an odd prime: Z_2n and D_2n only.
    for n in (3..=THEOREM3_N_MAX).filter(|&n| grouplab::arith::is_prime(n)) {
        let kernel = format!("Z{n}");
        let cls: Vec<&CaseRecord> = r.cases.iter().filter(|c| c.kernel == kernel && c.prime == 2).collect();
        assert_eq!(cls.len(), 2, "{kernel}");
        assert!(cls.iter().all(|c| c.admissible));
    }
}

#[test]
fn a4_appears_once_in_the_dihedral_sweep() {
    let a4: Vec<&CaseRecord> = theorem4()
        .cases
        .iter()
        .filter(|c| c.classification == Classification::A4)
        .collect();
    // Two extension classes of the Klein group by Z3 give A4; they are one
    // isomorphism class.
    let iso: std::collections::BTreeSet<(String, usize, usize)> =
        a4.iter().map(|c| (c.kernel.clone(), c.prime, c.iso_class)).collect();
    assert_eq!(iso.len(), 1);
    assert!(a4.iter().all(|c| c.kernel == "D4" && c.prime == 3 && c.admissible));
    assert!(a4.iter().all(|c| c.check.as_ref().unwrap().holds));
}

#[test]
fn a4_s4_sweep_has_a_single_admissible_class() {
    let r = theorem56();
    let admissible: Vec<&CaseRecord> = r.cases.iter().filter(|c| c.admissible).collect();
    assert_eq!(admissible.len(), 1);
    assert_eq!(admissible[0].kernel, "A4");
    assert_eq!(admissible[0].prime, 2);
    assert_eq!(admissible[0].classification, Classification::S4);
    assert_eq!(r.cases.iter().filter(|c| c.kernel == "A4" && c.prime == 2).count(), 2);
    assert!(r
        .cases
        .iter()
        .filter(|c| c.kernel == "S4")
        .all(|c| !c.findings.is_empty()));
    assert!(r
        .cases
        .iter()
        .filter(|c| c.kernel == "A4" && c.prime == 3)
        .all(|c| !c.findings.is_empty()));
}

#[test]
fn nonsolvable_checks_all_hold() {
    let r = nonsolvable();
    for c in &r.cases {
        match (&c.check, c.split) {
            (Some(check), _) => assert!(check.holds, "{}", check.description),
            (None, split) => assert!(split.is_some(), "standalone case {} has no check", c.kernel),
        }
    }
    let a5: Vec<&CaseRecord> = r.cases.iter().filter(|c| c.kernel == "A5").collect();
    assert_eq!(a5.len(), 2);
    assert!(a5.iter().all(|c| c.prime == 2 && !c.findings.is_empty()));
    for p in [7, 11, 13] {
        let kernel = format!("N(Syl{p}) in PSL(2,{p})");
        let c = r
            .cases
            .iter()
            .find(|c| c.kernel == kernel)
            .unwrap_or_else(|| panic!("{kernel}"));
        assert_eq!(c.total_order, p * (p - 1) / 2);
        assert!(!c.findings.is_empty());
    }
    let s5 = r.cases.iter().find(|c| c.kernel == "S5").unwrap();
    assert!(s5.findings.iter().any(|f| f.descriptor.kind() == "Type5"));
    let a5z2 = r.cases.iter().find(|c| c.kernel == "A5 x Z2").unwrap();
    assert!(a5z2.findings.iter().any(|f| f.descriptor.kind() == "RuleT2"));
}

#[test]
fn sylow_normalizers_by_hand() {
    for p in [7usize, 11, 13] {
        let psl = g(&format!("PSL(2,{p})"));
        let syl = grouplab::subgroup::sylow_subgroup(&psl, p).unwrap();
        let norm = grouplab::subgroup::normalizer(&psl, &syl).unwrap();
        assert_eq!(norm.len(), p * (p - 1) / 2);
        let model = grouplab::verify::borel_quotient_model(p, 2000).unwrap();
        assert!(is_isomorphic(&norm.to_group(&psl), &model), "p={p}");
    }
}

#[test]
fn rejected_findings_revalidate_from_the_report() {
    for r in [theorem3(), theorem4(), theorem56()] {
        let mut last: Option<(String, usize, Vec<grouplab::extension::Extension>)> = None;
        for c in r.cases.iter().filter(|c| !c.findings.is_empty()) {
            if last.as_ref().is_none_or(|(k, p, _)| *k != c.kernel || *p != c.prime) {
                let kernel = Arc::new(g(&c.kernel));
                let exts = enumerate_extensions(&ExtensionProblem::new(kernel, c.prime)).unwrap();
                last = Some((c.kernel.clone(), c.prime, exts));
            }
            let exts = &last.as_ref().unwrap().2;
            let total = exts[c.class_index].total();
            assert_eq!(total.order(), c.total_order);
            assert_eq!(classify(total), c.classification);
            for f in &c.findings {
                let witness: Vec<u32> = f
                    .witness
                    .iter()
                    .map(|l| total.element_by_label(l).expect("witness label"))
                    .collect();
                let finding = Finding {
                    descriptor: f.descriptor,
                    witness,
                };
                assert!(
                    revalidate(total, &finding),
                    "{} by Z{} class {}: {}",
                    c.kernel,
                    c.prime,
                    c.class_index,
                    f.descriptor
                );
            }
        }
    }
}

#[test]
fn corollary_aggregates_the_solvable_sweeps() {
    let r = verify_corollary3(&opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Confirmed);
    assert_eq!(
        r.cases.len(),
        theorem3().cases.len() + theorem4().cases.len() + theorem56().cases.len()
    );
    let kinds = r.admissible_kinds();
    assert_eq!(
        kinds.into_iter().collect::<Vec<_>>(),
        vec!["A4", "Cyclic", "Dihedral", "S4"]
    );
}

#[test]
fn reports_are_deterministic_and_match_the_schema() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    for r in [theorem3(), theorem4(), theorem56(), nonsolvable()] {
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", r.command);
    }
    let serial = SweepOptions {
        parallel: false,
        ..opts()
    };
    let again = verify_dihedral_kernel(THEOREM4_N_MAX, &THEOREM4_PRIMES, &serial).unwrap();
    assert_eq!(again.to_json_without_timing(), theorem4().to_json_without_timing());
    let again = verify_nonsolvable(NONSOLVABLE_P_MAX, &opts()).unwrap();
    assert_eq!(again.to_json_without_timing(), nonsolvable().to_json_without_timing());
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let mut v: Value = serde_json::from_str(&theorem56().to_json()).unwrap();
    assert!(validator.is_valid(&v));
    v["verdict"] = Value::String("maybe".into());
    assert!(!validator.is_valid(&v));
    let mut v: Value = serde_json::from_str(&theorem56().to_json()).unwrap();
    v["cases"][0]["classification"] = Value::String("Icosahedral".into());
    assert!(!validator.is_valid(&v));
    let mut v: Value = serde_json::from_str(&theorem56().to_json()).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    assert!(!validator.is_valid(&v));
}

#[test]
fn bad_sweep_parameters_are_errors() {
    assert!(verify_cyclic_kernel(0, &[2], &opts()).is_err());
    assert!(verify_cyclic_kernel(10, &[4], &opts()).is_err());
    assert!(verify_cyclic_kernel(10, &[], &opts()).is_err());
    assert!(verify_dihedral_kernel(1, &[2], &opts()).is_err());
    assert!(verify_a4_s4(&[11], &opts()).is_err());
    assert!(verify_nonsolvable(17, &opts()).is_err());
    assert!(verify_cyclic_kernel(48, &[7], &SweepOptions { cap: 100, ..opts() }).is_err());
}

#[test]
fn dropping_an_obstruction_yields_a_counterexample() {
    let mut cases = theorem56().cases.clone();
    let i = cases.iter().position(|c| c.kernel == "S4").unwrap();
    cases[i].findings.clear();
    cases[i].admissible = true;
    assert_eq!(recompute_verdict(&cases), Verdict::Counterexample(vec![i]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flipping_findings_flips_the_verdict(pick in any::<prop::sample::Index>()) {
        let base = &theorem4().cases;
        let i = pick.index(base.len());
        let mut cases = base.clone();
        let c = &mut cases[i];
        if c.findings.is_empty() {
            // An admissible case stays ok only while its kind is allowed.
            c.allowed.clear();
            prop_assert_eq!(recompute_verdict(&cases), Verdict::Counterexample(vec![i]));
        } else {
            let allowed = c.allowed.iter().any(|k| k == c.classification.kind());
            c.findings.clear();
            c.admissible = true;
            let expected = if allowed { Verdict::Confirmed } else { Verdict::Counterexample(vec![i]) };
            prop_assert_eq!(recompute_verdict(&cases), expected);
        }
    }

    #[test]
    fn verdict_matches_its_definition(flips in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let mut cases = theorem3().cases.clone();
        for f in &flips {
            let i = f.index(cases.len());
            let c = &mut cases[i];
            if c.findings.is_empty() {
                c.admissible = false;
            } else {
                c.findings.clear();
                c.admissible = true;
            }
        }
        let bad: Vec<usize> = cases
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let kind_ok = c.allowed.iter().any(|k| k == c.classification.kind());
                !((c.admissible && kind_ok) || !c.findings.is_empty())
            })
            .map(|(i, _)| i)
            .collect();
        let expected = if bad.is_empty() { Verdict::Confirmed } else { Verdict::Counterexample(bad) };
        prop_assert_eq!(recompute_verdict(&cases), expected);
    }
}
