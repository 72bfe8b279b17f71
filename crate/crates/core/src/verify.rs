//! Exhaustive sweeps over extension problems. Every extension class in a
//! sweep must either classify into the sweep's allowed list with an empty
//! obstruction scan, or carry at least one finding.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{is_prime, primitive_root};
use crate::error::{GroupError, Result};
use crate::extension::{classify, enumerate_extensions, is_split, iso_classes, Classification, ExtensionProblem};
use crate::families::{build_family, cyclic_extension, cyclic_multiplier, direct_product, family, find_permutation};
use crate::group::{Family, Group, DEFAULT_ORDER_CAP};
use crate::iso::is_isomorphic;
use crate::ok::{build_ok, scan, Finding, OkDescriptor, ScanOptions};
use crate::subgroup::{generated_subgroup, normalizer, sylow_subgroup};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const THEOREM3_N_MAX: usize = 48;
pub const THEOREM3_PRIMES: [usize; 4] = [2, 3, 5, 7];
pub const THEOREM4_N_MAX: usize = 24;
pub const THEOREM4_PRIMES: [usize; 3] = [2, 3, 5];
pub const THEOREM56_PRIMES: [usize; 4] = [2, 3, 5, 7];
pub const NONSOLVABLE_P_MAX: usize = 13;

/// Classifications of the finite rotation groups reachable by solvable
/// extensions.
pub const POLYHEDRAL: [&str; 4] = ["Cyclic", "Dihedral", "A4", "S4"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingRecord {
    pub descriptor: OkDescriptor,
    /// Labels of the witness generators in the scanned group.
    pub witness: Vec<String>,
}

impl FindingRecord {
    fn new(g: &Group, f: &Finding) -> FindingRecord {
        FindingRecord {
            descriptor: f.descriptor,
            witness: f.witness.iter().map(|&x| g.label(x).to_string()).collect(),
        }
    }
}

/// An extra fact attached to a case, such as an isomorphism claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub description: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub kernel: String,
    pub prime: usize,
    pub class_index: usize,
    /// `None` for cases that are standalone groups rather than enumerated
    /// extension classes.
    pub split: Option<bool>,
    pub total_order: usize,
    pub classification: Classification,
    pub findings: Vec<FindingRecord>,
    pub admissible: bool,
    /// Index (within the same kernel and prime) of the first class with an
    /// isomorphic total group.
    pub iso_class: usize,
    /// Classification kinds this case may have when admissible.
    pub allowed: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<Check>,
}

impl CaseRecord {
    pub fn is_ok(&self) -> bool {
        let check = self.check.as_ref().is_none_or(|c| c.holds);
        let allowed = self.allowed.iter().any(|k| k == self.classification.kind());
        check && ((self.admissible && allowed) || !self.findings.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confirmed,
    /// Indices of the failing cases.
    Counterexample(Vec<usize>),
}

impl Verdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed)
    }
}

pub fn recompute_verdict(cases: &[CaseRecord]) -> Verdict {
    let bad: Vec<usize> = cases
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_ok())
        .map(|(i, _)| i)
        .collect();
    if bad.is_empty() {
        Verdict::Confirmed
    } else {
        Verdict::Counterexample(bad)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub parameters: Value,
    pub cases: Vec<CaseRecord>,
    pub verdict: Verdict,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, parameters: Value, cases: Vec<CaseRecord>, started: Instant) -> Report {
        let verdict = recompute_verdict(&cases);
        Report {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            parameters,
            cases,
            verdict,
            timing_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with `timing_ms` zeroed, for reproducibility comparisons.
    pub fn to_json_without_timing(&self) -> String {
        Report {
            timing_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    /// Distinct classification kinds among admissible cases.
    pub fn admissible_kinds(&self) -> BTreeSet<&'static str> {
        self.cases
            .iter()
            .filter(|c| c.admissible)
            .map(|c| c.classification.kind())
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub cap: usize,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            cap: DEFAULT_ORDER_CAP,
            parallel: true,
        }
    }
}

fn check_primes(primes: &[usize]) -> Result<()> {
    if primes.is_empty() {
        return Err(GroupError::ParamOutOfRange("at least one prime is required".into()));
    }
    match primes.iter().find(|&&p| !is_prime(p)) {
        Some(p) => Err(GroupError::ParamOutOfRange(format!("{p} is not prime"))),
        None => Ok(()),
    }
}

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(GroupError::CapExceeded { order, cap })
    } else {
        Ok(())
    }
}

fn map_jobs<J, F>(jobs: Vec<J>, parallel: bool, f: F) -> Result<Vec<CaseRecord>>
where
    J: Send + Sync,
    F: Fn(&J) -> Result<Vec<CaseRecord>> + Send + Sync,
{
    let chunks: Vec<Result<Vec<CaseRecord>>> = if parallel {
        jobs.par_iter().map(&f).collect()
    } else {
        jobs.iter().map(&f).collect()
    };
    let mut out = Vec::new();
    for chunk in chunks {
        out.extend(chunk?);
    }
    Ok(out)
}

fn findings_of(g: &Group, cap: usize) -> Result<Vec<FindingRecord>> {
    let opts = ScanOptions { exhaustive: false, cap };
    Ok(scan(g, &opts)?.iter().map(|f| FindingRecord::new(g, f)).collect())
}

/// One record per extension class of `kernel` by `Z_p`.
pub fn extension_cases(
    kernel_name: &str,
    kernel: Arc<Group>,
    p: usize,
    allowed: &[&str],
    cap: usize,
) -> Result<Vec<CaseRecord>> {
    let prob = ExtensionProblem::new(kernel, p).with_cap(cap);
    let exts = enumerate_extensions(&prob)?;
    let iso = iso_classes(&exts);
    exts.iter()
        .enumerate()
        .map(|(i, e)| {
            let findings = findings_of(e.total(), cap)?;
            Ok(CaseRecord {
                kernel: kernel_name.to_string(),
                prime: p,
                class_index: i,
                split: Some(is_split(e)),
                total_order: e.total().order(),
                classification: classify(e.total()),
                admissible: findings.is_empty(),
                findings,
                iso_class: iso[i],
                allowed: allowed.iter().map(|s| s.to_string()).collect(),
                check: None,
            })
        })
        .collect()
}

/// Extensions of `Z_n` by `Z_p` for `1 <= n <= n_max`: cyclic or dihedral,
/// or obstructed.
pub fn verify_cyclic_kernel(n_max: usize, primes: &[usize], opts: &SweepOptions) -> Result<Report> {
    let started = Instant::now();
    check_primes(primes)?;
    if n_max == 0 {
        return Err(GroupError::ParamOutOfRange("n_max must be >= 1".into()));
    }
    check_cap(n_max * primes.iter().max().copied().unwrap_or(1), opts.cap)?;
    let jobs: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| primes.iter().map(move |&p| (n, p))).collect();
    let cases = map_jobs(jobs, opts.parallel, |&(n, p)| {
        extension_cases(
            &format!("Z{n}"),
            Arc::new(family(Family::Cyclic(n))),
            p,
            &["Cyclic", "Dihedral"],
            opts.cap,
        )
    })?;
    Ok(Report::new(
        "verify theorem3",
        json!({ "n_max": n_max, "primes": primes }),
        cases,
        started,
    ))
}

/// Extensions of the dihedral group of order `2n`, `2 <= n <= n_max`, by
/// `Z_p`: dihedral, or `A4` (only for the Klein group with `p = 3`), or
/// obstructed.
pub fn verify_dihedral_kernel(n_max: usize, primes: &[usize], opts: &SweepOptions) -> Result<Report> {
    let started = Instant::now();
    check_primes(primes)?;
    if n_max < 2 {
        return Err(GroupError::ParamOutOfRange("n_max must be >= 2".into()));
    }
    check_cap(2 * n_max * primes.iter().max().copied().unwrap_or(1), opts.cap)?;
    // order 2 is the cyclic kernel Z2
    let jobs: Vec<(usize, usize)> = (2..=n_max).flat_map(|n| primes.iter().map(move |&p| (n, p))).collect();
    let cases = map_jobs(jobs, opts.parallel, |&(n, p)| {
        let kernel = Arc::new(family(Family::Dihedral(2 * n)));
        let mut cases = extension_cases(&format!("D{}", 2 * n), kernel, p, &["Dihedral", "A4"], opts.cap)?;
        for c in cases.iter_mut().filter(|c| c.classification == Classification::A4) {
            c.check = Some(Check {
                description: "A4 arises only from the Klein group with p = 3".into(),
                holds: n == 2 && p == 3,
            });
        }
        Ok(cases)
    })?;
    Ok(Report::new(
        "verify theorem4",
        json!({ "n_max": n_max, "primes": primes }),
        cases,
        started,
    ))
}

/// Extensions of `A4` (only `S4` survives) and of `S4` (nothing survives).
pub fn verify_a4_s4(primes: &[usize], opts: &SweepOptions) -> Result<Report> {
    let started = Instant::now();
    check_primes(primes)?;
    if let Some(p) = primes.iter().find(|p| !THEOREM56_PRIMES.contains(p)) {
        return Err(GroupError::ParamOutOfRange(format!(
            "prime {p} is outside {{2, 3, 5, 7}}"
        )));
    }
    let jobs: Vec<(Family, usize)> = [Family::Alternating(4), Family::Symmetric(4)]
        .into_iter()
        .flat_map(|f| primes.iter().map(move |&p| (f, p)))
        .collect();
    let cases = map_jobs(jobs, opts.parallel, |&(f, p)| {
        let allowed: &[&str] = if f == Family::Alternating(4) { &["S4"] } else { &[] };
        extension_cases(
            &f.to_string(),
            Arc::new(build_family(f, opts.cap)?),
            p,
            allowed,
            opts.cap,
        )
    })?;
    Ok(Report::new(
        "verify theorem5-6",
        json!({ "primes": primes }),
        cases,
        started,
    ))
}

fn standalone_case(
    kernel: &str,
    prime: usize,
    g: &Group,
    allowed: &[&str],
    check: Check,
    cap: usize,
) -> Result<CaseRecord> {
    let findings = findings_of(g, cap)?;
    Ok(CaseRecord {
        kernel: kernel.to_string(),
        prime,
        class_index: 0,
        split: None,
        total_order: g.order(),
        classification: classify(g),
        admissible: findings.is_empty(),
        findings,
        iso_class: 0,
        allowed: allowed.iter().map(|s| s.to_string()).collect(),
        check: Some(check),
    })
}

/// `Z_p x| Z_{(p-1)/2}` with the generator acting by the square of a
/// primitive root.
pub fn borel_quotient_model(p: usize, cap: usize) -> Result<Group> {
    let b = primitive_root(p);
    cyclic_extension(
        &family(Family::Cyclic(p)),
        (p - 1) / 2,
        &cyclic_multiplier(p, b * b % p),
        0,
        cap,
    )
}

/// The checks of the non-solvable case: small `PSL(2,p)` identifications,
/// the two extensions of `A5` by `Z_2`, the affine subgroup of `S5`, and the
/// Sylow normalizers of `PSL(2,p)` for `5 < p <= p_max`.
pub fn verify_nonsolvable(p_max: usize, opts: &SweepOptions) -> Result<Report> {
    let started = Instant::now();
    if !(2..=NONSOLVABLE_P_MAX).contains(&p_max) {
        return Err(GroupError::ParamOutOfRange(format!(
            "p_max must be in 2..=13, got {p_max}"
        )));
    }
    let cap = opts.cap;
    let mut cases = Vec::new();

    let small = [
        (2, Family::Symmetric(3), "Dihedral", "S3"),
        (3, Family::Alternating(4), "A4", "A4"),
        (5, Family::Alternating(5), "A5", "A5"),
    ];
    for (p, target, allowed, name) in small.into_iter().filter(|(p, ..)| *p <= p_max) {
        let l = build_family(Family::Psl2(p), cap)?;
        let holds = is_isomorphic(&l, &family(target));
        let check = Check {
            description: format!("PSL(2,{p}) is isomorphic to {name}"),
            holds,
        };
        cases.push(standalone_case(&format!("PSL(2,{p})"), p, &l, &[allowed], check, cap)?);
    }

    if p_max >= 5 {
        let a5 = Arc::new(build_family(Family::Alternating(5), cap)?);
        cases.extend(extension_cases("A5", a5.clone(), 2, &[], cap)?);

        let s5 = build_family(Family::Symmetric(5), cap)?;
        let gens = [find_permutation(&s5, "(12345)")?, find_permutation(&s5, "(2354)")?];
        let affine = generated_subgroup(&s5, &gens)?.to_group(&s5);
        let model = build_ok(&OkDescriptor::Type5 { p: 5, n: 2 }, cap)?;
        let mut case = standalone_case(
            "S5",
            2,
            &s5,
            &[],
            Check {
                description: "<(12345),(2354)> in S5 has order 20 and is the Type5(p=5,n=2) group".into(),
                holds: affine.order() == 20 && is_isomorphic(&affine, &model),
            },
            cap,
        )?;
        let has_type5 = case.findings.iter().any(|f| f.descriptor.kind() == "Type5");
        if let Some(c) = case.check.as_mut() {
            c.holds &= has_type5;
        }
        cases.push(case);

        let a5z2 = direct_product(&a5, &family(Family::Cyclic(2)), cap)?;
        let mut case = standalone_case(
            "A5 x Z2",
            2,
            &a5z2,
            &[],
            Check {
                description: "A5 x Z2 has a Sylow 2-subgroup Z2^3".into(),
                holds: true,
            },
            cap,
        )?;
        let has_t2 = case.findings.iter().any(|f| f.descriptor == OkDescriptor::RuleT2);
        if let Some(c) = case.check.as_mut() {
            c.holds = has_t2;
        }
        cases.push(case);
    }

    let big: Vec<usize> = (7..=p_max).filter(|&p| is_prime(p)).collect();
    let normalizer_cases = map_jobs(big, opts.parallel, |&p| {
        let l = build_family(Family::Psl2(p), cap)?;
        let expected_order = p * (p * p - 1) / 2;
        let sylow = sylow_subgroup(&l, p)?;
        let n = normalizer(&l, &sylow)?.to_group(&l);
        let model = borel_quotient_model(p, cap)?;
        let half = (p - 1) / 2;
        let check = Check {
            description: format!("|PSL(2,{p})| = {expected_order} and its Sylow-{p} normalizer is Z{p} x| Z{half}"),
            holds: l.order() == expected_order && n.order() == p * half && is_isomorphic(&n, &model),
        };
        Ok(vec![standalone_case(
            &format!("N(Syl{p}) in PSL(2,{p})"),
            p,
            &n,
            &[],
            check,
            cap,
        )?])
    })?;
    cases.extend(normalizer_cases);

    Ok(Report::new(
        "verify nonsolvable",
        json!({ "p_max": p_max }),
        cases,
        started,
    ))
}

/// All solvable sweeps at default bounds, concatenated. Confirmed iff
/// every admissible class is one of the polyhedral groups.
pub fn verify_corollary3(opts: &SweepOptions) -> Result<Report> {
    let started = Instant::now();
    let parts = [
        verify_cyclic_kernel(THEOREM3_N_MAX, &THEOREM3_PRIMES, opts)?,
        verify_dihedral_kernel(THEOREM4_N_MAX, &THEOREM4_PRIMES, opts)?,
        verify_a4_s4(&THEOREM56_PRIMES, opts)?,
    ];
    let mut kinds = BTreeSet::new();
    let mut cases = Vec::new();
    for r in &parts {
        kinds.extend(r.admissible_kinds());
        cases.extend(r.cases.iter().cloned());
    }
    let polyhedral = kinds.iter().all(|k| POLYHEDRAL.contains(k));
    Ok(Report::new(
        "verify corollary3",
        json!({
            "sweeps": parts.iter().map(|r| json!({"command": r.command, "parameters": r.parameters})).collect::<Vec<_>>(),
            "admissible_classifications": kinds,
            "polyhedral": polyhedral,
        }),
        cases,
        started,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SweepOptions {
        SweepOptions::default()
    }

    #[test]
    fn z6_by_z2() {
        let cases = extension_cases(
            "Z6",
            Arc::new(family(Family::Cyclic(6))),
            2,
            &["Cyclic", "Dihedral"],
            2000,
        )
        .unwrap();
        assert_eq!(cases.len(), 4);
        let admissible: Vec<String> = cases
            .iter()
            .filter(|c| c.admissible)
            .map(|c| c.classification.to_string())
            .collect();
        assert_eq!(admissible.len(), 2);
        assert!(admissible.contains(&"Cyclic(12)".to_string()));
        assert!(admissible.contains(&"Dihedral(6)".to_string()));
        assert!(cases.iter().all(CaseRecord::is_ok));
    }

    #[test]
    fn small_sweeps_confirm() {
        let r = verify_cyclic_kernel(12, &[2, 3], &quick()).unwrap();
        assert!(r.verdict.is_confirmed(), "{:?}", r.verdict);
        let r = verify_dihedral_kernel(6, &[2, 3], &quick()).unwrap();
        assert!(r.verdict.is_confirmed(), "{:?}", r.verdict);
        assert_eq!(
            r.cases
                .iter()
                .filter(|c| c.classification == Classification::A4)
                .count(),
            2
        );
    }

    #[test]
    fn verdict_follows_cases() {
        let mut r = verify_cyclic_kernel(4, &[2], &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        let i = r.cases.iter().position(|c| !c.findings.is_empty()).unwrap();
        r.cases[i].findings.clear();
        r.cases[i].admissible = true;
        assert_eq!(recompute_verdict(&r.cases), Verdict::Counterexample(vec![i]));
    }

    #[test]
    fn bad_parameters() {
        assert!(verify_cyclic_kernel(10, &[4], &quick()).is_err());
        assert!(verify_cyclic_kernel(1000, &[7], &quick()).is_err());
        assert!(verify_a4_s4(&[11], &quick()).is_err());
        assert!(verify_nonsolvable(17, &quick()).is_err());
    }

    #[test]
    fn verdict_json_shape() {
        assert_eq!(serde_json::to_string(&Verdict::Confirmed).unwrap(), "\"confirmed\"");
        assert_eq!(
            serde_json::to_string(&Verdict::Counterexample(vec![3])).unwrap(),
            "{\"counterexample\":[3]}"
        );
    }
}
