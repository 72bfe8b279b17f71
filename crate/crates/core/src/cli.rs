//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::aut::{automorphisms, inn_out, DEFAULT_AUT_CAP};
use crate::cohomology::{h2_cyclic, AbelianModule};
use crate::error::GroupError;
use crate::extension::{classify, enumerate_extensions, is_split, iso_classes, ExtensionProblem};
use crate::group::{Group, DEFAULT_ORDER_CAP, EXHAUSTIVE_ASSOC_LIMIT};
use crate::ok::{scan, ScanOptions};
use crate::presentation::{action_automorphism, parse_presentation, GroupSpec, PresentationError};
use crate::subgroup::center;
use crate::verify::{self, CaseRecord, Report, SweepOptions, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "grouplab",
    version,
    about = "Finite group extensions by Z_p and obstruction sweeps"
)]
struct Cli {
    /// Largest group order any command may construct.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    cap: usize,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON output to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Seed for the sampled associativity check on large groups.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a group, validate its table and summarize it.
    Build { spec: String },
    /// Order of a group, or of one of its elements.
    Order {
        spec: String,
        /// Element label, e.g. "(12345)" or "(3,1)".
        #[arg(long)]
        element: Option<String>,
    },
    /// Size of the automorphism group.
    Aut { spec: String },
    /// Inner automorphisms and outer class representatives.
    InnOut { spec: String },
    /// H^2(Z_m, A) for an abelian A with the given action.
    H2 {
        /// Abelian coefficient group, e.g. "Z6" or "Z2 x Z4".
        kernel: String,
        #[arg(short, long)]
        m: usize,
        /// Image of the generator: one unit per cyclic factor.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        action: Option<Vec<i64>>,
    },
    /// List the extensions of a kernel by Z_p up to equivalence.
    Ext {
        kernel: String,
        #[arg(short, long)]
        p: usize,
        /// Restrict to the outer class of this action.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        action: Option<Vec<i64>>,
    },
    /// Search a group for obstruction subgroups; exits 1 if any is found.
    OkScan {
        spec: String,
        /// Try every parameter value and report every descriptor found.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Place a group in the cyclic/dihedral/A4/S4/A5 taxonomy.
    Classify { spec: String },
    /// Run a theorem sweep; exits 1 on a counterexample.
    Verify {
        #[command(subcommand)]
        sweep: Sweep,
    },
}

#[derive(Debug, Subcommand)]
enum Sweep {
    /// Extensions of cyclic kernels.
    Theorem3 {
        #[arg(long, default_value_t = verify::THEOREM3_N_MAX)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_values_t = verify::THEOREM3_PRIMES)]
        primes: Vec<usize>,
    },
    /// Extensions of dihedral kernels.
    Theorem4 {
        #[arg(long, default_value_t = verify::THEOREM4_N_MAX)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_values_t = verify::THEOREM4_PRIMES)]
        primes: Vec<usize>,
    },
    /// Extensions of A4 and S4.
    #[command(name = "theorem5-6")]
    Theorem56 {
        #[arg(long, value_delimiter = ',', default_values_t = verify::THEOREM56_PRIMES)]
        primes: Vec<usize>,
    },
    /// PSL(2,p) identifications, A5 by Z2, Sylow normalizers.
    Nonsolvable {
        #[arg(long, default_value_t = verify::NONSOLVABLE_P_MAX)]
        p_max: usize,
    },
    /// All solvable sweeps at default bounds, aggregated.
    Corollary3,
}

#[derive(Debug)]
enum Failure {
    Parse(PresentationError),
    Group(GroupError),
}

impl From<PresentationError> for Failure {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::Semantic(g) => Failure::Group(g),
            other => Failure::Parse(other),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::Group(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Parse(e) => write!(f, "{e}"),
            Failure::Group(e) => write!(f, "{e}"),
        }
    }
}

/// What a command produced: text for humans, JSON for `--json`/`--report`.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            if let Some(path) = &cli.report {
                let body = serde_json::to_string_pretty(&o.json).expect("json serializes");
                if let Err(e) = std::fs::write(path, body + "\n") {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            let _ = if cli.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&o.json).expect("json serializes")
                )
            } else {
                write!(out, "{}", o.text)
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn parse(text: &str) -> Result<GroupSpec, Failure> {
    Ok(parse_presentation(text)?)
}

fn build(spec: &GroupSpec, cap: usize) -> Result<Group, Failure> {
    Ok(spec.build(cap)?)
}

fn census(g: &Group) -> Value {
    let m: serde_json::Map<String, Value> = g
        .order_profile()
        .into_iter()
        .map(|(o, c)| (o.to_string(), json!(c)))
        .collect();
    Value::Object(m)
}

fn census_text(g: &Group) -> String {
    g.order_profile()
        .into_iter()
        .map(|(o, c)| format!("{o}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let cap = cli.cap;
    let header = |command: &str, parameters: Value| json!({ "tool_version": TOOL_VERSION, "command": command, "parameters": parameters });
    let merge = |mut base: Value, extra: Value| {
        if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
            b.extend(e);
        }
        base
    };
    match &cli.command {
        Command::Build { spec } => {
            let s = parse(spec)?;
            let g = build(&s, cap)?;
            g.validate(cli.seed)?;
            let check = if g.order() <= EXHAUSTIVE_ASSOC_LIMIT {
                "exhaustive"
            } else {
                "sampled"
            };
            let c = classify(&g);
            Ok(Output {
                text: format!(
                    "group: {s}\norder: {}\nclassification: {c}\nabelian: {}\ncenter order: {}\nelement orders: {}\nassociativity: {check}\n",
                    g.order(),
                    g.is_abelian(),
                    center(&g).len(),
                    census_text(&g)
                ),
                json: merge(
                    header("build", json!({ "spec": s.to_string(), "seed": cli.seed })),
                    json!({
                        "order": g.order(),
                        "classification": c,
                        "abelian": g.is_abelian(),
                        "center_order": center(&g).len(),
                        "element_orders": census(&g),
                        "associativity_check": check,
                    }),
                ),
                code: EXIT_OK,
            })
        }
        Command::Order { spec, element } => {
            let s = parse(spec)?;
            let g = build(&s, cap)?;
            match element {
                None => Ok(Output {
                    text: format!("{}\n", g.order()),
                    json: merge(
                        header("order", json!({ "spec": s.to_string() })),
                        json!({ "order": g.order() }),
                    ),
                    code: EXIT_OK,
                }),
                Some(label) => {
                    let x = g.element_by_label(label).ok_or_else(|| {
                        Failure::Group(GroupError::ParamOutOfRange(format!(
                            "no element labelled {label:?} in {s}"
                        )))
                    })?;
                    let o = g.element_order(x);
                    Ok(Output {
                        text: format!("{o}\n"),
                        json: merge(
                            header("order", json!({ "spec": s.to_string(), "element": label })),
                            json!({ "order": o }),
                        ),
                        code: EXIT_OK,
                    })
                }
            }
        }
        Command::Aut { spec } => {
            let s = parse(spec)?;
            let g = build(&s, cap)?;
            let auts = automorphisms(&g, DEFAULT_AUT_CAP)?;
            Ok(Output {
                text: format!("|Aut({s})| = {}\n", auts.len()),
                json: merge(
                    header("aut", json!({ "spec": s.to_string() })),
                    json!({ "aut_order": auts.len() }),
                ),
                code: EXIT_OK,
            })
        }
        Command::InnOut { spec } => {
            let s = parse(spec)?;
            let g = build(&s, cap)?;
            let io = inn_out(&g, DEFAULT_AUT_CAP)?;
            let gens = g.generating_set();
            let reps: Vec<Value> = io
                .outer_reps
                .iter()
                .map(|a| {
                    let m: serde_json::Map<String, Value> = gens
                        .iter()
                        .map(|&x| (g.label(x).to_string(), json!(g.label(a.apply(x)))))
                        .collect();
                    Value::Object(m)
                })
                .collect();
            let mut text = format!("|Inn| = {}\n|Out| = {}\n", io.inner.len(), io.outer_reps.len());
            for (i, a) in io.outer_reps.iter().enumerate() {
                let images: Vec<String> = gens
                    .iter()
                    .map(|&x| format!("{} -> {}", g.label(x), g.label(a.apply(x))))
                    .collect();
                text.push_str(&format!("outer {i}: {}\n", images.join(", ")));
            }
            Ok(Output {
                text,
                json: merge(
                    header("inn-out", json!({ "spec": s.to_string() })),
                    json!({ "inn_order": io.inner.len(), "out_order": io.outer_reps.len(), "outer_representatives": reps }),
                ),
                code: EXIT_OK,
            })
        }
        Command::H2 { kernel, m, action } => {
            let s = parse(kernel)?;
            let g = build(&s, cap)?;
            let module = match action {
                Some(a) => {
                    let alpha = action_automorphism(&s, &g, a)?;
                    AbelianModule::new(g, alpha)?
                }
                None => AbelianModule::trivial(g)?,
            };
            let h = h2_cyclic(*m, &module)?;
            Ok(Output {
                text: format!("H^2(Z{m}, {s}) = {h}\n"),
                json: merge(
                    header("h2", json!({ "kernel": s.to_string(), "m": m, "action": action })),
                    json!({ "invariants": h.factors(), "order": h.order() }),
                ),
                code: EXIT_OK,
            })
        }
        Command::Ext { kernel, p, action } => {
            let s = parse(kernel)?;
            let g = Arc::new(build(&s, cap)?);
            let mut prob = ExtensionProblem::new(g.clone(), *p).with_cap(cap);
            if let Some(a) = action {
                prob = prob.with_action(action_automorphism(&s, &g, a)?);
            }
            let exts = enumerate_extensions(&prob)?;
            let iso = iso_classes(&exts);
            let opts = ScanOptions { exhaustive: false, cap };
            let mut cases = Vec::new();
            let mut text = format!("{} extension class(es) of {s} by Z{p}\n", exts.len());
            for (i, e) in exts.iter().enumerate() {
                let found = scan(e.total(), &opts)?;
                let c = classify(e.total());
                let split = is_split(e);
                let names: Vec<String> = found.iter().map(|f| f.descriptor.to_string()).collect();
                text.push_str(&format!(
                    "class {i}: order {}, {}, {c}, iso class {}, findings: {}\n",
                    e.total().order(),
                    if split { "split" } else { "non-split" },
                    iso[i],
                    if names.is_empty() {
                        "none".to_string()
                    } else {
                        names.join(" ")
                    }
                ));
                cases.push(CaseRecord {
                    kernel: s.to_string(),
                    prime: *p,
                    class_index: i,
                    split: Some(split),
                    total_order: e.total().order(),
                    classification: c,
                    findings: found
                        .iter()
                        .map(|f| verify::FindingRecord {
                            descriptor: f.descriptor,
                            witness: f.witness.iter().map(|&x| e.total().label(x).to_string()).collect(),
                        })
                        .collect(),
                    admissible: found.is_empty(),
                    iso_class: iso[i],
                    allowed: verify::POLYHEDRAL
                        .iter()
                        .chain(["A5"].iter())
                        .map(|s| s.to_string())
                        .collect(),
                    check: None,
                });
            }
            Ok(Output {
                text,
                json: merge(
                    header("ext", json!({ "kernel": s.to_string(), "p": p, "action": action })),
                    json!({ "cases": cases }),
                ),
                code: EXIT_OK,
            })
        }
        Command::OkScan { spec, exhaustive } => {
            let s = parse(spec)?;
            let g = build(&s, cap)?;
            let found = scan(
                &g,
                &ScanOptions {
                    exhaustive: *exhaustive,
                    cap,
                },
            )?;
            let mut text = String::new();
            if found.is_empty() {
                text.push_str("admissible: no obstruction found\n");
            }
            let mut records = Vec::new();
            for f in &found {
                let witness: Vec<&str> = f.witness.iter().map(|&x| g.label(x)).collect();
                text.push_str(&format!("{} witness {}\n", f.descriptor, witness.join(" ")));
                records.push(json!({ "descriptor": f.descriptor, "witness": witness }));
            }
            Ok(Output {
                text,
                json: merge(
                    header("ok-scan", json!({ "spec": s.to_string(), "exhaustive": exhaustive })),
                    json!({ "order": g.order(), "classification": classify(&g), "findings": records, "admissible": found.is_empty() }),
                ),
                code: if found.is_empty() { EXIT_OK } else { EXIT_FINDING },
            })
        }
        Command::Classify { spec } => {
            let s = parse(spec)?;
            let g = build(&s, cap)?;
            let c = classify(&g);
            Ok(Output {
                text: format!("{c}\n"),
                json: merge(
                    header("classify", json!({ "spec": s.to_string() })),
                    json!({ "classification": c }),
                ),
                code: EXIT_OK,
            })
        }
        Command::Verify { sweep } => {
            let opts = SweepOptions { cap, parallel: true };
            let report = match sweep {
                Sweep::Theorem3 { n_max, primes } => verify::verify_cyclic_kernel(*n_max, primes, &opts)?,
                Sweep::Theorem4 { n_max, primes } => verify::verify_dihedral_kernel(*n_max, primes, &opts)?,
                Sweep::Theorem56 { primes } => verify::verify_a4_s4(primes, &opts)?,
                Sweep::Nonsolvable { p_max } => verify::verify_nonsolvable(*p_max, &opts)?,
                Sweep::Corollary3 => verify::verify_corollary3(&opts)?,
            };
            Ok(report_output(&report))
        }
    }
}

fn report_output(r: &Report) -> Output {
    let rejected = r.cases.iter().filter(|c| !c.findings.is_empty()).count();
    let admissible = r.cases.len() - rejected;
    let mut text = format!(
        "{}: {} cases, {} admissible, {} rejected by obstruction\n",
        r.command,
        r.cases.len(),
        admissible,
        rejected
    );
    match &r.verdict {
        verify::Verdict::Confirmed => text.push_str("verdict: confirmed\n"),
        verify::Verdict::Counterexample(bad) => {
            text.push_str(&format!("verdict: counterexample ({} case(s))\n", bad.len()));
            for &i in bad {
                let c = &r.cases[i];
                text.push_str(&format!(
                    "  case {i}: kernel {} by Z{}, class {}, {}\n",
                    c.kernel, c.prime, c.class_index, c.classification
                ));
            }
        }
    }
    Output {
        text,
        json: serde_json::to_value(r).expect("report serializes"),
        code: if r.verdict.is_confirmed() {
            EXIT_OK
        } else {
            EXIT_FINDING
        },
    }
}
