//! Subcommand implementations. Each returns a text rendering, a JSON value and
//! an exit code; errors map to exit code 2.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use snc_core::pair::uncovered_pairs;
use snc_core::search::SearchMode;
use snc_core::{
    blow_up_pair, check_identity_hypothesis, check_tournament_pair, compute_losing_density,
    find_witness, load_fixture, product_inequality_report, read_instance, run_search,
    verify_fixture, Error, InequalityReport, Instance, PairDocument, SearchConfig, WeightVector,
};

use crate::{Command, FixturesCommand, ModeArg, SearchArgs};

pub struct Report {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

impl Report {
    fn new(holds: bool, text: String, json: Value) -> Self {
        Self {
            code: if holds { 0 } else { 1 },
            text,
            json,
        }
    }
}

type Outcome = Result<Report, String>;

fn to_json(value: &impl Serialize) -> Value {
    serde_json::to_value(value).expect("report serializes")
}

fn read(path: &Path) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, doc: &PairDocument) -> Result<(), String> {
    fs::write(path, doc.to_json() + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

fn weights_or_unit(inst: &Instance) -> WeightVector {
    inst.weights
        .clone()
        .unwrap_or_else(|| WeightVector::ones(inst.pair.n()))
}

fn labels(xs: &[usize]) -> String {
    if xs.is_empty() {
        return "none".into();
    }
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Fixtures(FixturesCommand::Verify { id }) => fixtures_verify(*id),
        Command::Fixtures(FixturesCommand::Export { id, output }) => {
            fixtures_export(*id, output.as_deref())
        }
        Command::Check {
            file,
            variant,
            unweighted,
        } => check(file, (*variant).into(), *unweighted),
        Command::Hypotheses { file } => hypotheses(file),
        Command::BlowUp { file, output } => blow_up(file, output),
        Command::Density { file } => density(file),
        Command::Theorem { file } => theorem(file),
        Command::Search(args) => search(args),
    }
}

fn fixtures_verify(id: u8) -> Outcome {
    let report = verify_fixture(id).map_err(|e| e.to_string())?;
    let mut text = String::new();
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        if c.detail.is_empty() {
            writeln!(text, "{mark} {}", c.name).unwrap();
        } else {
            writeln!(text, "{mark} {}: {}", c.name, c.detail).unwrap();
        }
    }
    writeln!(
        text,
        "fixture {id}: {} blow-up vertices",
        report.blow_up_vertices
    )
    .unwrap();
    writeln!(
        text,
        "union inequality holds at vertices {}",
        labels(&report.union_satisfying)
    )
    .unwrap();
    writeln!(
        text,
        "{}",
        if report.passed() {
            "verified"
        } else {
            "verification failed"
        }
    )
    .unwrap();
    Ok(Report::new(report.passed(), text, to_json(&report)))
}

fn fixtures_export(id: u8, output: Option<&Path>) -> Outcome {
    let f = load_fixture(id).map_err(|e| e.to_string())?;
    let doc = PairDocument::from_instance(&f.pair, Some(&f.weights), None);
    match output {
        Some(path) => {
            write(path, &doc)?;
            let text = format!("wrote fixture {id} to {}\n", path.display());
            Ok(Report::new(
                true,
                text,
                json!({ "fixture": id, "output": path }),
            ))
        }
        None => Ok(Report::new(true, doc.to_json() + "\n", to_json(&doc))),
    }
}

fn render_inequality(report: &InequalityReport) -> String {
    let mut text = String::new();
    for r in &report.records {
        let mark = if r.satisfied { "holds" } else { "fails" };
        writeln!(
            text,
            "vertex {}: {} >= {} {mark} (margin {})",
            r.vertex + 1,
            r.lhs,
            r.rhs,
            r.margin
        )
        .unwrap();
    }
    let satisfying: Vec<usize> = report.satisfying.iter().map(|v| v + 1).collect();
    writeln!(
        text,
        "{} satisfying vertices: {}",
        satisfying.len(),
        labels(&satisfying)
    )
    .unwrap();
    text
}

fn check(file: &Path, variant: snc_core::Variant, unweighted: bool) -> Outcome {
    let inst = read(file)?;
    let w = if unweighted {
        WeightVector::ones(inst.pair.n())
    } else {
        weights_or_unit(&inst)
    };
    let report = product_inequality_report(&inst.pair, &w, variant).map_err(|e| e.to_string())?;
    let text = format!("{variant} inequality\n{}", render_inequality(&report));
    Ok(Report::new(
        report.holds_somewhere(),
        text,
        to_json(&report),
    ))
}

#[derive(Serialize)]
struct HypothesesReport {
    identity: bool,
    tournament_pair: bool,
    a_subset_b: bool,
    b_subset_a: bool,
    /// Ordered pairs `(u, v)` with `(u, v) ∉ A` and `(v, u) ∉ B`, 1-based.
    uncovered: Vec<(usize, usize)>,
}

fn hypotheses(file: &Path) -> Outcome {
    let inst = read(file)?;
    let p = &inst.pair;
    let report = HypothesesReport {
        identity: check_identity_hypothesis(p),
        tournament_pair: check_tournament_pair(p),
        a_subset_b: p.a().is_subset(p.b()).map_err(|e| e.to_string())?,
        b_subset_a: p.b().is_subset(p.a()).map_err(|e| e.to_string())?,
        uncovered: uncovered_pairs(p)
            .into_iter()
            .map(|(u, v)| (u + 1, v + 1))
            .collect(),
    };
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = String::new();
    writeln!(text, "A ∩ Bᵀ = I: {}", yes(report.identity)).unwrap();
    writeln!(text, "tournament pair: {}", yes(report.tournament_pair)).unwrap();
    writeln!(text, "A ⊆ B: {}", yes(report.a_subset_b)).unwrap();
    writeln!(text, "B ⊆ A: {}", yes(report.b_subset_a)).unwrap();
    if !report.uncovered.is_empty() {
        let pairs: Vec<String> = report
            .uncovered
            .iter()
            .map(|(u, v)| format!("({u},{v})"))
            .collect();
        writeln!(text, "uncovered pairs: {}", pairs.join(", ")).unwrap();
    }
    Ok(Report::new(report.identity, text, to_json(&report)))
}

fn blow_up(file: &Path, output: &Path) -> Outcome {
    let inst = read(file)?;
    let w = inst
        .weights
        .as_ref()
        .ok_or("blow-up needs a \"weights\" field")?;
    let (big, map) = blow_up_pair(&inst.pair, w).map_err(|e| e.to_string())?;
    // Copy `k` of vertex `v` is labelled `v.k`, both 1-based.
    let copy_labels: Vec<String> = (0..map.total())
        .map(|c| {
            let v = map.origin(c);
            format!("{}.{}", v + 1, c - map.copies(v).start + 1)
        })
        .collect();
    write(
        output,
        &PairDocument::from_instance(&big, None, Some(&copy_labels)),
    )?;
    let text = format!(
        "{} blow-up vertices written to {}\n",
        big.n(),
        output.display()
    );
    let counts = map.counts().to_vec();
    Ok(Report::new(
        true,
        text,
        json!({ "vertices": big.n(), "copies": counts, "output": output }),
    ))
}

fn density(file: &Path) -> Outcome {
    let inst = read(file)?;
    let g = inst.pair.a().strip_loops();
    if !g.is_oriented() {
        return Err(
            "the loop-stripped relation A has a 2-cycle; a losing density needs an oriented graph"
                .into(),
        );
    }
    match compute_losing_density(&g) {
        Ok(l) => {
            let mut text = String::new();
            for (v, (x, s)) in l.values().iter().zip(l.slack()).enumerate() {
                writeln!(text, "l({}) = {x}  (l(N+) - l(N-) = {s})", v + 1).unwrap();
            }
            Ok(Report::new(true, text, to_json(&l)))
        }
        Err(e @ Error::DensityNotFound { .. }) => Ok(Report::new(
            false,
            format!("{e}\n"),
            json!({ "error": e.to_string() }),
        )),
        Err(e) => Err(e.to_string()),
    }
}

fn theorem(file: &Path) -> Outcome {
    let inst = read(file)?;
    if !check_tournament_pair(&inst.pair) {
        return Err("not a tournament pair: needs A ∩ Bᵀ = I and A ∪ Bᵀ = V × V".into());
    }
    let w = weights_or_unit(&inst);
    match find_witness(&inst.pair, &w) {
        Ok(cert) => {
            let mut text = String::new();
            writeln!(
                text,
                "witness: vertex {} ({} >= {})",
                cert.witness + 1,
                cert.witness_lhs,
                cert.witness_rhs
            )
            .unwrap();
            writeln!(text, "density witness: vertex {}", cert.density_witness + 1).unwrap();
            writeln!(
                text,
                "aggregate: {} (transposed {})",
                cert.aggregate.direct, cert.aggregate.transposed
            )
            .unwrap();
            if cert.reduced {
                writeln!(
                    text,
                    "quantities below refer to the reduced pair (A ∩ B, A ∪ B)"
                )
                .unwrap();
            }
            for (vc, l) in cert.vertices.iter().zip(cert.density.values()) {
                writeln!(
                    text,
                    "vertex {}: l = {l}, l(S1) = {}, l(S2) = {}, term = {}",
                    vc.vertex + 1,
                    vc.l_s1,
                    vc.l_s2,
                    vc.term
                )
                .unwrap();
            }
            Ok(Report::new(true, text, to_json(&cert)))
        }
        Err(e @ Error::TheoremViolated(_)) => Ok(Report::new(
            false,
            format!("{e}\n"),
            json!({ "error": e.to_string() }),
        )),
        Err(e) => Err(e.to_string()),
    }
}

fn search(args: &SearchArgs) -> Outcome {
    let (h, v) = (args.hypothesis.into(), args.variant.into());
    let mut config = match args.mode {
        ModeArg::Exhaustive => SearchConfig::exhaustive(args.n, h, v),
        ModeArg::Random => SearchConfig::random(args.n, h, v, args.seed, args.iters),
    };
    config.oracle = args.oracle;
    config.parallelism = args.parallelism.max(1);
    if args.allow_n5 {
        config.exhaustive_bound = snc_core::search::MAX_EXHAUSTIVE_BOUND;
    }
    let report = run_search(config).map_err(|e| e.to_string())?;
    let mut text = String::new();
    let mode = match &report.config.mode {
        SearchMode::Exhaustive => "exhaustive".to_string(),
        SearchMode::Random { seed, iterations } => {
            format!("random (seed {seed}, {iterations} samples)")
        }
    };
    writeln!(
        text,
        "{mode} search, n = {}, {} variant",
        report.config.n, report.config.variant
    )
    .unwrap();
    writeln!(
        text,
        "examined {} pairs in {} ms",
        report.examined, report.wall_time_ms
    )
    .unwrap();
    writeln!(text, "{} counterexamples", report.counterexamples.len()).unwrap();
    for cx in &report.counterexamples {
        writeln!(
            text,
            "#{} ({:?}, violation {}):",
            cx.index, cx.kind, cx.min_violation
        )
        .unwrap();
        writeln!(
            text,
            "{}",
            serde_json::to_string(&cx.instance).expect("document serializes")
        )
        .unwrap();
    }
    writeln!(text, "fingerprint {}", report.fingerprint).unwrap();
    Ok(Report::new(!report.found(), text, to_json(&report)))
}
