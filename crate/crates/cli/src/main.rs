//! Batch front end: reads a `connsys-v1` file, runs one analysis and writes
//! a JSON report to stdout. Progress goes to stderr as JSON lines.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use flowerdeck::abstraction::{build_abstract, build_tree, AbstractSystem, AbstractTree};
use flowerdeck::connsys::{parse_connsys, verify_with, ConnectivitySystem, SubsetMask, VerifyOptions};
use flowerdeck::cyclic::CyclicOrder;
use flowerdeck::error::Error;
use flowerdeck::flowers::{self, classify_with_seed, FlowerKind, MuFunction, Pseudoflower};
use flowerdeck::matroid;
use flowerdeck::profiles::{enumerate_profiles, group_by_truncation};

#[derive(Parser, Debug)]
#[command(name = "flowerdeck", version, about = "Profiles, flowers and tree decompositions of connectivity systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Order bound k.
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Petals as a JSON array of label arrays.
    #[arg(long, global = true)]
    partition: Option<String>,
    /// Cyclic order of the petals as a JSON array of petal indices.
    #[arg(long, global = true)]
    order: Option<String>,
    /// Largest ground set checked exhaustively; larger ones are sampled.
    #[arg(long, global = true, default_value_t = 14)]
    exhaustive_limit: usize,
    /// Cross-check reference petals and other redundant choices.
    #[arg(long, global = true)]
    audit: bool,
    /// Write the decomposition tree as Graphviz to this path.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Check symmetry and submodularity.
    Verify { input: PathBuf },
    /// List the regular k-profiles.
    Profiles { input: PathBuf },
    /// Validate a k-pseudoflower, reporting an offending interval.
    Flower { input: PathBuf },
    /// Classify a partition with cyclic order.
    Classify { input: PathBuf },
    /// Refine the petals of an anemone.
    Refine { input: PathBuf },
    /// Build the abstract separation system and its tree.
    Abstract { input: PathBuf },
    /// Run the matroid connectivity calculus checks.
    MatroidChecks { input: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Profiles { .. } => "profiles",
            Command::Flower { .. } => "flower",
            Command::Classify { .. } => "classify",
            Command::Refine { .. } => "refine",
            Command::Abstract { .. } => "abstract",
            Command::MatroidChecks { .. } => "matroid-checks",
        }
    }

    fn input(&self) -> &Path {
        match self {
            Command::Verify { input }
            | Command::Profiles { input }
            | Command::Flower { input }
            | Command::Classify { input }
            | Command::Refine { input }
            | Command::Abstract { input }
            | Command::MatroidChecks { input } => input,
        }
    }
}

/// Outcome of a command: a report and whether every check passed.
struct Outcome {
    report: Value,
    passed: bool,
}

fn ok(report: Value) -> Outcome {
    Outcome { report, passed: true }
}

fn progress(event: &str, detail: Value) {
    eprintln!("{}", json!({"event": event, "detail": detail}));
}

fn seed() -> Result<u64, Error> {
    match std::env::var("FLOWERDECK_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Input(format!("FLOWERDECK_SEED {s:?} is not a number"))),
        Err(_) => Ok(0),
    }
}

fn labels(sys: &ConnectivitySystem, x: SubsetMask) -> Vec<String> {
    sys.ground().labels_of(x)
}

fn need_k(cli: &Cli) -> Result<u32, Error> {
    cli.k.ok_or_else(|| Error::Input("this command needs --k".into()))
}

/// Petals and cyclic order from `--partition` and `--order`.
fn candidate(cli: &Cli, sys: &ConnectivitySystem) -> Result<(Vec<SubsetMask>, CyclicOrder), Error> {
    let Some(text) = &cli.partition else {
        return Err(Error::Input("this command needs --partition".into()));
    };
    let raw: Vec<Vec<String>> = serde_json::from_str(text)?;
    let petals = raw.iter().map(|p| sys.ground().mask(p)).collect::<Result<Vec<_>, _>>()?;
    let covered = petals.iter().fold(SubsetMask::EMPTY, |m, &p| m.union(p));
    let total: usize = petals.iter().map(|p| p.len()).sum();
    if petals.iter().any(|p| p.is_empty()) || covered != sys.full() || total != sys.n() {
        return Err(Error::Input("--partition must split the ground set into nonempty petals".into()));
    }
    let order = match &cli.order {
        Some(text) => CyclicOrder::new(serde_json::from_str(text)?)?,
        None => CyclicOrder::identity(petals.len()),
    };
    if order.len() != petals.len() || order.ring().iter().any(|&i| i >= petals.len()) {
        return Err(Error::Input("--order must list every petal index once".into()));
    }
    Ok((petals, order))
}

fn cmd_verify(cli: &Cli, sys: &ConnectivitySystem) -> Result<Outcome, Error> {
    let opts = VerifyOptions { exhaustive_limit: cli.exhaustive_limit, seed: seed()?, ..VerifyOptions::default() };
    let r = verify_with(sys, &opts);
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| json!({"property": w.property, "a": labels(sys, w.a), "b": labels(sys, w.b)}))
        .collect();
    let report = json!({"passed": r.passed, "exhaustive": r.exhaustive, "checked": r.checked, "witnesses": witnesses});
    Ok(Outcome { report, passed: r.passed })
}

fn cmd_profiles(cli: &Cli, sys: &ConnectivitySystem) -> Result<Outcome, Error> {
    let k = need_k(cli)?;
    let ps = enumerate_profiles(sys, k)?;
    let list: Vec<Value> = ps.iter().map(|p| json!({"sides": p.to_json(sys.ground())})).collect();
    Ok(ok(json!({"k": k, "count": ps.len(), "profiles": list})))
}

fn not_pseudoflower(sys: &ConnectivitySystem, e: &Error) -> Option<Value> {
    match e {
        Error::NotPseudoflower { k, interval, side, order } => Some(json!({
            "valid": false,
            "k": k,
            "witness": {"interval": interval, "side": labels(sys, *side), "order": order},
        })),
        _ => None,
    }
}

fn cmd_flower(cli: &Cli, sys: &ConnectivitySystem) -> Result<Outcome, Error> {
    let k = need_k(cli)?;
    let (petals, order) = candidate(cli, sys)?;
    match Pseudoflower::new(sys, k, petals, order) {
        Ok(f) => {
            let kind = classify_with_seed(sys, &f, seed()?)?;
            Ok(ok(json!({"valid": true, "k": k, "kind": kind, "flower": f.to_json(sys.ground())})))
        }
        Err(e) => match not_pseudoflower(sys, &e) {
            Some(report) => Ok(Outcome { report, passed: false }),
            None => Err(e),
        },
    }
}

fn cmd_classify(cli: &Cli, sys: &ConnectivitySystem) -> Result<Outcome, Error> {
    let k = need_k(cli)?;
    let (petals, order) = candidate(cli, sys)?;
    match Pseudoflower::new(sys, k, petals, order) {
        Ok(f) => Ok(ok(json!({"k": k, "kind": classify_with_seed(sys, &f, seed()?)?}))),
        Err(e) => match not_pseudoflower(sys, &e) {
            Some(mut report) => {
                report["kind"] = json!(FlowerKind::NotFlower);
                Ok(ok(report))
            }
            None => Err(e),
        },
    }
}

fn cmd_refine(cli: &Cli, sys: &ConnectivitySystem) -> Result<Outcome, Error> {
    let k = need_k(cli)?;
    let (petals, order) = candidate(cli, sys)?;
    let f = Pseudoflower::new(sys, k, petals, order)?;
    let mut per_petal = Vec::new();
    for r in 0..f.num_petals() {
        let i = f.at(r);
        if cli.audit {
            MuFunction::new(sys, &f, i, true)?;
        }
        let parts = flowers::petal_refinement(sys, &f, i)?;
        per_petal.push(json!({"petal": labels(sys, f.petal(i)), "classes": parts.iter().map(|&p| labels(sys, p)).collect::<Vec<_>>()}));
    }
    let finest = if classify_with_seed(sys, &f, seed()?)? == FlowerKind::Anemone && f.num_petals() as u32 > k {
        let g = flowers::maximal_strong_anemone(sys, &f)?;
        Some(g.canonical_ring().iter().map(|&p| labels(sys, p)).collect::<Vec<_>>())
    } else {
        None
    };
    Ok(ok(json!({"k": k, "audited": cli.audit, "petals": per_petal, "finest": finest})))
}

fn family_report(asys: &AbstractSystem, tree: &AbstractTree, sys: &ConnectivitySystem) -> Value {
    let fam = asys.family().expect("built from a family");
    let members: Vec<Value> = fam.profiles().iter().map(|p| json!(p.to_json(sys.ground()))).collect();
    json!({"size": fam.len(), "members": members, "system": asys.to_json(), "tree": tree.to_json()})
}

fn cmd_abstract(cli: &Cli, sys: &ConnectivitySystem) -> Result<Outcome, Error> {
    let k = need_k(cli)?;
    let ps = enumerate_profiles(sys, k)?;
    progress("profiles", json!({"count": ps.len()}));
    let families = group_by_truncation(sys, &ps)?;
    let mut reports = Vec::new();
    let mut best: Option<(usize, String)> = None;
    for fam in &families {
        let asys = build_abstract(sys, fam)?;
        let tree = build_tree(&asys)?;
        progress("family", json!({"size": fam.len(), "vertices": tree.vertices.len()}));
        if best.as_ref().is_none_or(|(n, _)| fam.len() > *n) {
            best = Some((fam.len(), tree.to_dot(&asys)));
        }
        reports.push(family_report(&asys, &tree, sys));
    }
    if let Some(path) = &cli.dot {
        let dot = best.map(|(_, d)| d).unwrap_or_else(|| "graph abstract_tree {\n}\n".into());
        fs::write(path, dot).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(ok(json!({"k": k, "profiles": ps.len(), "families": reports})))
}

fn cmd_matroid_checks(cli: &Cli, sys: &ConnectivitySystem) -> Result<Outcome, Error> {
    let Some(m) = sys.matroid() else {
        return Err(Error::Input("matroid-checks needs a matroid-backed input".into()));
    };
    let n = m.n();
    if n > cli.exhaustive_limit.min(12) {
        return Err(Error::Precondition(format!("{n} elements exceed the exhaustive limit for matroid checks")));
    }
    let identities = matroid::check_connectivity_identities(m)?;
    progress("identities", json!({"checks": identities}));
    let mut base_pairs = 0;
    let mut reductions = 0;
    for x in m.full().subsets() {
        matroid::base_pair_connectivity(m, x)?;
        base_pairs += 1;
        // X = E would leave the empty matroid.
        if x != m.full() {
            reductions += matroid::reduce_class(m, x)?.checks;
        }
    }
    progress("subsets", json!({"base_pairs": base_pairs}));
    let mut flower_reports = Vec::new();
    for f in flowers::search_flowers(sys, 5) {
        let (primal, dual) = matroid::dual_flower_check(m, &f)?;
        let mut minors = Vec::new();
        for i in 0..f.num_petals() {
            let del = matroid::delete_petal(m, &f, i)?;
            let con = matroid::contract_petal(m, &f, i)?;
            minors.push(json!({"petal": i, "deletion": del.params, "contraction": con.params}));
        }
        flower_reports.push(json!({
            "petals": f.canonical_ring().iter().map(|&p| labels(sys, p)).collect::<Vec<_>>(),
            "kind": flowers::classify(sys, &f)?,
            "parameters": primal,
            "dual": dual,
            "minors": minors,
        }));
    }
    Ok(ok(json!({
        "elements": n,
        "identity_checks": identities,
        "base_pair_checks": base_pairs,
        "reduction_checks": reductions,
        "flowers": flower_reports,
    })))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let path = cli.command.input();
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let sys = parse_connsys(&text)?;
    progress("loaded", json!({"command": cli.command.name(), "elements": sys.n()}));
    match &cli.command {
        Command::Verify { .. } => cmd_verify(cli, &sys),
        Command::Profiles { .. } => cmd_profiles(cli, &sys),
        Command::Flower { .. } => cmd_flower(cli, &sys),
        Command::Classify { .. } => cmd_classify(cli, &sys),
        Command::Refine { .. } => cmd_refine(cli, &sys),
        Command::Abstract { .. } => cmd_abstract(cli, &sys),
        Command::MatroidChecks { .. } => cmd_matroid_checks(cli, &sys),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        progress("error", json!(e.to_string()));
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(out) => {
            println!("{}", serde_json::to_string_pretty(&out.report).expect("reports serialize"));
            progress("done", json!({"passed": out.passed}));
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) if e.is_input() => {
            progress("error", json!(e.to_string()));
            ExitCode::from(2)
        }
        Err(e) => {
            let kind = match e {
                Error::Precondition(_) => "precondition",
                Error::NotPseudoflower { .. } => "not-pseudoflower",
                _ => "invariant",
            };
            println!("{}", serde_json::to_string_pretty(&json!({"passed": false, "error": kind, "message": e.to_string()})).expect("serializes"));
            progress("done", json!({"passed": false}));
            ExitCode::from(1)
        }
    }
}
