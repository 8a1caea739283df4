//! Command-line surface: validated configs, dispatch, and JSON reports.
//!
//! Every run prints exactly one JSON report to stdout (or to `--out`) and a
//! one-line human summary to stderr.  The exit code states the verdict:
//!
//! * `0` — the computation ran and confirmed every checked expectation;
//! * `2` — the computation ran but contradicted a checked expectation (the
//!   report's `trace` field carries the full detail);
//! * `1` — the request itself was unusable (bad flags, out-of-domain
//!   parameters, too small a budget).
//!
//! Reports are deterministic: identical configs produce byte-identical
//! reports regardless of the `--parallel` setting, with one documented
//! exception — the trailing `wall_time_ms` field is measurement metadata
//! and varies run to run.  Comparisons should strip it.

use std::io::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coclique::{
    coclique_closure, graph_csv, graph_dot, graph_edges, reproduce_lemma_3_2, split_subgroup_maximality, theorem_status, CocliqueError,
    TheoremStatus,
};
use crate::group::{ambient_group, GroupKind};
use crate::perm::parse_cycles;
use crate::prime_degree::{prime_degree_check, verify_agl_facts, PrimeDegreeError};
use crate::primes::{bertrand_pk, lemma23_check, prime_p1, prime_p2, PrimeError};
use crate::witness::{
    find_witness, verify_witness, NoWitnessCertificate, Scenario, SearchBudget, WitnessError,
    WitnessOutcome,
};

/// Default cap on generation tests per swept element, matching the search
/// budget the witness machinery uses.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Largest degree for which `verify` backs the arithmetic criterion with an
/// exhaustive class-reduced sweep.
pub const VERIFY_EXHAUSTIVE_MAX: u16 = 11;

/// The survivor table the reproduction command must reproduce: every
/// `(kind, n, k)` whose split subgroup fails to be a maximal coclique in
/// range `4 ≤ n ≤ 11`.
pub const KNOWN_SURVIVORS: [(GroupKind, u16, u16); 8] = [
    (GroupKind::Sym, 4, 3),
    (GroupKind::Alt, 5, 3),
    (GroupKind::Alt, 6, 4),
    (GroupKind::Sym, 6, 4),
    (GroupKind::Sym, 8, 6),
    (GroupKind::Sym, 9, 6),
    (GroupKind::Sym, 10, 6),
    (GroupKind::Sym, 10, 8),
];

/// Command-line interface: one verification command per run.
#[derive(Debug, Parser)]
#[command(
    name = "cogen",
    version,
    about = "Coclique verification in generating graphs of symmetric and alternating groups",
    after_help = "Exit codes: 0 expectations confirmed; 2 expectation mismatch (see the \
                  report's trace); 1 usage error.\nThe COGEN_BUDGET environment variable \
                  overrides the default search budget; --budget overrides both."
)]
pub struct Cli {
    /// The verification command to run.
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
    /// Maximum generation tests per swept element (default 10^6, or
    /// COGEN_BUDGET when set).
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    /// Worker threads for parallel sweeps (default: all cores). Never
    /// affects report content.
    #[arg(long, global = true, value_name = "N")]
    pub parallel: Option<usize>,
}

/// Ambient group kind, as a flag value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    /// The symmetric group.
    Sym,
    /// The alternating group.
    Alt,
}

impl From<GroupArg> for GroupKind {
    fn from(g: GroupArg) -> GroupKind {
        match g {
            GroupArg::Sym => GroupKind::Sym,
            GroupArg::Alt => GroupKind::Alt,
        }
    }
}

/// Output shape for the graph command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    /// Edge list embedded in the JSON report.
    Json,
    /// CSV rendering embedded as a string.
    Csv,
    /// Graphviz DOT rendering embedded as a string.
    Dot,
}

/// The eight verification commands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the split subgroup (S_k x S_{n-k}) ∩ G is a maximal
    /// coclique, and cross-check the arithmetic criterion exhaustively at
    /// small degree.
    Verify {
        /// Ambient degree.
        #[arg(long)]
        n: u16,
        /// Larger part size, n/2 < k < n.
        #[arg(long)]
        k: u16,
        /// Ambient group kind.
        #[arg(long, value_enum)]
        group: GroupArg,
    },
    /// Search for a generating partner y in the split subgroup for a given
    /// element x, or certify that none exists.
    Witness {
        /// Ambient degree.
        #[arg(long)]
        n: u16,
        /// Larger part size, n/2 < k < n.
        #[arg(long)]
        k: u16,
        /// Ambient group kind.
        #[arg(long, value_enum)]
        group: GroupArg,
        /// The element x in cycle notation, e.g. "(1,8)" or "(1,8)(2,3)".
        #[arg(long)]
        x: String,
    },
    /// Compute the unique maximal coclique containing a non-maximal split
    /// subgroup, with certification.
    Closure {
        /// Ambient degree.
        #[arg(long)]
        n: u16,
        /// Larger part size, n/2 < k < n.
        #[arg(long)]
        k: u16,
        /// Ambient group kind.
        #[arg(long, value_enum)]
        group: GroupArg,
    },
    /// Export the full generating graph of a small group.
    Graph {
        /// Ambient degree (at most 7).
        #[arg(long)]
        n: u16,
        /// Ambient group kind.
        #[arg(long, value_enum)]
        group: GroupArg,
        /// Output rendering.
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Produce and re-verify the prime witnesses the interval arguments use.
    Primes {
        /// Part size k.
        #[arg(long)]
        k: u64,
        /// Ambient degree n (enables the two n-dependent searches).
        #[arg(long)]
        n: Option<u64>,
    },
    /// Check the structural facts of the one-dimensional affine group of
    /// prime degree.
    Agl {
        /// Prime degree (3 to 101).
        #[arg(long)]
        p: u16,
    },
    /// Run the full coclique verdict sweep over every subgroup family at
    /// prime degree 5 or 7.
    PrimeDegree {
        /// Prime degree (5 or 7).
        #[arg(long)]
        p: u16,
        /// Ambient group kind.
        #[arg(long, value_enum)]
        group: GroupArg,
    },
    /// Reproduce the table of split subgroups that fail maximality, by
    /// exhaustive sweep up to a degree bound.
    #[command(name = "reproduce-3-2")]
    Reproduce32 {
        /// Largest degree to sweep (4 to 11).
        #[arg(long = "max-n")]
        max_n: u16,
    },
}

/// Echo of the validated configuration, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Command name as typed.
    pub command: String,
    /// Ambient degree, where the command takes one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    /// Part size, where the command takes one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    /// Prime degree, where the command takes one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u16>,
    /// Degree bound for sweep commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<u16>,
    /// Ambient group kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupKind>,
    /// Element in cycle notation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    /// Graph rendering format.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// Effective search budget.
    pub budget: u64,
    /// Requested worker threads; absent means all cores.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallel: Option<usize>,
}

/// Verdict of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunOutcome {
    /// Every checked expectation held.
    Confirmed,
    /// A checked expectation failed; `trace` explains.
    Mismatch,
}

/// The JSON report a run emits.
///
/// `wall_time_ms` is the only field excluded from the byte-identity
/// determinism contract; it is serialized last so trimmed comparisons are
/// easy.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Tool name.
    pub tool: &'static str,
    /// Tool version.
    pub version: &'static str,
    /// Echo of the validated configuration.
    pub config: RunConfig,
    /// Verdict: `confirmed` or `mismatch`.
    pub outcome: RunOutcome,
    /// Command-specific result payload.
    pub result: Value,
    /// Expectation failures, empty on confirmation.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    /// Wall-clock duration of the run in milliseconds (measurement
    /// metadata; varies run to run).
    pub wall_time_ms: u64,
}

impl Report {
    /// The exit code this report's outcome dictates.
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            RunOutcome::Confirmed => 0,
            RunOutcome::Mismatch => 2,
        }
    }
}

/// A request that cannot be run: maps to exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Result payload plus expectation failures, before envelope assembly.
struct CommandOutput {
    result: Value,
    trace: Vec<String>,
}

/// Resolves the effective budget: `--budget` wins, then `COGEN_BUDGET`,
/// then the default.  Zero is rejected — budgets must be positive.
fn resolve_budget(flag: Option<u64>) -> Result<u64, UsageError> {
    let value = flag
        .or_else(|| {
            std::env::var("COGEN_BUDGET")
                .ok()
                .and_then(|raw| raw.trim().parse().ok())
        })
        .unwrap_or(DEFAULT_BUDGET);
    if value == 0 {
        return Err(UsageError(
            "budget must be positive (got 0); omit --budget for the default".into(),
        ));
    }
    Ok(value)
}

/// Runs a parsed command line and assembles the report.
///
/// # Errors
/// [`UsageError`] when the request is out of domain or otherwise unusable;
/// the caller should print the message and exit with code 1.
pub fn run(cli: &Cli) -> Result<Report, UsageError> {
    let started = Instant::now();
    let budget = resolve_budget(cli.budget)?;
    let config = echo_config(cli, budget);
    let output = dispatch(&cli.command, budget)?;
    let outcome = if output.trace.is_empty() {
        RunOutcome::Confirmed
    } else {
        RunOutcome::Mismatch
    };
    Ok(Report {
        tool: "cogen",
        version: env!("CARGO_PKG_VERSION"),
        config,
        outcome,
        result: output.result,
        trace: output.trace,
        wall_time_ms: u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX),
    })
}

/// Full entry point: configures the worker pool, runs, prints the report
/// (stdout or `--out`) and the stderr summary, and returns the exit code.
pub fn main_entry(cli: &Cli) -> i32 {
    if let Some(threads) = cli.parallel {
        // Build the global pool with the requested width. A failure means a
        // pool already exists (e.g. repeated calls in tests); results do not
        // depend on pool width, so proceed either way.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let report = match run(cli) {
        Ok(report) => report,
        Err(usage) => {
            eprintln!("error: {usage}");
            return 1;
        }
    };
    let mut rendered = match serde_json::to_string_pretty(&report) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: failed to serialize report: {e}");
            return 1;
        }
    };
    rendered.push('\n');
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, rendered.as_bytes()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
    } else {
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(rendered.as_bytes()).is_err() {
            return 1;
        }
    }
    let summary = summarize(&report);
    eprintln!("{summary}");
    for line in &report.trace {
        eprintln!("MISMATCH: {line}");
    }
    report.exit_code()
}

fn summarize(report: &Report) -> String {
    let verdict = match report.outcome {
        RunOutcome::Confirmed => "confirmed",
        RunOutcome::Mismatch => "MISMATCH",
    };
    format!(
        "{} {}: {} in {} ms",
        report.config.command,
        report
            .result
            .get("summary")
            .and_then(Value::as_str)
            .unwrap_or(""),
        verdict,
        report.wall_time_ms
    )
}

fn echo_config(cli: &Cli, budget: u64) -> RunConfig {
    let mut config = RunConfig {
        command: String::new(),
        n: None,
        k: None,
        p: None,
        max_n: None,
        group: None,
        x: None,
        format: None,
        budget,
        parallel: cli.parallel,
    };
    match &cli.command {
        Command::Verify { n, k, group } => {
            config.command = "verify".into();
            config.n = Some(u64::from(*n));
            config.k = Some(u64::from(*k));
            config.group = Some((*group).into());
        }
        Command::Witness { n, k, group, x } => {
            config.command = "witness".into();
            config.n = Some(u64::from(*n));
            config.k = Some(u64::from(*k));
            config.group = Some((*group).into());
            config.x = Some(x.clone());
        }
        Command::Closure { n, k, group } => {
            config.command = "closure".into();
            config.n = Some(u64::from(*n));
            config.k = Some(u64::from(*k));
            config.group = Some((*group).into());
        }
        Command::Graph { n, group, format } => {
            config.command = "graph".into();
            config.n = Some(u64::from(*n));
            config.group = Some((*group).into());
            config.format = Some(
                match format {
                    GraphFormat::Json => "json",
                    GraphFormat::Csv => "csv",
                    GraphFormat::Dot => "dot",
                }
                .into(),
            );
        }
        Command::Primes { k, n } => {
            config.command = "primes".into();
            config.k = Some(*k);
            config.n = *n;
        }
        Command::Agl { p } => {
            config.command = "agl".into();
            config.p = Some(*p);
        }
        Command::PrimeDegree { p, group } => {
            config.command = "prime-degree".into();
            config.p = Some(*p);
            config.group = Some((*group).into());
        }
        Command::Reproduce32 { max_n } => {
            config.command = "reproduce-3-2".into();
            config.max_n = Some(*max_n);
        }
    }
    config
}

fn dispatch(command: &Command, budget: u64) -> Result<CommandOutput, UsageError> {
    match command {
        Command::Verify { n, k, group } => run_verify(*n, *k, (*group).into()),
        Command::Witness { n, k, group, x } => run_witness(*n, *k, (*group).into(), x, budget),
        Command::Closure { n, k, group } => run_closure(*n, *k, (*group).into()),
        Command::Graph { n, group, format } => run_graph(*n, (*group).into(), *format),
        Command::Primes { k, n } => run_primes(*k, *n),
        Command::Agl { p } => run_agl(*p),
        Command::PrimeDegree { p, group } => run_prime_degree(*p, (*group).into(), budget),
        Command::Reproduce32 { max_n } => run_reproduce(*max_n),
    }
}

// ---------------------------------------------------------------------------
// Error mapping
// ---------------------------------------------------------------------------

/// Coclique errors that reflect a bad request rather than bad mathematics.
fn coclique_usage(e: CocliqueError) -> UsageError {
    UsageError(match e {
        CocliqueError::BudgetExceeded { budget, .. } => format!(
            "search budget {budget} exhausted before the sweep finished; raise --budget or \
             COGEN_BUDGET"
        ),
        other => other.to_string(),
    })
}

fn witness_usage(e: &WitnessError) -> Option<UsageError> {
    match e {
        WitnessError::InternalInconsistency { .. } => None,
        other => Some(UsageError(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

fn run_verify(n: u16, k: u16, kind: GroupKind) -> Result<CommandOutput, UsageError> {
    let status = theorem_status(n, k, kind).map_err(coclique_usage)?;
    let mut result = serde_json::to_value(&status).expect("status serializes");
    let mut trace = Vec::new();
    let mut agreement_note = String::new();
    if n <= VERIFY_EXHAUSTIVE_MAX {
        let scenario = Scenario::new(n, k, kind).map_err(|e| UsageError(e.to_string()))?;
        let checked = split_subgroup_maximality(&scenario).map_err(coclique_usage)?;
        let expected = matches!(status, TheoremStatus::Maximal);
        let agrees = checked.is_maximal == expected;
        result["checked"] = serde_json::to_value(&checked).expect("report serializes");
        result["agreement"] = json!(agrees);
        if agrees {
            agreement_note = " — exhaustive sweep agrees".into();
        } else {
            trace.push(format!(
                "arithmetic criterion says {status}, but the exhaustive class-reduced sweep \
                 reports is_maximal = {}",
                checked.is_maximal
            ));
        }
    } else {
        result["checked"] = Value::Null;
        result["note"] = json!(format!(
            "exhaustive cross-check skipped beyond degree {VERIFY_EXHAUSTIVE_MAX}; status is \
             by the arithmetic criterion"
        ));
    }
    let summary = format!("({n},{k}) {kind:?}: {status}{agreement_note}");
    result["summary"] = json!(summary);
    Ok(CommandOutput {
        result,
        trace,
    })
}

fn run_witness(
    n: u16,
    k: u16,
    kind: GroupKind,
    x_text: &str,
    budget: u64,
) -> Result<CommandOutput, UsageError> {
    let scenario = Scenario::new(n, k, kind).map_err(|e| UsageError(e.to_string()))?;
    let x = parse_cycles(x_text, n).map_err(|e| UsageError(format!("cannot parse --x: {e}")))?;
    let search_budget = SearchBudget {
        max_generation_tests: budget,
        ..SearchBudget::default()
    };
    let result = match find_witness(&x, &scenario, &search_budget) {
        Ok(r) => r,
        Err(e) => {
            if let Some(usage) = witness_usage(&e) {
                return Err(usage);
            }
            // Guaranteed-success machinery failed: a mathematical mismatch.
            return Ok(CommandOutput {
                result: json!({ "error": e.to_string(), "summary": "search failed" }),
                trace: vec![format!("witness search failed internally: {e}")],
            });
        }
    };
    let mut trace = Vec::new();
    let summary = match &result.outcome {
        WitnessOutcome::Witness { y, tag } => {
            if !verify_witness(&x, y, &scenario) {
                trace.push(format!(
                    "reported witness y = {y} failed re-verification: <x, y> is not the \
                     ambient group"
                ));
            }
            format!(
                "({n},{k}) {kind:?} x={x}: witness y={y} via {tag} after {} tests",
                result.generation_tests
            )
        }
        WitnessOutcome::NoWitness { certificate } => {
            revalidate_certificate(certificate, &x, &scenario, &mut trace);
            let label = match certificate {
                NoWitnessCertificate::Blocks { gcd, .. } => format!("blocks (gcd {gcd})"),
                NoWitnessCertificate::Closure { .. } => "closure class".into(),
                NoWitnessCertificate::ExhaustiveScan { elements_tested } => {
                    format!("exhaustive scan of {elements_tested} elements")
                }
            };
            format!("({n},{k}) {kind:?} x={x}: no witness — certificate: {label}")
        }
    };
    let mut payload = serde_json::to_value(&result).expect("witness result serializes");
    payload["summary"] = json!(summary);
    Ok(CommandOutput {
        result: payload,
        trace,
    })
}

/// Re-checks a no-witness certificate from first principles, pushing any
/// failure onto the trace.
fn revalidate_certificate(
    certificate: &NoWitnessCertificate,
    x: &crate::perm::Permutation,
    scenario: &Scenario,
    trace: &mut Vec<String>,
) {
    match certificate {
        NoWitnessCertificate::Blocks { y, system, gcd } => {
            if system.is_trivial() {
                trace.push("blocks certificate carries a trivial block system".into());
            }
            if !system.is_preserved_by(x) {
                trace.push(format!("x does not preserve the certified block system: {x}"));
            }
            if !system.is_preserved_by(y) {
                trace.push(format!("y does not preserve the certified block system: {y}"));
            }
            let expected = {
                let (mut a, mut b) = (u64::from(scenario.n()), u64::from(scenario.k()));
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                a
            };
            if *gcd != expected {
                trace.push(format!(
                    "certificate gcd {gcd} differs from gcd(n, k) = {expected}"
                ));
            }
        }
        NoWitnessCertificate::Closure {
            representative,
            conjugator,
        } => match x.conjugate(conjugator) {
            Ok(image) if image == *representative => {}
            Ok(image) => trace.push(format!(
                "closure certificate does not reproduce the representative: x^c = {image}, \
                 expected {representative}"
            )),
            Err(e) => trace.push(format!("closure certificate conjugation failed: {e}")),
        },
        NoWitnessCertificate::ExhaustiveScan { .. } => {}
    }
}

fn run_closure(n: u16, k: u16, kind: GroupKind) -> Result<CommandOutput, UsageError> {
    let scenario = Scenario::new(n, k, kind).map_err(|e| UsageError(e.to_string()))?;
    let closure = match coclique_closure(&scenario) {
        Ok(c) => c,
        Err(CocliqueError::CertificationFailed { detail }) => {
            return Ok(CommandOutput {
                result: json!({ "error": detail, "summary": "certification failed" }),
                trace: vec![format!("closure certification failed: {detail}")],
            });
        }
        Err(other) => return Err(coclique_usage(other)),
    };
    let element_count = closure.elements.len();
    let class_size = closure.extra_class.len();
    let mut payload = serde_json::to_value(&closure).expect("closure serializes");
    let summary = format!(
        "({n},{k}) {kind:?}: {element_count} elements ({} from the subgroup, {class_size} \
         adjoined)",
        element_count - class_size
    );
    payload["summary"] = json!(summary);
    Ok(CommandOutput {
        result: payload,
        trace: Vec::new(),
    })
}

fn run_graph(n: u16, kind: GroupKind, format: GraphFormat) -> Result<CommandOutput, UsageError> {
    let edges = graph_edges(kind, n).map_err(coclique_usage)?;
    let vertex_count = ambient_group(n, kind)
        .order()
        .to_string()
        .parse::<u64>()
        .map(|o| o.saturating_sub(1))
        .unwrap_or_default();
    let mut result = json!({
        "group": kind,
        "n": n,
        "vertices": vertex_count,
        "edges": edges.len(),
    });
    match format {
        GraphFormat::Json => {
            result["edge_list"] = Value::Array(
                edges
                    .iter()
                    .map(|(u, v)| json!([u.to_string(), v.to_string()]))
                    .collect(),
            );
        }
        GraphFormat::Csv => {
            result["rendering"] = json!(graph_csv(&edges));
        }
        GraphFormat::Dot => {
            result["rendering"] = json!(graph_dot(kind, n, &edges).map_err(coclique_usage)?);
        }
    }
    let summary = format!("{kind:?}({n}): {vertex_count} vertices, {} edges", edges.len());
    result["summary"] = json!(summary);
    Ok(CommandOutput {
        result,
        trace: Vec::new(),
    })
}

fn run_primes(k: u64, n: Option<u64>) -> Result<CommandOutput, UsageError> {
    let mut result = json!({});
    let mut trace = Vec::new();
    let bertrand = bertrand_pk(k).map_err(|e: PrimeError| UsageError(e.to_string()))?;
    if !bertrand.reverify() {
        trace.push(format!(
            "interval prime witness p = {} failed re-verification",
            bertrand.value
        ));
    }
    let pk = bertrand.value;
    result["bertrand"] = serde_json::to_value(&bertrand).expect("witness serializes");
    let mut parts = vec![format!("p_k = {pk}")];
    if let Some(n) = n {
        let p1 = prime_p1(n, k).map_err(|e| UsageError(e.to_string()))?;
        if !p1.reverify() {
            trace.push(format!("p1 witness {} failed re-verification", p1.value));
        }
        parts.push(format!("p1 = {}", p1.value));
        result["p1"] = serde_json::to_value(&p1).expect("witness serializes");

        let p2 = prime_p2(n, k).map_err(|e| UsageError(e.to_string()))?;
        if let Some(w) = p2.witness() {
            if !w.reverify() {
                trace.push(format!("p2 witness {} failed re-verification", w.value));
            }
            parts.push(format!("p2 = {}", w.value));
        } else {
            parts.push("p2: inequality branch".into());
        }
        result["p2"] = serde_json::to_value(&p2).expect("dichotomy serializes");

        let interval_law = lemma23_check(n, k, pk);
        result["interval_law"] = json!(interval_law);
        if !interval_law {
            trace.push(format!(
                "interval law failed at n = {n}, k = {k} with p_k = {pk}"
            ));
        }
    }
    let summary = format!("k={k}{}: {}", n.map_or(String::new(), |n| format!(" n={n}")), parts.join(", "));
    result["summary"] = json!(summary);
    Ok(CommandOutput {
        result,
        trace,
    })
}

fn run_agl(p: u16) -> Result<CommandOutput, UsageError> {
    let facts = match verify_agl_facts(p) {
        Ok(f) => f,
        Err(PrimeDegreeError::ConstructionCheck { p, detail }) => {
            return Ok(CommandOutput {
                result: json!({ "error": detail, "summary": "construction check failed" }),
                trace: vec![format!("affine group construction failed at p = {p}: {detail}")],
            });
        }
        Err(e) => return Err(UsageError(e.to_string())),
    };
    let mut trace = Vec::new();
    for (name, held) in [
        ("sharp 2-transitivity", facts.sharply_two_transitive),
        (
            "uniqueness of the order-p subgroup",
            facts.unique_subgroup_of_prime_order,
        ),
        ("element shape law", facts.element_shapes_conform),
        (
            "two-generator property of long cycles",
            facts.distinct_long_cycles_generate,
        ),
    ] {
        if !held {
            trace.push(format!("structural fact failed at p = {p}: {name}"));
        }
    }
    let summary = if facts.all_hold() {
        format!(
            "p={p}: all four structural facts hold ({} elements, {} generator pairs)",
            facts.elements_seen, facts.generator_pairs_tested
        )
    } else {
        format!("p={p}: {} structural fact(s) FAILED", trace.len())
    };
    let mut result = serde_json::to_value(&facts).expect("facts serialize");
    result["summary"] = json!(summary);
    Ok(CommandOutput {
        result,
        trace,
    })
}

fn run_prime_degree(p: u16, kind: GroupKind, budget: u64) -> Result<CommandOutput, UsageError> {
    let report = match prime_degree_check(p, kind, budget) {
        Ok(r) => r,
        Err(PrimeDegreeError::ConstructionCheck { p, detail }) => {
            return Ok(CommandOutput {
                result: json!({ "error": detail, "summary": "construction check failed" }),
                trace: vec![format!("affine group construction failed at p = {p}: {detail}")],
            });
        }
        Err(PrimeDegreeError::Coclique(e)) => return Err(coclique_usage(e)),
        Err(e) => return Err(UsageError(e.to_string())),
    };
    let mut trace = Vec::new();
    // Cross-check each arithmetic intransitive verdict with the exhaustive
    // class-reduced sweep (cheap at these degrees).
    for line in &report.intransitive {
        let scenario =
            Scenario::new(p, line.k, kind).map_err(|e| UsageError(e.to_string()))?;
        let checked = split_subgroup_maximality(&scenario).map_err(coclique_usage)?;
        let expected = matches!(line.status, TheoremStatus::Maximal);
        if checked.is_maximal != expected {
            trace.push(format!(
                "intransitive family k = {}: arithmetic says {}, sweep says is_maximal = {}",
                line.k, line.status, checked.is_maximal
            ));
        }
    }
    if let Some(alt) = &report.alternating {
        if !alt.all_partnered {
            trace.push(
                "an odd permutation found no generating p-cycle partner, contradicting the \
                 p-cycle argument"
                    .into(),
            );
        }
    }
    let affine_word = if report.affine.report.is_maximal {
        "maximal"
    } else {
        "NOT maximal"
    };
    let summary = format!(
        "p={p} {kind:?}: {} intransitive families checked; affine part (order {}) is a {} \
         coclique{}",
        report.intransitive.len(),
        report.affine.subgroup_order,
        affine_word,
        report
            .exception
            .as_deref()
            .map(|e| format!("; known exception {e}"))
            .unwrap_or_default()
    );
    let mut result = serde_json::to_value(&report).expect("report serializes");
    result["summary"] = json!(summary);
    Ok(CommandOutput {
        result,
        trace,
    })
}

fn run_reproduce(max_n: u16) -> Result<CommandOutput, UsageError> {
    let report = reproduce_lemma_3_2(max_n).map_err(coclique_usage)?;
    let mut trace = Vec::new();
    let expected: Vec<(GroupKind, u16, u16)> = KNOWN_SURVIVORS
        .iter()
        .copied()
        .filter(|&(_, n, _)| n <= max_n)
        .collect();
    let computed: Vec<(GroupKind, u16, u16)> = report
        .survivors
        .iter()
        .map(|s| (s.kind, s.n, s.k))
        .collect();
    for triple in &expected {
        if !computed.contains(triple) {
            trace.push(format!(
                "known surviving class {:?}({}, {}) was not found by the sweep",
                triple.0, triple.1, triple.2
            ));
        }
    }
    for triple in &computed {
        if !expected.contains(triple) {
            trace.push(format!(
                "sweep reported {:?}({}, {}) which is not in the known table",
                triple.0, triple.1, triple.2
            ));
        }
    }
    let matches = trace.is_empty();
    let summary = format!(
        "max-n {max_n}: {} surviving classes across {} scenarios — {}",
        report.survivors.len(),
        report.scenarios_swept,
        if matches {
            "matches the known table"
        } else {
            "DIFFERS from the known table"
        }
    );
    let mut result = serde_json::to_value(&report).expect("report serializes");
    result["matches_known_table"] = json!(matches);
    result["summary"] = json!(summary);
    Ok(CommandOutput {
        result,
        trace,
    })
}

// ---------------------------------------------------------------------------
