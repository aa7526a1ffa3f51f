//! Command-line front door: enumeration, algorithm analysis, balance and
//! topology reports, and the property-check suites.
//!
//! Five subcommands cover the library:
//!
//! * `enumerate --leaves N [--format json|csv]` — all full-binary-tree
//!   leaf profiles with `N` leaves.
//! * `analyze --alg insertion|merge --n N [--dot PATH]` — build the
//!   algorithm's decision tree and report exact complexity figures.
//! * `lattice --leaves N [--dot PATH]` — group profiles by external path
//!   length, audit the balance order, and build the quotient-chain
//!   metrics.
//! * `topo --alg A --n N | --seq "⟨…⟩"` — chain-open down-set analysis
//!   of a tree (a decision tree or an explicit profile).
//! * `check --suite S [--n N] [--seed K] [--sample M] [--format json|csv]`
//!   — run a named law suite; one verdict line per law.
//!
//! Every run prints a single [`RunReport`]: the parsed plan echoed back,
//! a command-specific payload, a list of named verdicts, and the exit
//! code (0 when every verdict passes, 1 otherwise). Identical argument
//! vectors produce byte-identical stdout; randomized scans take their
//! seed from `--seed` and default to 0. Usage errors exit with 2;
//! module errors are reported as one-line JSON diagnostics on stderr and
//! exit with 1.
//!
//! The decision-tree input bound (default `n ≤ 8`) can be raised or
//! lowered with the `QDT_MAX_N` environment variable; it gates argument
//! validation for `analyze` and `topo --alg` only, so successful runs
//! never depend on the environment.

use crate::check::{CheckResult, Witness};
use crate::dtree::{
    build_decision_tree, build_decision_tree_with_bound, check_level_covaluation,
    complexity_report, ComplexityReport, DtreeError, ScanMode, SortAlgorithm, DEFAULT_MAX_N,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use crate::imbalance::{
    balance_compare, build_balance_poset, chain_pmetric, BalancePoset, ChainMetrics, EplClass,
    ImbalanceError, LatticeCheck,
};
use crate::rat::{rat, rat_int, Rat};
use crate::semival::{
    check_covaluation_characterization, check_valuation_characterization,
    check_valuation_decomposition, level_metrics_on_tree, FiniteOrder, FunctionOnPoset,
    OrderError, QuasiForm, SemivalError,
};
use crate::topo::{
    alexandrov_topologies, down_sets, lawson_check, maximal_chain_open, ChainOpenReport,
    TopoError,
};
use crate::treecore::{enumerate_tn, tree_from_seq, BinTree, Orientation, PathLenSeq, TreeError};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

/// Largest leaf count `enumerate` accepts.
pub const MAX_ENUMERATE_LEAVES: usize = 16;
/// Largest leaf count `lattice` (and `check --n`) accepts.
pub const MAX_LATTICE_LEAVES: usize = 12;

// ---------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------

/// Output format for the commands that offer one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Named law suites for `check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Valuation/co-valuation characterizations on assorted lattices.
    Semival,
    /// Quasi- and partial-metric axioms of the level metrics on trees.
    Pmetric,
    /// The level inequality on catalogued trees and decision trees.
    Covaluation,
    /// Balance order, quotient chain laws, and merge-vs-insertion.
    Lattice,
    /// Alexandrov families, Lawson discreteness, chain-open sets.
    Topology,
    /// Every suite above, preceded by enumeration and closed-form checks.
    All,
}

/// Where `topo` gets its tree from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeSource {
    /// The decision tree of a sorting algorithm on `n` items.
    Algorithm { alg: SortAlgorithm, n: usize },
    /// An explicit leaf profile.
    Sequence { seq: PathLenSeq },
}

/// A validated invocation: the command with all defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunPlan {
    Enumerate {
        leaves: usize,
        format: OutputFormat,
    },
    Analyze {
        alg: SortAlgorithm,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dot: Option<PathBuf>,
    },
    Lattice {
        leaves: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dot: Option<PathBuf>,
    },
    Topo {
        source: TreeSource,
    },
    Check {
        suite: Suite,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        seed: u64,
        sample: u64,
        format: OutputFormat,
    },
}

/// A rejected invocation; printing it explains the offending flag.
#[derive(Debug)]
pub enum UsageError {
    Clap(Box<clap::Error>),
    Invalid(String),
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UsageError::Clap(e) => write!(f, "{e}"),
            UsageError::Invalid(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<clap::Error> for UsageError {
    fn from(e: clap::Error) -> Self {
        UsageError::Clap(Box::new(e))
    }
}

impl UsageError {
    /// Prints the error where it belongs and returns the process exit
    /// code: 0 for `--help`/`--version`, 2 for genuine usage errors.
    pub fn report(&self) -> i32 {
        match self {
            UsageError::Clap(e) => {
                let informational =
                    matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
                let _ = e.print();
                if informational {
                    0
                } else {
                    2
                }
            }
            UsageError::Invalid(_) => {
                eprintln!("{self}");
                2
            }
        }
    }
}

fn parse_algorithm(s: &str) -> Result<SortAlgorithm, String> {
    s.parse()
}

#[derive(Parser)]
#[command(
    name = "qdt",
    version,
    about = "Exact checkers for tree balance, sorting decision trees, and the metrics they induce",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// List every full-binary-tree leaf profile with the given leaf count.
    Enumerate {
        /// Number of leaves (1..=16).
        #[arg(long)]
        leaves: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Build a sorting algorithm's decision tree and report exact complexity.
    Analyze {
        /// Sorting algorithm: insertion or merge.
        #[arg(long, value_parser = parse_algorithm)]
        alg: SortAlgorithm,
        /// Input size (1..=QDT_MAX_N, default bound 8).
        #[arg(long)]
        n: usize,
        /// Write the decision tree as a DOT digraph to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Group leaf profiles by external path length and audit the balance order.
    Lattice {
        /// Number of leaves (1..=12).
        #[arg(long)]
        leaves: usize,
        /// Write the quotient chain as a DOT digraph to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Chain-open down-set analysis of a tree.
    Topo {
        /// Analyze this algorithm's decision tree (needs --n).
        #[arg(long, value_parser = parse_algorithm)]
        alg: Option<SortAlgorithm>,
        /// Input size for --alg.
        #[arg(long)]
        n: Option<usize>,
        /// Analyze the tree of this leaf profile, e.g. "⟨1,3,3,4,4,4,4⟩".
        #[arg(long)]
        seq: Option<String>,
    },
    /// Run a property-check suite; one verdict line per law.
    Check {
        /// Which suite to run.
        #[arg(long, value_enum)]
        suite: Suite,
        /// Size bound; each suite clamps it to its verified range.
        #[arg(long)]
        n: Option<usize>,
        /// Seed for the randomized scans.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Triples per sampled scan.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        sample: u64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

/// Reads the decision-tree input bound from `QDT_MAX_N` (default 8).
fn env_bound() -> Result<usize, UsageError> {
    match std::env::var("QDT_MAX_N") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_N),
        Err(e) => Err(UsageError::Invalid(format!("QDT_MAX_N is not readable: {e}"))),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(UsageError::Invalid(format!(
                "QDT_MAX_N must be a positive integer, got {raw:?}"
            ))),
        },
    }
}

/// Parses an argument vector (including the program name) into a plan,
/// taking the decision-tree bound from `QDT_MAX_N`.
pub fn parse_args<I, T>(argv: I) -> Result<RunPlan, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_args_with_bound(argv, env_bound()?)
}

/// Pure variant of [`parse_args`] with an explicit decision-tree bound.
pub fn parse_args_with_bound<I, T>(argv: I, bound: usize) -> Result<RunPlan, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let check_range = |what: &str, v: usize, max: usize| -> Result<(), UsageError> {
        if v == 0 || v > max {
            Err(UsageError::Invalid(format!("{what} must be in 1..={max}, got {v}")))
        } else {
            Ok(())
        }
    };
    match cli.command {
        CliCommand::Enumerate { leaves, format } => {
            check_range("--leaves", leaves, MAX_ENUMERATE_LEAVES)?;
            Ok(RunPlan::Enumerate { leaves, format })
        }
        CliCommand::Analyze { alg, n, dot } => {
            check_range("--n", n, bound)?;
            Ok(RunPlan::Analyze { alg, n, dot })
        }
        CliCommand::Lattice { leaves, dot } => {
            check_range("--leaves", leaves, MAX_LATTICE_LEAVES)?;
            Ok(RunPlan::Lattice { leaves, dot })
        }
        CliCommand::Topo { alg, n, seq } => {
            let source = match (alg, n, seq) {
                (Some(alg), Some(n), None) => {
                    check_range("--n", n, bound)?;
                    TreeSource::Algorithm { alg, n }
                }
                (None, None, Some(raw)) => {
                    let seq: PathLenSeq = raw
                        .parse()
                        .map_err(|e| UsageError::Invalid(format!("--seq: {e}")))?;
                    TreeSource::Sequence { seq }
                }
                _ => {
                    return Err(UsageError::Invalid(
                        "topo needs either --alg with --n, or --seq alone".to_string(),
                    ))
                }
            };
            Ok(RunPlan::Topo { source })
        }
        CliCommand::Check { suite, n, seed, sample, format } => {
            if let Some(n) = n {
                check_range("--n", n, MAX_LATTICE_LEAVES)?;
            }
            if sample == 0 {
                return Err(UsageError::Invalid("--sample must be at least 1".to_string()));
            }
            Ok(RunPlan::Check { suite, n, seed, sample, format })
        }
    }
}

// ---------------------------------------------------------------------
// Payloads and the report
// ---------------------------------------------------------------------

/// One enumerated profile in an [`EnumeratePayload`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeRow {
    pub depths: PathLenSeq,
    pub epl: u64,
    /// Kraft sum in lowest terms, always "1/1" for enumerated profiles.
    pub kraft: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumeratePayload {
    pub leaves: usize,
    pub count: usize,
    pub trees: Vec<TreeRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticePayload {
    pub n: usize,
    pub sequence_count: usize,
    pub class_count: usize,
    /// Classes ascending by external path length (rank 0 most balanced).
    pub classes: Vec<EplClass>,
    /// Whether the raw profile-level relation is antisymmetric.
    pub raw_is_partial_order: bool,
    /// Distinct profiles sharing an external path length (informational;
    /// first appears at seven leaves).
    pub antisymmetry_witnesses: Vec<(PathLenSeq, PathLenSeq)>,
    /// Quasi- and partial metric on the quotient chain.
    pub chain_metrics: ChainMetrics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoPayload {
    /// Leaf profile of the analyzed tree.
    pub depths: PathLenSeq,
    pub node_count: usize,
    pub down_set_count: usize,
    pub chain_open_count: usize,
    /// Open-set counts of the two Alexandrov topologies (root as bottom).
    pub upper_open_count: usize,
    pub lower_open_count: usize,
    /// Maximal chain-open sets, the profile they recover, and whether
    /// they form a base of the down-set family.
    pub chain_open: ChainOpenReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckPayload {
    pub suite: Suite,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub seed: u64,
    pub sample: u64,
    pub total: usize,
    pub passed: usize,
}

/// One named law verdict in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictLine {
    pub name: String,
    pub result: CheckResult,
}

/// Command-specific report payload.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Enumerate(EnumeratePayload),
    Analyze(ComplexityReport),
    Lattice(LatticePayload),
    Topo(TopoPayload),
    Check(CheckPayload),
}

/// Everything a run prints: the plan echoed back, the payload, the named
/// verdicts, and the exit code (0 exactly when every verdict passes).
///
/// Generic in the payload so consumers can deserialize a report with the
/// concrete payload type of the command they invoked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report<P> {
    pub plan: RunPlan,
    pub payload: P,
    pub verdicts: Vec<VerdictLine>,
    pub exit_code: i32,
}

pub type RunReport = Report<Payload>;

// ---------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------

/// Anything that can stop a valid plan from completing.
#[derive(Debug)]
pub enum CliError {
    Tree(TreeError),
    Order(OrderError),
    Semival(SemivalError),
    Dtree(DtreeError),
    Imbalance(ImbalanceError),
    Topo(TopoError),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Tree(e) => write!(f, "{e}"),
            CliError::Order(e) => write!(f, "{e}"),
            CliError::Semival(e) => write!(f, "{e}"),
            CliError::Dtree(e) => write!(f, "{e}"),
            CliError::Imbalance(e) => write!(f, "{e}"),
            CliError::Topo(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

macro_rules! cli_error_from {
    ($($variant:ident($ty:ty)),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::$variant(e)
            }
        })*
    };
}

cli_error_from!(
    Tree(TreeError),
    Order(OrderError),
    Semival(SemivalError),
    Dtree(DtreeError),
    Imbalance(ImbalanceError),
    Topo(TopoError),
    Io(std::io::Error),
);

impl std::error::Error for CliError {}

fn line(name: impl Into<String>, result: CheckResult) -> VerdictLine {
    VerdictLine { name: name.into(), result }
}

fn exit_code(verdicts: &[VerdictLine]) -> i32 {
    if verdicts.iter().all(|v| v.result.is_pass()) {
        0
    } else {
        1
    }
}

/// Runs a validated plan: computes the payload and verdicts, and writes
/// any requested DOT artifact. Printing is left to [`run`].
pub fn execute(plan: &RunPlan) -> Result<RunReport, CliError> {
    let (payload, verdicts) = match plan {
        RunPlan::Enumerate { leaves, .. } => exec_enumerate(*leaves)?,
        RunPlan::Analyze { alg, n, dot } => exec_analyze(*alg, *n, dot.as_deref())?,
        RunPlan::Lattice { leaves, dot } => exec_lattice(*leaves, dot.as_deref())?,
        RunPlan::Topo { source } => exec_topo(source)?,
        RunPlan::Check { suite, n, seed, sample, .. } => {
            exec_check(*suite, *n, *seed, *sample)?
        }
    };
    let code = exit_code(&verdicts);
    Ok(Report { plan: plan.clone(), payload, verdicts, exit_code: code })
}

fn format_big_ratio(r: num_rational::Ratio<i128>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Witness sides for a Kraft-sum failure. The exact sum is carried as a
/// string in the witness elements; the sides are clamped into `i64` only
/// for display and cannot distort a verdict (the condition is computed on
/// the exact value).
fn kraft_sides(sum: num_rational::Ratio<i128>) -> (Rat, Rat) {
    let n = i64::try_from(*sum.numer()).unwrap_or(i64::MAX);
    let d = i64::try_from(*sum.denom()).unwrap_or(i64::MAX);
    (rat(n, d), rat_int(1))
}

fn kraft_verdict(seq: &PathLenSeq) -> CheckResult {
    let sum = seq.kraft_sum();
    CheckResult::from_condition(seq.is_valid(), || {
        let (lhs, rhs) = kraft_sides(sum);
        Witness::new(
            [seq.to_string(), format!("kraft={}", format_big_ratio(sum))],
            "Kraft sum of the leaf profile equals 1",
            lhs,
            rhs,
        )
    })
}

fn exec_enumerate(leaves: usize) -> Result<(Payload, Vec<VerdictLine>), CliError> {
    let seqs = enumerate_tn(leaves)?;
    let trees: Vec<TreeRow> = seqs
        .iter()
        .map(|seq| TreeRow {
            depths: seq.clone(),
            epl: seq.epl(),
            kraft: format_big_ratio(seq.kraft_sum()),
        })
        .collect();
    let verdict = CheckResult::all(seqs.iter().map(kraft_verdict));
    let payload = Payload::Enumerate(EnumeratePayload { leaves, count: trees.len(), trees });
    let verdicts = vec![line("every enumerated profile satisfies the Kraft equality", verdict)];
    Ok((payload, verdicts))
}

fn exec_analyze(
    alg: SortAlgorithm,
    n: usize,
    dot: Option<&std::path::Path>,
) -> Result<(Payload, Vec<VerdictLine>), CliError> {
    // Range was validated at parse time; the builder bound is therefore n.
    let dt = build_decision_tree_with_bound(alg, n, n.max(DEFAULT_MAX_N))?;
    let report = complexity_report(&dt);
    if let Some(path) = dot {
        std::fs::write(path, dt.to_dot())?;
    }
    let full = dt.tree().single_child_count();
    let factorial: i64 = (1..=n as i64).product();
    let epl_from_average = report.average * rat_int(factorial);
    let verdicts = vec![
        line(
            "decision tree is full (no single-child nodes)",
            CheckResult::from_condition(full == 0, || {
                Witness::new(
                    [format!("{alg} on {n} items")],
                    "single-child node count equals 0",
                    rat_int(full as i64),
                    rat_int(0),
                )
            }),
        ),
        line(
            "average times n! equals the external path length",
            CheckResult::from_condition(epl_from_average == rat_int(report.epl as i64), || {
                Witness::new(
                    [format!("{alg} on {n} items")],
                    "average · n! = external path length",
                    epl_from_average,
                    rat_int(report.epl as i64),
                )
            }),
        ),
        line("leaf profile satisfies the Kraft equality", kraft_verdict(&report.profile)),
    ];
    Ok((Payload::Analyze(report), verdicts))
}

/// DOT digraph of the quotient chain, most balanced class first.
fn quotient_dot(poset: &BalancePoset) -> String {
    let mut out = String::from("digraph balance_chain {\n  rankdir=TB;\n");
    for (i, class) in poset.classes.iter().enumerate() {
        out.push_str(&format!("  c{i} [shape=box, label=\"{}\"];\n", class.label()));
    }
    for i in 1..poset.classes.len() {
        out.push_str(&format!("  c{} -> c{};\n", i - 1, i));
    }
    out.push_str("}\n");
    out
}

/// The intra-class pairs the antisymmetry audit must find: every pair of
/// distinct profiles sharing an external path length.
fn expected_collisions(poset: &BalancePoset) -> Vec<(PathLenSeq, PathLenSeq)> {
    let mut pairs = Vec::new();
    for class in &poset.classes {
        for i in 0..class.members.len() {
            for j in i + 1..class.members.len() {
                pairs.push((class.members[i].clone(), class.members[j].clone()));
            }
        }
    }
    pairs.sort();
    pairs
}

fn audit_matches_classes(poset: &BalancePoset, lat: &LatticeCheck) -> CheckResult {
    let mut found = lat.antisymmetry_witnesses.clone();
    found.sort();
    let expected = expected_collisions(poset);
    CheckResult::from_condition(found == expected, || {
        Witness::new(
            [format!("{} leaves", poset.n)],
            "antisymmetry collisions are exactly the intra-class pairs",
            rat_int(found.len() as i64),
            rat_int(expected.len() as i64),
        )
    })
}

fn exec_lattice(
    leaves: usize,
    dot: Option<&std::path::Path>,
) -> Result<(Payload, Vec<VerdictLine>), CliError> {
    let poset = build_balance_poset(leaves)?;
    let lat = poset.verify_lattice()?;
    let metrics = chain_pmetric(&poset)?;
    if let Some(path) = dot {
        std::fs::write(path, quotient_dot(&poset))?;
    }
    let verdicts = vec![
        line("quotient balance order satisfies the chain lattice laws", lat.quotient_laws.clone()),
        line("antisymmetry audit matches the class structure", audit_matches_classes(&poset, &lat)),
        line("quotient quasi-metric satisfies its axioms", metrics.quasi.verify_axioms()),
        line("quotient partial metric satisfies its axioms", metrics.partial.verify_axioms()),
    ];
    let payload = Payload::Lattice(LatticePayload {
        n: leaves,
        sequence_count: poset.sequence_count(),
        class_count: poset.classes.len(),
        classes: poset.classes.clone(),
        raw_is_partial_order: lat.raw_is_partial_order,
        antisymmetry_witnesses: lat.antisymmetry_witnesses,
        chain_metrics: metrics,
    });
    Ok((payload, verdicts))
}

fn exec_topo(source: &TreeSource) -> Result<(Payload, Vec<VerdictLine>), CliError> {
    let tree: BinTree = match source {
        TreeSource::Algorithm { alg, n } => {
            build_decision_tree_with_bound(*alg, *n, (*n).max(DEFAULT_MAX_N))?.tree().clone()
        }
        TreeSource::Sequence { seq } => tree_from_seq(seq)?,
    };
    let depths = tree.path_len_seq();
    let family = down_sets(&tree)?;
    let report = maximal_chain_open(&tree)?;
    let bottom = FiniteOrder::from_tree(&tree, Orientation::RootAsBottom);
    let top = FiniteOrder::from_tree(&tree, Orientation::RootAsTop);
    let pair = alexandrov_topologies(&bottom)?;
    let chain_open_count =
        family.sets().iter().filter(|&&t| family.is_chain_open(t)).count();
    let verdicts = vec![
        line(
            "down-sets equal the lower Alexandrov topology",
            CheckResult::from_condition(family.sets() == pair.lower.opens(), || {
                Witness::new(
                    [depths.to_string()],
                    "down-set family equals the lower Alexandrov opens",
                    rat_int(family.sets().len() as i64),
                    rat_int(pair.lower.opens().len() as i64),
                )
            }),
        ),
        line(
            "maximal chain-open sets recover the leaf profile",
            CheckResult::from_condition(report.recovered == depths, || {
                Witness::new(
                    [depths.to_string(), report.recovered.to_string()],
                    "recovered profile equals the tree's leaf profile",
                    rat_int(report.recovered.len() as i64),
                    rat_int(depths.len() as i64),
                )
            }),
        ),
        line("Lawson join is discrete (root as bottom)", lawson_check(&bottom)?),
        line("Lawson join is discrete (root as top)", lawson_check(&top)?),
    ];
    let payload = Payload::Topo(TopoPayload {
        depths,
        node_count: tree.len(),
        down_set_count: family.sets().len(),
        chain_open_count,
        upper_open_count: pair.upper.opens().len(),
        lower_open_count: pair.lower.opens().len(),
        chain_open: report,
    });
    Ok((payload, verdicts))
}

fn exec_check(
    suite: Suite,
    n: Option<usize>,
    seed: u64,
    sample: u64,
) -> Result<(Payload, Vec<VerdictLine>), CliError> {
    let verdicts = suite_rows(suite, n, seed, sample)?;
    let passed = verdicts.iter().filter(|v| v.result.is_pass()).count();
    let payload = Payload::Check(CheckPayload {
        suite,
        n,
        seed,
        sample,
        total: verdicts.len(),
        passed,
    });
    Ok((payload, verdicts))
}

// ---------------------------------------------------------------------
// Check suites
// ---------------------------------------------------------------------

fn suite_rows(
    suite: Suite,
    n: Option<usize>,
    seed: u64,
    sample: u64,
) -> Result<Vec<VerdictLine>, CliError> {
    match suite {
        Suite::Semival => rows_semival(seed),
        Suite::Pmetric => rows_pmetric(n.unwrap_or(6).min(8)),
        Suite::Covaluation => rows_covaluation(n.unwrap_or(7).min(8), seed, sample),
        Suite::Lattice => rows_lattice(n.unwrap_or(10).min(MAX_LATTICE_LEAVES)),
        Suite::Topology => rows_topology(n.unwrap_or(7)),
        Suite::All => {
            let mut rows = rows_enumeration(n.unwrap_or(10).min(MAX_ENUMERATE_LEAVES))?;
            rows.extend(rows_complexity(n.unwrap_or(7).min(7))?);
            rows.extend(rows_semival(seed)?);
            rows.extend(rows_pmetric(n.unwrap_or(6).min(8))?);
            rows.extend(rows_covaluation(n.unwrap_or(7).min(8), seed, sample)?);
            rows.extend(rows_lattice(n.unwrap_or(10).min(MAX_LATTICE_LEAVES))?);
            rows.extend(rows_topology(n.unwrap_or(7))?);
            Ok(rows)
        }
    }
}

/// Validity, uniqueness, and round-tripping of the enumeration.
fn rows_enumeration(max_n: usize) -> Result<Vec<VerdictLine>, CliError> {
    let mut rows = Vec::new();
    for m in 1..=max_n {
        let seqs = enumerate_tn(m)?;
        let mut verdict = CheckResult::all(seqs.iter().map(kraft_verdict));
        for seq in &seqs {
            let rebuilt = tree_from_seq(seq)?.path_len_seq();
            verdict = verdict.and(CheckResult::from_condition(rebuilt == *seq, || {
                Witness::new(
                    [seq.to_string(), rebuilt.to_string()],
                    "profile survives a build/read round trip",
                    rat_int(rebuilt.len() as i64),
                    rat_int(seq.len() as i64),
                )
            }));
        }
        let strictly_sorted = seqs.windows(2).all(|w| w[0] < w[1]);
        verdict = verdict.and(CheckResult::from_condition(strictly_sorted, || {
            Witness::new(
                [format!("{m} leaves")],
                "enumeration is strictly increasing",
                rat_int(seqs.len() as i64),
                rat_int(seqs.len() as i64),
            )
        }));
        rows.push(line(
            format!("every {m}-leaf profile is valid, unique, and round-trips ({} found)", seqs.len()),
            verdict,
        ));
    }
    Ok(rows)
}

/// Worst-case closed forms and the average/EPL identity.
fn rows_complexity(max_n: usize) -> Result<Vec<VerdictLine>, CliError> {
    let mut rows = Vec::new();
    for m in 2..=max_n {
        let ins = complexity_report(&build_decision_tree(SortAlgorithm::Insertion, m)?);
        let mer = complexity_report(&build_decision_tree(SortAlgorithm::Merge, m)?);
        let ins_expected = (m * (m - 1) / 2) as u64;
        let lg = u64::from(m.next_power_of_two().trailing_zeros());
        let mer_expected = m as u64 * lg - (1u64 << lg) + 1;
        let factorial: i64 = (1..=m as i64).product();
        rows.push(line(
            format!("insertion worst case equals m(m-1)/2 ({m} items)"),
            CheckResult::from_condition(u64::from(ins.worst) == ins_expected, || {
                Witness::new(
                    [format!("{m} items")],
                    "worst comparisons = m(m-1)/2",
                    rat_int(i64::from(ins.worst)),
                    rat_int(ins_expected as i64),
                )
            }),
        ));
        rows.push(line(
            format!("merge worst case equals m·⌈lg m⌉ − 2^⌈lg m⌉ + 1 ({m} items)"),
            CheckResult::from_condition(u64::from(mer.worst) == mer_expected, || {
                Witness::new(
                    [format!("{m} items")],
                    "worst comparisons = m·⌈lg m⌉ − 2^⌈lg m⌉ + 1",
                    rat_int(i64::from(mer.worst)),
                    rat_int(mer_expected as i64),
                )
            }),
        ));
        let identity = |r: &ComplexityReport| {
            CheckResult::from_condition(
                r.average * rat_int(factorial) == rat_int(r.epl as i64),
                || {
                    Witness::new(
                        [format!("{} on {m} items", r.alg)],
                        "average · m! = external path length",
                        r.average * rat_int(factorial),
                        rat_int(r.epl as i64),
                    )
                },
            )
        };
        rows.push(line(
            format!("average · m! equals the external path length ({m} items, both algorithms)"),
            identity(&ins).and(identity(&mer)),
        ));
    }
    Ok(rows)
}

/// Characterization agreement on random and exhaustive function families.
fn rows_semival(seed: u64) -> Result<Vec<VerdictLine>, CliError> {
    let mut carriers: Vec<(String, FiniteOrder)> = Vec::new();
    for atoms in 1..=4usize {
        carriers.push((format!("powerset of {atoms} atoms"), FiniteOrder::powerset(atoms)?));
    }
    for m in [36u64, 360] {
        carriers.push((format!("divisors of {m}"), FiniteOrder::divisors(m)?));
    }
    for k in 1..=8usize {
        carriers.push((format!("chain of {k} elements"), FiniteOrder::chain(k)?));
    }
    let agreement = |order: &FiniteOrder, f: &FunctionOnPoset| -> Result<CheckResult, CliError> {
        Ok(check_valuation_characterization(order, f)?
            .and(check_covaluation_characterization(order, f)?)
            .and(check_valuation_decomposition(order, f)?))
    };
    let mut rows = Vec::new();
    for (idx, (label, order)) in carriers.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(idx as u64));
        let mut verdict = CheckResult::pass();
        for _ in 0..1000 {
            let values = (0..order.len()).map(|_| rat_int(rng.random_range(0..=16))).collect();
            verdict = verdict.and(agreement(order, &FunctionOnPoset::new(values)?)?);
            if !verdict.is_pass() {
                break;
            }
        }
        rows.push(line(
            format!("characterizations agree on the {label} (1000 random functions)"),
            verdict,
        ));
    }
    let order = FiniteOrder::powerset(3)?;
    let k = order.len();
    let mut verdict = CheckResult::pass();
    for mask in 0u32..(1 << k) {
        let values = (0..k).map(|i| rat_int(i64::from(mask >> i & 1))).collect();
        verdict = verdict.and(agreement(&order, &FunctionOnPoset::new(values)?)?);
        if !verdict.is_pass() {
            break;
        }
    }
    rows.push(line(
        "characterizations agree for every 0/1 function on the 3-atom powerset (exhaustive)",
        verdict,
    ));
    Ok(rows)
}

/// Distance axioms of the level metrics on every catalogued tree.
fn rows_pmetric(max_n: usize) -> Result<Vec<VerdictLine>, CliError> {
    let mut rows = Vec::new();
    for m in 1..=max_n {
        let mut literal = CheckResult::pass();
        let mut conjugate = CheckResult::pass();
        let mut partial = CheckResult::pass();
        let mut weight_is_level = CheckResult::pass();
        let mut formula = CheckResult::pass();
        for seq in enumerate_tn(m)? {
            let tree = tree_from_seq(&seq)?;
            let (q_lit, _, p_lit) = level_metrics_on_tree(&tree, QuasiForm::Literal)?;
            let (q_con, w_con, p_con) = level_metrics_on_tree(&tree, QuasiForm::Conjugate)?;
            literal = literal.and(q_lit.verify_axioms());
            conjugate = conjugate.and(q_con.verify_axioms());
            partial = partial.and(p_lit.verify_axioms()).and(p_con.verify_axioms());
            let levels = FunctionOnPoset::levels(&tree);
            weight_is_level =
                weight_is_level.and(CheckResult::from_condition(
                    w_con.as_slice() == levels.values(),
                    || {
                        let i = w_con
                            .iter()
                            .zip(levels.values())
                            .position(|(a, b)| a != b)
                            .unwrap_or(0);
                        Witness::new(
                            [seq.to_string(), format!("n{i}")],
                            "solved weight equals the node level",
                            w_con[i],
                            levels.values()[i],
                        )
                    },
                ));
            for x in tree.node_ids() {
                for y in tree.node_ids() {
                    let lca = tree.lca(x, y)?;
                    let expect = rat_int(
                        i64::from(tree.level(x)?) + i64::from(tree.level(y)?)
                            - i64::from(tree.level(lca)?),
                    );
                    let got = p_con.dist(x.index(), y.index());
                    if got != expect {
                        formula = formula.and(CheckResult::fail(Witness::new(
                            [seq.to_string(), x.to_string(), y.to_string()],
                            "p(x,y) = l(x) + l(y) - l(x∨y)",
                            got,
                            expect,
                        )));
                    }
                }
            }
        }
        rows.push(line(format!("literal quasi-metric axioms on all {m}-leaf trees"), literal));
        rows.push(line(format!("conjugate quasi-metric axioms on all {m}-leaf trees"), conjugate));
        rows.push(line(format!("partial-metric axioms on all {m}-leaf trees"), partial));
        rows.push(line(format!("conjugate weight equals the level on all {m}-leaf trees"), weight_is_level));
        rows.push(line(format!("partial metric matches the level formula on all {m}-leaf trees"), formula));
    }
    Ok(rows)
}

/// The level inequality on catalogued trees and on decision trees.
fn rows_covaluation(max_n: usize, seed: u64, sample: u64) -> Result<Vec<VerdictLine>, CliError> {
    let mut rows = Vec::new();
    for m in 1..=max_n.min(5) {
        let verdict = CheckResult::all(
            enumerate_tn(m)?
                .iter()
                .map(|seq| {
                    Ok(check_level_covaluation(&tree_from_seq(seq)?, ScanMode::Exhaustive))
                })
                .collect::<Result<Vec<_>, CliError>>()?,
        );
        rows.push(line(
            format!("level inequality on every {m}-leaf tree (exhaustive triples)"),
            verdict,
        ));
    }
    for m in 2..=max_n {
        for alg in SortAlgorithm::ALL {
            let dt = build_decision_tree(alg, m)?;
            let (mode, how) = if m <= 4 {
                (ScanMode::Exhaustive, "exhaustive triples".to_string())
            } else {
                (
                    ScanMode::Sampled { samples: sample, seed },
                    format!("{sample} sampled triples, seed {seed}"),
                )
            };
            rows.push(line(
                format!("level inequality on the {alg} decision tree for {m} items ({how})"),
                dt.check_level_covaluation(mode),
            ));
        }
    }
    Ok(rows)
}

/// Balance order, quotient chain laws, and merge versus insertion.
fn rows_lattice(max_n: usize) -> Result<Vec<VerdictLine>, CliError> {
    let mut rows = Vec::new();
    for m in 1..=max_n {
        let poset = build_balance_poset(m)?;
        let lat = poset.verify_lattice()?;
        let metrics = chain_pmetric(&poset)?;
        rows.push(line(
            format!("quotient balance order on {m}-leaf trees satisfies the chain lattice laws"),
            lat.quotient_laws.clone(),
        ));
        rows.push(line(
            format!("antisymmetry audit matches the class structure ({m} leaves)"),
            audit_matches_classes(&poset, &lat),
        ));
        rows.push(line(
            format!("quotient chain metrics satisfy their axioms ({m} leaves)"),
            metrics.quasi.verify_axioms().and(metrics.partial.verify_axioms()),
        ));
    }
    for m in 2..=max_n.min(DEFAULT_MAX_N) {
        let report = balance_compare(SortAlgorithm::Merge, SortAlgorithm::Insertion, m, None)?;
        rows.push(line(
            format!("merge decision tree is at least as balanced as insertion ({m} items)"),
            CheckResult::from_condition(report.first_more_balanced, || {
                Witness::new(
                    ["merge".to_string(), "insertion".to_string()],
                    "EPL(merge) <= EPL(insertion)",
                    rat_int(report.first.epl as i64),
                    rat_int(report.second.epl as i64),
                )
            }),
        ));
        rows.push(line(
            format!("average comparisons order like the balance order ({m} items)"),
            CheckResult::from_condition(report.averages_agree, || {
                Witness::new(
                    ["merge".to_string(), "insertion".to_string()],
                    "average ordering agrees with EPL ordering",
                    report.first.average,
                    report.second.average,
                )
            }),
        ));
        if m >= 4 {
            rows.push(line(
                format!("merge decision tree is strictly more balanced ({m} items)"),
                CheckResult::from_condition(report.strictly, || {
                    Witness::new(
                        ["merge".to_string(), "insertion".to_string()],
                        "EPL(merge) < EPL(insertion)",
                        rat_int(report.first.epl as i64),
                        rat_int(report.second.epl as i64),
                    )
                }),
            ));
        }
    }
    Ok(rows)
}

/// Alexandrov families, Lawson discreteness, and chain-open recovery.
fn rows_topology(n: usize) -> Result<Vec<VerdictLine>, CliError> {
    let mut rows = Vec::new();
    for m in 1..=n.min(6) {
        let mut agree = CheckResult::pass();
        let mut axioms = CheckResult::pass();
        let mut lawson = CheckResult::pass();
        let mut maximal = CheckResult::pass();
        for seq in enumerate_tn(m)? {
            let tree = tree_from_seq(&seq)?;
            let family = down_sets(&tree)?;
            let bottom = FiniteOrder::from_tree(&tree, Orientation::RootAsBottom);
            let top = FiniteOrder::from_tree(&tree, Orientation::RootAsTop);
            let pair = alexandrov_topologies(&bottom)?;
            agree = agree.and(CheckResult::from_condition(
                family.sets() == pair.lower.opens(),
                || {
                    Witness::new(
                        [seq.to_string()],
                        "down-set family equals the lower Alexandrov opens",
                        rat_int(family.sets().len() as i64),
                        rat_int(pair.lower.opens().len() as i64),
                    )
                },
            ));
            axioms = axioms.and(pair.upper.verify()).and(pair.lower.verify());
            lawson = lawson.and(lawson_check(&bottom)?).and(lawson_check(&top)?);
            let report = maximal_chain_open(&tree)?;
            maximal = maximal.and(CheckResult::from_condition(
                report.recovered == seq && report.maximal.len() == m,
                || {
                    Witness::new(
                        [seq.to_string(), report.recovered.to_string()],
                        "maximal chain-open sets recover the leaf profile",
                        rat_int(report.maximal.len() as i64),
                        rat_int(m as i64),
                    )
                },
            ));
        }
        rows.push(line(format!("down-sets equal the lower Alexandrov topology ({m}-leaf trees)"), agree));
        rows.push(line(format!("Alexandrov families satisfy the topology axioms ({m}-leaf trees)"), axioms));
        rows.push(line(format!("Lawson join is discrete on tree orders ({m}-leaf trees, both orientations)"), lawson));
        rows.push(line(format!("maximal chain-open sets are the root-to-leaf paths ({m}-leaf trees)"), maximal));
    }
    for m in 1..=n.min(7) {
        let poset = build_balance_poset(m)?;
        rows.push(line(
            format!("Lawson join is discrete on the balance quotient ({m} leaves)"),
            lawson_check(&poset.quotient_order())?,
        ));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------
// Rendering and the entry point
// ---------------------------------------------------------------------

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn csv_into_string(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

fn render_enumerate_csv(payload: &EnumeratePayload) -> Result<String, CliError> {
    let mut w = csv_writer();
    w.write_record(["depths", "epl", "kraft"]).map_err(io_from_csv)?;
    for row in &payload.trees {
        w.write_record([row.depths.to_string(), row.epl.to_string(), row.kraft.clone()])
            .map_err(io_from_csv)?;
    }
    csv_into_string(w)
}

fn render_check_csv(verdicts: &[VerdictLine]) -> Result<String, CliError> {
    let mut w = csv_writer();
    w.write_record(["name", "verdict", "detail"]).map_err(io_from_csv)?;
    for v in verdicts {
        let (tag, detail) = match v.result.witness() {
            None => ("pass", String::new()),
            Some(witness) => ("fail", witness.to_string()),
        };
        w.write_record([v.name.as_str(), tag, detail.as_str()]).map_err(io_from_csv)?;
    }
    csv_into_string(w)
}

fn io_from_csv(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e.to_string()))
}

/// Renders the stdout text for a finished report: a pretty-printed JSON
/// document, or CSV for the commands that offer `--format csv`.
pub fn render_stdout(report: &RunReport) -> Result<String, CliError> {
    let format = match &report.plan {
        RunPlan::Enumerate { format, .. } | RunPlan::Check { format, .. } => *format,
        _ => OutputFormat::Json,
    };
    match (format, &report.payload) {
        (OutputFormat::Csv, Payload::Enumerate(payload)) => render_enumerate_csv(payload),
        (OutputFormat::Csv, _) => render_check_csv(&report.verdicts),
        (OutputFormat::Json, _) => {
            let mut text = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
            text.push('\n');
            Ok(text)
        }
    }
}

fn diagnostic(e: &CliError) -> String {
    serde_json::json!({ "error": e.to_string() }).to_string()
}

/// Full command-line entry point: parse, execute, print, and return the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let plan = match parse_args(argv) {
        Ok(plan) => plan,
        Err(e) => return e.report(),
    };
    match execute(&plan).and_then(|report| Ok((render_stdout(&report)?, report))) {
        Ok((text, report)) => {
            print!("{text}");
            report.exit_code
        }
        Err(e) => {
            eprintln!("{}", diagnostic(&e));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::format_rat;

    fn plan(args: &[&str]) -> RunPlan {
        parse_args_with_bound(args, DEFAULT_MAX_N).unwrap()
    }

    fn usage(args: &[&str]) -> UsageError {
        parse_args_with_bound(args, DEFAULT_MAX_N).unwrap_err()
    }

    #[test]
    fn parses_the_documented_invocations() {
        assert_eq!(
            plan(&["qdt", "analyze", "--alg", "merge", "--n", "4"]),
            RunPlan::Analyze { alg: SortAlgorithm::Merge, n: 4, dot: None }
        );
        assert_eq!(
            plan(&["qdt", "check", "--suite", "pmetric", "--n", "5", "--format", "csv"]),
            RunPlan::Check {
                suite: Suite::Pmetric,
                n: Some(5),
                seed: 0,
                sample: 1_000_000,
                format: OutputFormat::Csv,
            }
        );
        assert_eq!(
            plan(&["qdt", "enumerate", "--leaves", "4"]),
            RunPlan::Enumerate { leaves: 4, format: OutputFormat::Json }
        );
        assert_eq!(
            plan(&["qdt", "topo", "--seq", "⟨1,3,3,4,4,4,4⟩"]),
            RunPlan::Topo {
                source: TreeSource::Sequence { seq: "⟨1,3,3,4,4,4,4⟩".parse().unwrap() }
            }
        );
        assert_eq!(
            plan(&["qdt", "topo", "--alg", "insertion", "--n", "3"]),
            RunPlan::Topo {
                source: TreeSource::Algorithm { alg: SortAlgorithm::Insertion, n: 3 }
            }
        );
    }

    #[test]
    fn rejects_out_of_range_and_malformed_arguments() {
        assert!(matches!(usage(&["qdt", "enumerate", "--leaves", "0"]), UsageError::Invalid(_)));
        assert!(matches!(usage(&["qdt", "enumerate", "--leaves", "17"]), UsageError::Invalid(_)));
        assert!(matches!(usage(&["qdt", "analyze", "--alg", "merge", "--n", "9"]), UsageError::Invalid(_)));
        assert!(matches!(usage(&["qdt", "lattice", "--leaves", "13"]), UsageError::Invalid(_)));
        assert!(matches!(usage(&["qdt", "topo", "--seq", "⟨1,2"]), UsageError::Invalid(_)));
        assert!(matches!(usage(&["qdt", "topo", "--alg", "merge"]), UsageError::Invalid(_)));
        assert!(matches!(
            usage(&["qdt", "topo", "--alg", "merge", "--n", "3", "--seq", "⟨0⟩"]),
            UsageError::Invalid(_)
        ));
        assert!(matches!(
            usage(&["qdt", "check", "--suite", "all", "--sample", "0"]),
            UsageError::Invalid(_)
        ));
        assert!(matches!(usage(&["qdt", "analyze", "--alg", "bubble", "--n", "3"]), UsageError::Clap(_)));
        assert!(matches!(usage(&["qdt", "frobnicate"]), UsageError::Clap(_)));
    }

    #[test]
    fn env_bound_widens_analyze() {
        assert!(parse_args_with_bound(["qdt", "analyze", "--alg", "merge", "--n", "9"], 10).is_ok());
        assert!(parse_args_with_bound(["qdt", "analyze", "--alg", "merge", "--n", "9"], 8).is_err());
    }

    #[test]
    fn plan_round_trips_through_json() {
        let plans = vec![
            plan(&["qdt", "enumerate", "--leaves", "4", "--format", "csv"]),
            plan(&["qdt", "analyze", "--alg", "insertion", "--n", "3", "--dot", "/tmp/x.dot"]),
            plan(&["qdt", "lattice", "--leaves", "7"]),
            plan(&["qdt", "topo", "--seq", "⟨0⟩"]),
            plan(&["qdt", "check", "--suite", "topology", "--seed", "9"]),
        ];
        for p in plans {
            let json = serde_json::to_string(&p).unwrap();
            let back: RunPlan = serde_json::from_str(&json).unwrap();
            assert_eq!(back, p, "{json}");
        }
    }

    #[test]
    fn analyze_merge_four_matches_the_pinned_figures() {
        let report = execute(&plan(&["qdt", "analyze", "--alg", "merge", "--n", "4"])).unwrap();
        assert_eq!(report.exit_code, 0);
        let Payload::Analyze(payload) = &report.payload else { panic!("wrong payload") };
        assert_eq!(payload.worst, 5);
        assert_eq!(format_rat(&payload.average), "14/3");
        assert_eq!(payload.epl, 112);
        assert!(report.verdicts.iter().all(|v| v.result.is_pass()));
    }

    #[test]
    fn lattice_seven_flags_the_collision_and_still_passes() {
        let report = execute(&plan(&["qdt", "lattice", "--leaves", "7"])).unwrap();
        assert_eq!(report.exit_code, 0, "witnesses are informational");
        let Payload::Lattice(payload) = &report.payload else { panic!("wrong payload") };
        assert!(!payload.raw_is_partial_order);
        assert_eq!(payload.antisymmetry_witnesses.len(), 1);
        let (a, b) = &payload.antisymmetry_witnesses[0];
        assert_eq!(a.to_string(), "⟨1,3,3,4,4,4,4⟩");
        assert_eq!(b.to_string(), "⟨2,2,2,3,4,5,5⟩");
        assert_eq!(payload.sequence_count, 9);
        assert_eq!(payload.class_count, 8);
    }

    #[test]
    fn check_covaluation_three_passes_exhaustively() {
        let report =
            execute(&plan(&["qdt", "check", "--suite", "covaluation", "--n", "3"])).unwrap();
        assert_eq!(report.exit_code, 0);
        let Payload::Check(payload) = &report.payload else { panic!("wrong payload") };
        assert_eq!(payload.total, payload.passed);
        assert!(report.verdicts.iter().all(|v| v.name.contains("exhaustive")));
    }

    #[test]
    fn check_suites_pass_at_reduced_sizes() {
        for suite in ["semival", "pmetric", "lattice", "topology"] {
            let report = execute(&plan(&[
                "qdt", "check", "--suite", suite, "--n", "4", "--sample", "2000",
            ]))
            .unwrap();
            assert_eq!(report.exit_code, 0, "suite {suite}");
            let Payload::Check(payload) = &report.payload else { panic!("wrong payload") };
            assert_eq!(payload.passed, payload.total, "suite {suite}");
        }
    }

    #[test]
    fn topo_of_the_seven_leaf_profile() {
        let report = execute(&plan(&["qdt", "topo", "--seq", "⟨1,3,3,4,4,4,4⟩"])).unwrap();
        assert_eq!(report.exit_code, 0);
        let Payload::Topo(payload) = &report.payload else { panic!("wrong payload") };
        assert_eq!(payload.node_count, 13);
        assert_eq!(payload.chain_open.maximal.len(), 7);
        assert_eq!(payload.chain_open.recovered.to_string(), "⟨1,3,3,4,4,4,4⟩");
        assert!(!payload.chain_open.base_check.is_pass());
        assert_eq!(payload.down_set_count, payload.lower_open_count);
    }

    #[test]
    fn invalid_kraft_sequence_is_a_module_error() {
        let plan = plan(&["qdt", "topo", "--seq", "⟨1,1,1⟩"]);
        let err = execute(&plan).unwrap_err();
        assert!(matches!(err, CliError::Tree(TreeError::InvalidKraft { .. })), "{err}");
        assert!(diagnostic(&err).starts_with("{\"error\":"));
    }

    #[test]
    fn stdout_is_deterministic() {
        let plan = plan(&["qdt", "check", "--suite", "pmetric", "--n", "3"]);
        let a = render_stdout(&execute(&plan).unwrap()).unwrap();
        let b = render_stdout(&execute(&plan).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn csv_outputs_have_headers_and_lf_endings() {
        let report =
            execute(&plan(&["qdt", "enumerate", "--leaves", "4", "--format", "csv"])).unwrap();
        let csv = render_stdout(&report).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "depths,epl,kraft");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].contains("9,1/1") || lines[1].contains("8,1/1"));
        assert!(!csv.contains('\r'));

        let report = execute(&plan(&[
            "qdt", "check", "--suite", "covaluation", "--n", "3", "--format", "csv",
        ]))
        .unwrap();
        let csv = render_stdout(&report).unwrap();
        assert!(csv.starts_with("name,verdict,detail\n"));
        assert!(csv.lines().skip(1).all(|l| l.contains(",pass,")));
    }

    #[test]
    fn report_json_round_trips_with_typed_payloads() {
        let report = execute(&plan(&["qdt", "analyze", "--alg", "merge", "--n", "4"])).unwrap();
        let json = render_stdout(&report).unwrap();
        let back: Report<ComplexityReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(Payload::Analyze(back.payload), report.payload);
        assert_eq!(back.exit_code, 0);

        let report = execute(&plan(&["qdt", "lattice", "--leaves", "6"])).unwrap();
        let json = render_stdout(&report).unwrap();
        let back: Report<LatticePayload> = serde_json::from_str(&json).unwrap();
        assert_eq!(Payload::Lattice(back.payload), report.payload);

        let report = execute(&plan(&["qdt", "topo", "--seq", "⟨1,2,2⟩"])).unwrap();
        let json = render_stdout(&report).unwrap();
        let back: Report<TopoPayload> = serde_json::from_str(&json).unwrap();
        assert_eq!(Payload::Topo(back.payload), report.payload);

        let report = execute(&plan(&["qdt", "enumerate", "--leaves", "5"])).unwrap();
        let json = render_stdout(&report).unwrap();
        let back: Report<EnumeratePayload> = serde_json::from_str(&json).unwrap();
        assert_eq!(back.payload.count, 3);
    }

    #[test]
    fn quotient_dot_is_a_digraph() {
        let poset = build_balance_poset(6).unwrap();
        let dot = quotient_dot(&poset);
        assert!(dot.starts_with("digraph balance_chain {"));
        assert!(dot.trim_end().ends_with('}'));
        assert_eq!(dot.matches("->").count(), poset.classes.len() - 1);
        assert!(dot.contains("EPL=16 (1 trees)"));
    }
}
