//! Command-line surface: file formats, report documents and the
//! subcommands behind the `stabigraph` binary.
//!
//! Exit codes: 0 stable, 1 unstable, 2 degenerate or undetermined,
//! 3 input error.

mod verify;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::adaptive::{adaptive_jacobian, adaptive_verdict_with};
use crate::criteria::{
    stability_certificate_with, CertificateOptions, CertificatePath, CutWitness, PhaseTreeRule,
    StabilityReport, Verdict,
};
use crate::error::{Error, Result};
use crate::forest_sums::{phi, PhiMethod, ZeroRowSumMatrix};
use crate::graph::{Edge, IndexSubset, WeightedGraph};
use crate::isospectral::{check_isospectral, FlipSet, IsospectralReport, SpectrumMode};
use crate::kuramoto::{analyze_state, find_phase_locked, OddCoupling, PhaseLockedState, PhaseSystem};
use crate::matrix::SymmetricMatrix;
use crate::minors::{principal_minor, JscOptions, JscStrategy, ZERO_TOLERANCE};
use crate::symbolic::{format_expansion, symbol_terms};

pub use verify::{
    case_rng, cmd_verify, random_connected_graph, random_integer_graph, suite_names, SuiteResult,
    VerifyOptions, VerifySummary,
};

pub const EXIT_INPUT_ERROR: i32 = 3;

/// Network or model description.
///
/// `n` may be omitted when it follows from the other fields.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl NetworkDocument {
    /// JSON if the text starts with `{`, the edge-list format otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let doc: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            doc.node_count()?;
            Ok(doc)
        } else {
            Ok(Self::from_graph(&WeightedGraph::parse_edge_list(text, None)?))
        }
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        Self {
            n: Some(g.n()),
            edges: g.edges().to_vec(),
            ..Self::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Node count, explicit or implied; every array must agree with it.
    pub fn node_count(&self) -> Result<usize> {
        let implied = [self.omega.as_ref().map(Vec::len), self.x.as_ref().map(Vec::len)];
        let from_edges = self.edges.iter().map(|e| e.i.max(e.j) + 1).max();
        let n = self
            .n
            .or(implied[0])
            .or(implied[1])
            .or(from_edges)
            .unwrap_or(0);
        for len in implied.into_iter().flatten() {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        for e in &self.edges {
            if e.i >= e.j {
                return Err(Error::Parse(format!("edge ({}, {}) must have i < j", e.i, e.j)));
            }
            if e.j >= n {
                return Err(Error::NodeOutOfRange { node: e.j, n });
            }
        }
        Ok(n)
    }

    pub fn graph(&self) -> Result<WeightedGraph> {
        let n = self.node_count()?;
        WeightedGraph::from_edges(n, self.edges.iter().map(|e| (e.i, e.j, e.w)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Graph,
    Kuramoto,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CertifyOptions {
    pub mode: Mode,
    pub table: bool,
    pub exact: bool,
    pub jsc: JscOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutRecord {
    pub part_one: Vec<usize>,
    pub part_two: Vec<usize>,
    pub crossing: Vec<[usize; 2]>,
    pub boundary: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentRecord {
    pub nodes: Vec<usize>,
    pub negative_link: [usize; 2],
    pub weight: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorRecord {
    /// Variables of the minor (nodes, or all variables in adaptive mode).
    pub subset: Vec<usize>,
    pub value: f64,
    pub sign: crate::scalar::SignClass,
    pub expected: crate::scalar::SignClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRuleRecord {
    pub threshold: f64,
    pub edges: Vec<[usize; 2]>,
    pub spans: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spanning_forest: Option<Vec<[usize; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<CutRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<SegmentRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minor: Option<MinorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_rule: Option<PhaseRuleRecord>,
}

/// One row of the nested minor table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorRow {
    pub k: usize,
    pub subset: Vec<usize>,
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub mode: Mode,
    pub n: usize,
    /// Dimension of the Jacobian.
    pub variables: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub tol_zero: f64,
    pub strategy: String,
    pub exact: bool,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<PhaseLockedState>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub verdict: Verdict,
    pub path: CertificatePath,
    pub reason: String,
    pub witnesses: Witnesses,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minors: Option<Vec<MinorRow>>,
    pub diagnostics: Diagnostics,
}

impl ReportDocument {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    /// Plot-ready table: `k`, subset, `D`, `Phi`.
    pub fn minors_tsv(&self) -> String {
        let mut out = String::from("k\tS\tD\tPhi\n");
        for row in self.minors.iter().flatten() {
            let s: Vec<String> = row.subset.iter().map(ToString::to_string).collect();
            let phi = row.phi.map(|p| p.to_string()).unwrap_or_default();
            out.push_str(&format!("{}\t{}\t{}\t{}\n", row.k, s.join(","), row.d, phi));
        }
        out
    }
}

fn pair(g: &WeightedGraph, k: usize) -> [usize; 2] {
    [g.edge(k).i, g.edge(k).j]
}

fn witnesses(g: &WeightedGraph, report: &StabilityReport) -> Witnesses {
    let cut = report.cut.as_ref().map(|c: &CutWitness| CutRecord {
        part_one: c.part_one.clone(),
        part_two: c.part_two.clone(),
        crossing: c.crossing.iter().map(|&k| pair(g, k)).collect(),
        boundary: c.boundary.clone(),
    });
    let segments = report
        .mesoscale
        .iter()
        .flat_map(|m| &m.bound_violations)
        .map(|b| SegmentRecord {
            nodes: b.segment.nodes.clone(),
            negative_link: pair(g, b.segment.links[b.x]),
            weight: b.weight,
            bound: b.bound,
        })
        .collect();
    let minor = report.numeric.iter().find_map(|c| {
        let w = c.jsc.witness.as_ref().or(c.jsc.zero_minor.as_ref())?;
        Some(MinorRecord {
            subset: w.subset.members().iter().map(|&v| c.nodes[v]).collect(),
            value: w.value,
            sign: w.sign,
            expected: w.expected,
        })
    });
    let phase_rule = report.phase_rule.as_ref().map(|r: &PhaseTreeRule| PhaseRuleRecord {
        threshold: r.threshold,
        edges: r.edges.iter().map(|&k| pair(g, k)).collect(),
        spans: r.spans,
    });
    Witnesses {
        spanning_forest: report
            .spanning_forest
            .as_ref()
            .map(|f| f.iter().map(|&k| pair(g, k)).collect()),
        cut,
        segments,
        minor,
        phase_rule,
    }
}

fn strategy_label(s: &JscStrategy) -> String {
    match s {
        JscStrategy::Nested => "nested".into(),
        JscStrategy::NestedOrder(o) => format!("nested:{o:?}"),
        JscStrategy::AllSubsets => "all".into(),
        JscStrategy::Sampled { count, seed } => format!("sampled:{count} (seed {seed})"),
    }
}

/// Nested forest-sum table `S_k = {0..k-1}`, `k = 1..n-1`.
fn graph_table(g: &WeightedGraph, exact: bool) -> Result<Vec<MinorRow>> {
    let n = g.n();
    let zm = ZeroRowSumMatrix::new(g.clone());
    let exact_m = zm.exact();
    (1..n)
        .map(|k| {
            let s = IndexSubset::leading(k, n)?;
            let (d, p) = if exact {
                let d = principal_minor(&exact_m, &s)?.value.to_f64().unwrap_or(f64::NAN);
                let p = phi::<num_rational::BigRational>(&zm, &s, PhiMethod::Determinant)?
                    .value
                    .to_f64()
                    .unwrap_or(f64::NAN);
                (d, p)
            } else {
                (
                    principal_minor(zm.matrix(), &s)?.value,
                    phi::<f64>(&zm, &s, PhiMethod::Determinant)?.value,
                )
            };
            Ok(MinorRow {
                k,
                subset: s.members().to_vec(),
                d,
                phi: Some(p),
            })
        })
        .collect()
}

fn matrix_table(m: &SymmetricMatrix<f64>) -> Result<Vec<MinorRow>> {
    let n = m.n();
    (1..n)
        .map(|k| {
            let s = IndexSubset::leading(k, n)?;
            Ok(MinorRow {
                k,
                subset: s.members().to_vec(),
                d: principal_minor(m, &s)?.value,
                phi: None,
            })
        })
        .collect()
}

pub fn cmd_certify(doc: &NetworkDocument, options: &CertifyOptions) -> Result<ReportDocument> {
    let n = doc.node_count()?;
    let cert_options = CertificateOptions {
        jsc: options.jsc.clone(),
        exact: options.exact,
    };
    let mut diagnostics = Diagnostics {
        mode: options.mode,
        n,
        variables: n,
        rank: None,
        tol_zero: options.jsc.tol_zero,
        strategy: strategy_label(&options.jsc.strategy),
        exact: options.exact,
        method: "topology",
        state: None,
    };
    let (report, graph, table) = match options.mode {
        Mode::Graph => {
            let g = doc.graph()?;
            let report = stability_certificate_with(&g, &cert_options);
            let table = if options.table { Some(graph_table(&g, options.exact)?) } else { None };
            (report, g, table)
        }
        Mode::Kuramoto => {
            let g = doc.graph()?;
            let omega = doc
                .omega
                .clone()
                .ok_or_else(|| Error::Parse("kuramoto mode needs \"omega\"".into()))?;
            let coupling = OddCoupling::named(doc.coupling.as_deref().unwrap_or("sin"))?;
            let sys = PhaseSystem::new(omega, g)?.with_uniform_coupling(coupling);
            let x0 = doc.x.clone().unwrap_or_else(|| vec![0.0; n]);
            match find_phase_locked(&sys, &x0) {
                Ok(state) => {
                    let jac = crate::kuramoto::kuramoto_jacobian(&sys, &state);
                    let mut report = analyze_state(&sys, &state);
                    // the phase rule refers to coupling links; report it by node pairs
                    let witnesses_graph = jac.graph().clone();
                    let rule = report.phase_rule.take();
                    let table = if options.table {
                        Some(graph_table(&witnesses_graph, options.exact)?)
                    } else {
                        None
                    };
                    diagnostics.state = Some(state);
                    let mut doc_out = finish(report, &witnesses_graph, table, diagnostics);
                    doc_out.witnesses.phase_rule = rule.map(|r| PhaseRuleRecord {
                        threshold: r.threshold,
                        edges: r.edges.iter().map(|&k| pair(sys.coupling(), k)).collect(),
                        spans: r.spans,
                    });
                    return Ok(doc_out);
                }
                Err(e @ (Error::NoConvergence { .. } | Error::Disconnected)) => {
                    diagnostics.method = "solver";
                    return Ok(ReportDocument {
                        verdict: Verdict::Degenerate,
                        path: CertificatePath::Precondition,
                        reason: format!("no phase-locked state found: {e}"),
                        witnesses: Witnesses::default(),
                        minors: None,
                        diagnostics,
                    });
                }
                Err(e) => return Err(e),
            }
        }
        Mode::Adaptive => {
            let x = doc
                .x
                .clone()
                .ok_or_else(|| Error::Parse("adaptive mode needs \"x\"".into()))?;
            let b = doc.b.ok_or_else(|| Error::Parse("adaptive mode needs \"b\"".into()))?;
            let report = adaptive_verdict_with(&x, b, &options.jsc)?;
            diagnostics.variables = n * (n + 1) / 2;
            let table = if options.table && b != 0.0 {
                Some(matrix_table(&adaptive_jacobian(&x, b)?.matrix)?)
            } else {
                None
            };
            let tilde = crate::adaptive::tilde_graph(&x);
            (report, tilde, table)
        }
    };
    Ok(finish(report, &graph, table, diagnostics))
}

fn finish(
    report: StabilityReport,
    g: &WeightedGraph,
    minors: Option<Vec<MinorRow>>,
    mut diagnostics: Diagnostics,
) -> ReportDocument {
    if report.path == CertificatePath::Numeric {
        diagnostics.method = "jsc";
        diagnostics.rank = Some(report.numeric.iter().map(|c| c.jsc.rank).sum());
    }
    ReportDocument {
        verdict: report.verdict,
        path: report.path,
        reason: report.reason.clone(),
        witnesses: witnesses(g, &report),
        minors,
        diagnostics,
    }
}

/// Input for the `flips` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipDocument {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub flips: Vec<[usize; 2]>,
}

pub fn cmd_flips(doc: &FlipDocument, exact: bool) -> Result<IsospectralReport> {
    let m = SymmetricMatrix::from_rows(&doc.matrix)?;
    let flips = FlipSet::new(doc.flips.iter().map(|p| (p[0], p[1])))?;
    let mode = if exact { SpectrumMode::Exact } else { SpectrumMode::Float };
    check_isospectral(&m, &flips, mode)
}

#[derive(Debug, Parser)]
#[command(name = "stabigraph", version, about = "Stability certificates for symmetric coupled networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a network, Kuramoto system or adaptive state.
    Certify(CertifyArgs),
    /// Run the seeded cross-check suites.
    Verify(VerifyArgs),
    /// Print the cycle-symbol expansion of a minor of order q.
    Expand {
        #[arg(value_parser = clap::value_parser!(u64).range(1..=9))]
        order: u64,
    },
    /// Check spectrum invariance under sign flips ({"matrix": .., "flips": ..}).
    Flips {
        input: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Debug, clap::Args)]
pub struct CertifyArgs {
    /// JSON document or edge list; standard input when omitted.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Graph)]
    pub mode: Mode,
    /// Include the nested minor table in the report.
    #[arg(long)]
    pub table: bool,
    /// Write the nested minor table as TSV.
    #[arg(long, value_name = "PATH")]
    pub tsv: Option<PathBuf>,
    /// Exact rational arithmetic for the numeric layer.
    #[arg(long)]
    pub exact: bool,
    /// nested | all | sampled:k
    #[arg(long, default_value = "nested")]
    pub strategy: String,
    #[arg(long, default_value_t = ZERO_TOLERANCE)]
    pub tol_zero: f64,
    /// Seed for sampled strategies.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    #[arg(long, hide = true)]
    pub mutate_sign: bool,
}

pub fn parse_strategy(text: &str, seed: u64) -> Result<JscStrategy> {
    match text {
        "nested" => Ok(JscStrategy::Nested),
        "all" => Ok(JscStrategy::AllSubsets),
        other => {
            let count = other
                .strip_prefix("sampled:")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown strategy {other:?}")))?;
            Ok(JscStrategy::Sampled { count, seed })
        }
    }
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
        }
        None => {
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Error::Parse(format!("standard input: {e}")))?;
        }
    }
    Ok(text)
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn execute(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Parse(format!("output: {e}"));
    match command {
        Command::Certify(args) => {
            let doc = NetworkDocument::parse(&read_input(&args.input, stdin)?)?;
            let options = CertifyOptions {
                mode: args.mode,
                table: args.table || args.tsv.is_some(),
                exact: args.exact,
                jsc: JscOptions {
                    strategy: parse_strategy(&args.strategy, args.seed)?,
                    tol_zero: args.tol_zero,
                },
            };
            let mut report = cmd_certify(&doc, &options)?;
            if let Some(path) = &args.tsv {
                std::fs::write(path, report.minors_tsv())
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                if !args.table {
                    report.minors = None;
                }
            }
            let json = serde_json::to_string_pretty(&report).expect("serializable");
            writeln!(stdout, "{json}").map_err(io)?;
            Ok(report.exit_code())
        }
        Command::Verify(args) => {
            let options = VerifyOptions {
                seed: args.seed,
                max_n: args.max_n,
                cases: args.cases,
                mutate_sign: args.mutate_sign,
            };
            let summary = cmd_verify(&options);
            write!(stdout, "{}", summary.render(&options)).map_err(io)?;
            Ok(if summary.all_passed() { 0 } else { 1 })
        }
        Command::Expand { order } => {
            let terms = symbol_terms(order as usize)?;
            writeln!(stdout, "{}", format_expansion(&terms)).map_err(io)?;
            Ok(0)
        }
        Command::Flips { input, exact } => {
            let text = read_input(&input, stdin)?;
            let doc: FlipDocument = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let report = cmd_flips(&doc, exact)?;
            let json = serde_json::to_string_pretty(&report).expect("serializable");
            writeln!(stdout, "{json}").map_err(io)?;
            Ok(if report.invariant { 0 } else { 1 })
        }
    }
}
