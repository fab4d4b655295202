//! Topological stability criteria for zero-row-sum Jacobians.
//!
//! [`stability_certificate`] answers in layers, stopping at the first one
//! that decides:
//!
//! 1. all link weights non-negative: stable;
//! 2. some component has no spanning tree of positive links: unstable, with
//!    a negative cut as witness;
//! 3. a mesoscale objection that forces a wrong-signed minor: unstable;
//! 4. otherwise the sign conditions are checked numerically, one component
//!    at a time.

mod cut;
mod segment;

use serde::Serialize;

use crate::forest_sums::ZeroRowSumMatrix;
use crate::graph::{components, IndexSubset, WeightedGraph};
use crate::minors::{jsc_verdict, JscOptions, JscOutcome, JscVerdict};

pub use cut::{
    cut_expansion_check, cut_rayleigh_quotient, positive_spanning_tree, CutExpansionCheck,
    CutWitness, ExpansionTerm, PositiveTree,
};
pub use segment::{elementary_symmetric, mesoscale_report, segment_bound, MesoscaleReport, SegmentBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Degenerate,
}

impl Verdict {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Stable => 0,
            Verdict::Unstable => 1,
            Verdict::Degenerate => 2,
        }
    }
}

impl From<JscOutcome> for Verdict {
    fn from(o: JscOutcome) -> Self {
        match o {
            JscOutcome::Satisfied => Verdict::Stable,
            JscOutcome::Violated => Verdict::Unstable,
            JscOutcome::Degenerate => Verdict::Degenerate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificatePath {
    AllNonnegative,
    NoPositiveSpanningTree,
    Mesoscale,
    Numeric,
    /// Model-specific precondition, e.g. the decay rate of adaptive links.
    Precondition,
}

/// Links passing a phase-difference threshold, and whether they span.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTreeRule {
    pub threshold: f64,
    pub edges: Vec<usize>,
    pub spans: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub path: CertificatePath,
    pub reason: String,
    /// Positive spanning forest (edge indices) when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spanning_forest: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<CutWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesoscale: Option<MesoscaleReport>,
    /// One verdict per connected component, in component order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub numeric: Vec<ComponentVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_rule: Option<PhaseTreeRule>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentVerdict {
    pub nodes: Vec<usize>,
    pub jsc: JscVerdict,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CertificateOptions {
    pub jsc: JscOptions,
    /// Evaluate the numeric layer in exact rational arithmetic.
    pub exact: bool,
}

pub fn stability_certificate(g: &WeightedGraph) -> StabilityReport {
    stability_certificate_with(g, &CertificateOptions::default())
}

pub fn stability_certificate_with(g: &WeightedGraph, options: &CertificateOptions) -> StabilityReport {
    let tree = positive_spanning_tree(g);
    let mut report = StabilityReport {
        verdict: Verdict::Stable,
        path: CertificatePath::AllNonnegative,
        reason: String::new(),
        spanning_forest: None,
        cut: None,
        mesoscale: None,
        numeric: Vec::new(),
        phase_rule: None,
    };
    if let PositiveTree::Spanning { edges } = &tree {
        report.spanning_forest = Some(edges.clone());
    }
    if g.all_weights_nonnegative() {
        report.reason = "all link weights are non-negative".into();
        return report;
    }
    if let PositiveTree::Cut(cut) = tree {
        report.verdict = Verdict::Unstable;
        report.path = CertificatePath::NoPositiveSpanningTree;
        report.reason = format!(
            "no positive spanning tree: {} negative link(s) separate {:?} from the rest of its component",
            cut.crossing.len(),
            cut.part_one
        );
        report.cut = Some(cut);
        return report;
    }
    let meso = mesoscale_report(g);
    if meso.has_strict_violation() {
        report.verdict = Verdict::Unstable;
        report.path = CertificatePath::Mesoscale;
        report.reason = if !meso.multiple_negatives.is_empty() {
            "an unbranched segment carries more than one negative link".into()
        } else {
            let b = meso
                .bound_violations
                .iter()
                .find(|b| b.is_strictly_violated())
                .expect("strict violation");
            format!(
                "negative link weight {} exceeds the segment bound {}",
                b.weight, b.bound
            )
        };
        report.mesoscale = Some(meso);
        return report;
    }
    report.mesoscale = Some(meso);
    report.path = CertificatePath::Numeric;
    report.numeric = numeric_layer(g, options);
    report.verdict = combine(report.numeric.iter().map(|c| c.jsc.outcome));
    report.reason = match report.verdict {
        Verdict::Stable => "all sign conditions hold in every component".into(),
        Verdict::Unstable => "a principal minor has the wrong sign".into(),
        Verdict::Degenerate => "a minor vanishes or the rank is not n-1".into(),
    };
    report
}

/// Overall verdict from per-component outcomes.
pub fn combine(outcomes: impl IntoIterator<Item = JscOutcome>) -> Verdict {
    let mut verdict = Verdict::Stable;
    for o in outcomes {
        match o {
            JscOutcome::Violated => return Verdict::Unstable,
            JscOutcome::Degenerate => verdict = Verdict::Degenerate,
            JscOutcome::Satisfied => {}
        }
    }
    verdict
}

fn numeric_layer(g: &WeightedGraph, options: &CertificateOptions) -> Vec<ComponentVerdict> {
    let zm = ZeroRowSumMatrix::new(g.clone());
    // diagonal rebuilt exactly so that rows still sum to zero
    let exact = options.exact.then(|| zm.exact());
    components(g)
        .members
        .into_iter()
        .map(|nodes| {
            let s = IndexSubset::new(nodes.iter().copied(), g.n()).expect("component nodes");
            let jsc = match &exact {
                Some(m) => jsc_verdict(&m.principal(&s), &options.jsc),
                None => jsc_verdict(&zm.matrix().principal(&s), &options.jsc),
            }
            .expect("component block is a valid matrix");
            ComponentVerdict { nodes, jsc }
        })
        .collect()
}
