//! Kuramoto oscillators with adaptive all-to-all coupling,
//! `dA_ij/dt = cos(x_j - x_i) - b A_ij`.
//!
//! At a locked state `A_ij = cos(x_j - x_i) / b`. Variables are ordered as
//! the `L = N(N-1)/2` couplings `A_ij` (lexicographic in `(i, j)`, `i < j`)
//! followed by the `N` phases. The Jacobian is symmetric:
//!
//! ```text
//!     [ -b I   C ]      C[(i,j), x_i] = sin(x_j - x_i)
//!     [  C^T   j ]      C[(i,j), x_j] = sin(x_i - x_j)
//! ```
//!
//! with `j` zero-row-sum, `j_ik = cos^2(x_k - x_i) / b`. Eliminating the
//! coupling block leaves `j~ / b`, where `j~` is zero-row-sum with link
//! weights `cos(2(x_k - x_i))`; minors containing every coupling variable
//! therefore reduce to forest sums on that graph.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::criteria::{
    positive_spanning_tree, CertificatePath, ComponentVerdict, PositiveTree, StabilityReport, Verdict,
};
use crate::error::{Error, Result};
use crate::forest_sums::{phi, PhiMethod, ZeroRowSumMatrix};
use crate::graph::{IndexSubset, WeightedGraph};
use crate::kuramoto::phase_tree_rule;
use crate::matrix::SymmetricMatrix;
use crate::minors::{jsc_verdict, minor_zero_threshold, principal_minor, JscOptions, ZERO_TOLERANCE};

/// Ordered coupling pairs `(i, j)`, `i < j`.
pub fn coupling_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Stationary couplings `cos(x_j - x_i) / b`, in pair order.
pub fn stationary_couplings(x: &[f64], b: f64) -> Result<Vec<f64>> {
    if b == 0.0 {
        return Err(Error::DegenerateB);
    }
    Ok(coupling_pairs(x.len())
        .into_iter()
        .map(|(i, j)| (x[j] - x[i]).cos() / b)
        .collect())
}

/// Right-hand side of the coupled system: coupling rates first, then phase
/// velocities.
pub fn adaptive_vector_field(omega: &[f64], b: f64, couplings: &[f64], x: &[f64]) -> Vec<f64> {
    let pairs = coupling_pairs(x.len());
    let mut out: Vec<f64> = pairs
        .iter()
        .zip(couplings)
        .map(|(&(i, j), a)| (x[j] - x[i]).cos() - b * a)
        .collect();
    let mut phase = omega.to_vec();
    for (&(i, j), a) in pairs.iter().zip(couplings) {
        phase[i] += a * (x[j] - x[i]).sin();
        phase[j] += a * (x[i] - x[j]).sin();
    }
    out.extend(phase);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveJacobian {
    pub phases: Vec<f64>,
    pub b: f64,
    pub pairs: Vec<(usize, usize)>,
    pub matrix: SymmetricMatrix<f64>,
}

impl AdaptiveJacobian {
    /// Number of coupling variables `L`.
    pub fn l(&self) -> usize {
        self.pairs.len()
    }

    pub fn oscillators(&self) -> usize {
        self.phases.len()
    }

    /// Index of phase `i` among all variables.
    pub fn phase_variable(&self, i: usize) -> usize {
        self.l() + i
    }
}

pub fn adaptive_jacobian(x: &[f64], b: f64) -> Result<AdaptiveJacobian> {
    let n = x.len();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: n });
    }
    if b == 0.0 {
        return Err(Error::DegenerateB);
    }
    if let Some(&bad) = x.iter().chain([&b]).find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let pairs = coupling_pairs(n);
    let l = pairs.len();
    let mut m = SymmetricMatrix::zeros(l + n);
    let mut diag = vec![0.0; n];
    for (e, &(i, j)) in pairs.iter().enumerate() {
        let d = x[j] - x[i];
        m.set(e, e, -b);
        m.set(e, l + i, d.sin());
        m.set(e, l + j, -d.sin());
        let o = d.cos() * d.cos() / b;
        m.set(l + i, l + j, o);
        diag[i] -= o;
        diag[j] -= o;
    }
    for (i, v) in diag.into_iter().enumerate() {
        m.set(l + i, l + i, v);
    }
    Ok(AdaptiveJacobian {
        phases: x.to_vec(),
        b,
        pairs,
        matrix: m,
    })
}

/// Complete graph on the oscillators with weights `cos(2(x_j - x_i))`.
pub fn tilde_graph(x: &[f64]) -> WeightedGraph {
    let edges = coupling_pairs(x.len())
        .into_iter()
        .map(|(i, j)| (i, j, (2.0 * (x[j] - x[i])).cos()));
    WeightedGraph::from_edges(x.len(), edges).expect("complete graph is simple")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionCheck {
    /// Oscillators in the subset.
    pub oscillators: Vec<usize>,
    /// Minor of the full Jacobian on all couplings plus `oscillators`.
    pub minor: f64,
    /// `(-1)^(L+n) b^(L-n) Phi~`.
    pub reduced: f64,
    pub phi_tilde: f64,
    /// `|minor - reduced|` over the larger magnitude. When `reduced` is
    /// exactly zero: 0 if the minor is under the zero threshold, else 1.
    pub relative_gap: f64,
}

/// Compares a minor over all coupling variables plus the oscillators in
/// `s_prime` with its forest-sum form on the tilde graph.
pub fn reduction_check(x: &[f64], b: f64, s_prime: &IndexSubset) -> Result<ReductionCheck> {
    let n = x.len();
    let l = n * n.saturating_sub(1) / 2;
    let full = IndexSubset::new((0..l).chain(s_prime.members().iter().map(|&i| l + i)), l + n)?;
    reduction_check_on(x, b, &full)
}

/// As [`reduction_check`], with the subset given over all `L + N`
/// variables; it must contain every coupling variable.
pub fn reduction_check_on(x: &[f64], b: f64, s: &IndexSubset) -> Result<ReductionCheck> {
    let jac = adaptive_jacobian(x, b)?;
    let l = jac.l();
    let n = jac.oscillators();
    if s.members().last().is_some_and(|&v| v >= l + n) {
        return Err(Error::SubsetOutOfRange {
            index: *s.members().last().unwrap(),
            n: l + n,
        });
    }
    if (0..l).any(|e| !s.contains(e)) {
        return Err(Error::BadSubset("subset must contain every coupling variable".into()));
    }
    let oscillators: Vec<usize> = s.members()[l..].iter().map(|v| v - l).collect();
    if oscillators.is_empty() {
        return Err(Error::BadSubset("subset must contain at least one oscillator".into()));
    }
    let minor = principal_minor(&jac.matrix, s)?.value;
    let zm = ZeroRowSumMatrix::new(tilde_graph(x));
    let phi_tilde = phi::<f64>(&zm, &IndexSubset::new(oscillators.iter().copied(), n)?, PhiMethod::Determinant)?.value;
    let k = oscillators.len();
    let sign = if (l + k) % 2 == 0 { 1.0 } else { -1.0 };
    let reduced = sign * b.powi(l as i32 - k as i32) * phi_tilde;
    // an exactly vanishing forest sum can only be matched up to the zero threshold
    let relative_gap = if reduced == 0.0 {
        if minor.abs() <= minor_zero_threshold(&jac.matrix, s, ZERO_TOLERANCE) {
            0.0
        } else {
            1.0
        }
    } else {
        (minor - reduced).abs() / minor.abs().max(reduced.abs())
    };
    Ok(ReductionCheck {
        oscillators,
        minor,
        reduced,
        phi_tilde,
        relative_gap,
    })
}

/// Layered verdict: decay rate, then a positive spanning tree of the tilde
/// graph, then the sign conditions on the full Jacobian.
pub fn adaptive_verdict(x: &[f64], b: f64) -> Result<StabilityReport> {
    adaptive_verdict_with(x, b, &JscOptions::default())
}

pub fn adaptive_verdict_with(x: &[f64], b: f64, options: &JscOptions) -> Result<StabilityReport> {
    let mut report = StabilityReport {
        verdict: Verdict::Unstable,
        path: CertificatePath::Precondition,
        reason: "b>0 violated".into(),
        spanning_forest: None,
        cut: None,
        mesoscale: None,
        numeric: Vec::new(),
        phase_rule: None,
    };
    if x.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.len(),
        });
    }
    if b.is_nan() || b <= 0.0 {
        return Ok(report);
    }
    let tilde = tilde_graph(x);
    report.phase_rule = Some(phase_tree_rule(&tilde, x, FRAC_PI_4));
    match positive_spanning_tree(&tilde) {
        PositiveTree::Cut(cut) => {
            report.path = CertificatePath::NoPositiveSpanningTree;
            report.reason = "tilde graph has no positive spanning tree".into();
            report.cut = Some(cut);
            return Ok(report);
        }
        PositiveTree::Spanning { edges } => report.spanning_forest = Some(edges),
    }
    let jac = adaptive_jacobian(x, b)?;
    let jsc = jsc_verdict(&jac.matrix, options)?;
    report.path = CertificatePath::Numeric;
    report.verdict = jsc.outcome.into();
    report.reason = match report.verdict {
        Verdict::Stable => "all sign conditions hold on the full Jacobian".into(),
        Verdict::Unstable => "a principal minor of the full Jacobian has the wrong sign".into(),
        Verdict::Degenerate => format!(
            "rank {} of {} (expected one zero mode) or a vanishing minor",
            jsc.rank, jsc.dimension
        ),
    };
    report.numeric = vec![ComponentVerdict {
        nodes: (0..jac.matrix.n()).collect(),
        jsc,
    }];
    Ok(report)
}
