//! Spectrum-preserving sign flips of off-diagonal entries.
//!
//! Negating `A_ij` and `A_ji` together leaves every `|A_ij|^2` term of the
//! characteristic polynomial alone; only cycles of length >= 3 can notice.
//! So on forests every flip set preserves the spectrum, and on graphs whose
//! cycles are vertex-disjoint, flip sets with an even count on every cycle
//! do.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bridge_edges, components, WeightedGraph};
use crate::matrix::SymmetricMatrix;
use crate::minors::eigenvalues;
use crate::scalar::Ring;

pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphClass {
    Forest,
    TreesPlusIsolatedCycles,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: GraphClass,
    /// Edge indices of each cyclic subgraph (the components of the graph
    /// left after deleting all bridges, isolated nodes dropped).
    pub cycles: Vec<Vec<usize>>,
}

pub fn classify(g: &WeightedGraph) -> Classification {
    let bridges = bridge_edges(g);
    let cyclic: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(k, _)| bridges.binary_search(k).is_err())
        .map(|(_, e)| (e.i, e.j, e.w))
        .collect();
    let rest = WeightedGraph::from_edges(g.n(), cyclic).expect("subgraph of a simple graph");
    let mut cycles = Vec::new();
    let mut simple = true;
    for members in components(&rest).members {
        if members.len() < 2 {
            continue;
        }
        simple &= members.iter().all(|&v| rest.degree(v) == 2);
        let mut edges: Vec<usize> = members
            .iter()
            .flat_map(|&v| rest.incident(v).iter().map(move |&(u, _)| (v, u)))
            .filter(|&(v, u)| v < u)
            .map(|(v, u)| g.edge_index(v, u).expect("edge of g"))
            .collect();
        edges.sort_unstable();
        cycles.push(edges);
    }
    let class = if cycles.is_empty() {
        GraphClass::Forest
    } else if simple {
        GraphClass::TreesPlusIsolatedCycles
    } else {
        GraphClass::Other
    };
    Classification { class, cycles }
}

/// Unordered pairs `{i, j}` whose entries are negated, stored with `i < j`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FlipSet(BTreeSet<(usize, usize)>);

impl FlipSet {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in pairs {
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            set.insert((i.min(j), i.max(j)));
        }
        Ok(Self(set))
    }

    /// Flip set from edge indices of `g`.
    pub fn from_edges(g: &WeightedGraph, edges: impl IntoIterator<Item = usize>) -> Self {
        Self(
            edges
                .into_iter()
                .map(|k| (g.edge(k).i, g.edge(k).j))
                .collect(),
        )
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn apply_flips<T: Ring>(m: &SymmetricMatrix<T>, flips: &FlipSet) -> Result<SymmetricMatrix<T>> {
    let mut out = m.clone();
    for &(i, j) in flips.pairs() {
        if j >= m.n() {
            return Err(Error::NodeOutOfRange { node: j, n: m.n() });
        }
        let v = m.get(i, j).clone();
        if v.is_zero() {
            return Err(Error::NoSuchEdge(i, j));
        }
        out.set(i, j, -v);
    }
    Ok(out)
}

/// Whether the flip rules guarantee invariance: each flipped link is a
/// bridge, or lies on an isolated cycle that receives an even number of
/// flips.
pub fn is_admissible(g: &WeightedGraph, flips: &FlipSet) -> bool {
    let info = classify(g);
    let bridges = bridge_edges(g);
    let mut per_cycle = vec![0usize; info.cycles.len()];
    for &(i, j) in flips.pairs() {
        let Some(k) = g.edge_index(i, j) else {
            return false;
        };
        if bridges.binary_search(&k).is_ok() {
            continue;
        }
        if info.class != GraphClass::TreesPlusIsolatedCycles {
            return false;
        }
        let c = info
            .cycles
            .iter()
            .position(|c| c.binary_search(&k).is_ok())
            .expect("non-bridge lies on a cycle");
        per_cycle[c] += 1;
    }
    per_cycle.iter().all(|c| c % 2 == 0)
}

/// Coefficients of `det(lambda I - A)`, leading one first.
pub fn characteristic_polynomial(m: &SymmetricMatrix<BigRational>) -> Vec<BigRational> {
    let n = m.n();
    let a = m.rows();
    let mut coeffs = vec![BigRational::from_integer(1.into())];
    let mut acc: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { coeffs[0].clone() } else { BigRational::zero() }).collect())
        .collect();
    for k in 1..=n {
        let am: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |s, t| s + &a[i][t] * &acc[t][j]))
                    .collect()
            })
            .collect();
        let trace = (0..n).fold(BigRational::zero(), |s, i| s + &am[i][i]);
        let c = -trace / BigRational::from_integer((k as i64).into());
        acc = am;
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += &c;
        }
        coeffs.push(c);
    }
    coeffs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    /// Characteristic polynomials compared coefficient by coefficient.
    Exact,
    /// Sorted eigenvalues compared within `1e-9 * ||m||`.
    Float,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsospectralReport {
    pub class: GraphClass,
    pub admissible: bool,
    pub invariant: bool,
    pub mode: SpectrumMode,
    /// Largest coefficient or eigenvalue difference.
    pub max_difference: f64,
}

pub fn check_isospectral(m: &SymmetricMatrix<f64>, flips: &FlipSet, mode: SpectrumMode) -> Result<IsospectralReport> {
    let flipped = apply_flips(m, flips)?;
    let g = m.off_diagonal_graph();
    let class = classify(&g).class;
    let admissible = is_admissible(&g, flips);
    let (invariant, max_difference) = match mode {
        SpectrumMode::Exact => {
            let before = characteristic_polynomial(&m.to_exact());
            let after = characteristic_polynomial(&flipped.to_exact());
            let diff = before
                .iter()
                .zip(&after)
                .map(|(a, b)| (a - b).to_f64().unwrap_or(f64::INFINITY).abs())
                .fold(0.0, f64::max);
            (before == after, diff)
        }
        SpectrumMode::Float => {
            let tol = EIGENVALUE_TOLERANCE * m.row_sum_norm();
            let diff = eigenvalues(m)
                .iter()
                .zip(eigenvalues(&flipped))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            (diff <= tol, diff)
        }
    };
    debug_assert!(
        !admissible || invariant,
        "admissible flip set changed the spectrum: {flips:?}"
    );
    Ok(IsospectralReport {
        class,
        admissible,
        invariant,
        mode,
        max_difference,
    })
}
