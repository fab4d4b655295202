//! Weighted undirected graphs and the combinatorial primitives built on them.
//!
//! A [`WeightedGraph`] is the off-diagonal part of a symmetric Jacobian:
//! node `i` and node `j` are linked iff `J[i][j] != 0`, and the link carries
//! that entry as its weight.

mod forests;
mod segments;
mod structure;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use forests::{
    count_forests, enumerate_forests, enumerate_forests_by_orientation, enumerate_forests_capped,
    Forest, DEFAULT_FOREST_CAP,
};
pub use segments::{unbranched_segments, UnbranchedSegment};
pub use structure::{bridge_edges, components, Components};

/// Relative asymmetry tolerated when a graph is read from a matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.i {
            self.j
        } else {
            self.i
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.i == v || self.j == v
    }
}

/// Symmetric weighted graph without self-loops or parallel edges.
///
/// Edges are stored once, with `i < j`, sorted by `(i, j)`. A weight of zero
/// means "no edge"; such entries are dropped on construction.
#[derive(Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
    // (neighbor, edge index), sorted by neighbor
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedGraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl WeightedGraph {
    /// Builds a graph from `(i, j, w)` triples. Pairs may be given in either
    /// orientation; zero weights are skipped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut seen = BTreeSet::new();
        let mut stored = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::NodeOutOfRange { node: a.max(b), n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite(w));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((i, j)) {
                return Err(Error::DuplicateEdge(i, j));
            }
            if w != 0.0 {
                stored.push(Edge { i, j, w });
            }
        }
        stored.sort_by_key(|e| (e.i, e.j));
        Ok(Self::from_sorted(n, stored))
    }

    /// Reads the off-diagonal part of a square matrix. The diagonal is
    /// ignored. Entries must be symmetric up to
    /// `SYMMETRY_TOLERANCE * max|M|`; accepted pairs are averaged.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let m = crate::matrix::SymmetricMatrix::<f64>::from_rows(rows)?;
        Ok(m.off_diagonal_graph())
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            adjacency[e.i].push((e.j, k));
            adjacency[e.j].push((e.i, k));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            n,
            edges,
            labels: None,
            adjacency,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    /// Incident `(neighbor, edge index)` pairs of `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.n {
            return None;
        }
        self.adjacency[a]
            .binary_search_by_key(&b, |&(nb, _)| nb)
            .ok()
            .map(|pos| self.adjacency[a][pos].1)
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        self.edge_index(a, b).map(|k| self.edges[k].w)
    }

    pub fn all_weights_nonnegative(&self) -> bool {
        self.edges.iter().all(|e| e.w >= 0.0)
    }

    /// Same topology, weights replaced by `f(edge index, edge)`. Edges whose
    /// new weight is zero disappear.
    pub fn map_weights(&self, mut f: impl FnMut(usize, &Edge) -> f64) -> Result<Self> {
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| (e.i, e.j, f(k, e)))
            .collect();
        let mut g = Self::from_edges(self.n, edges)?;
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Subgraph induced by `nodes`, relabeled `0..nodes.len()` in the given
    /// order. Returns the graph and, per new edge, the index of the original.
    pub fn induced(&self, nodes: &[usize]) -> (WeightedGraph, Vec<usize>) {
        let mut position = vec![usize::MAX; self.n];
        for (p, &v) in nodes.iter().enumerate() {
            position[v] = p;
        }
        let mut picked: Vec<(Edge, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| position[e.i] != usize::MAX && position[e.j] != usize::MAX)
            .map(|(k, e)| {
                let (a, b) = (position[e.i], position[e.j]);
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                (Edge { i, j, w: e.w }, k)
            })
            .collect();
        picked.sort_by_key(|(e, _)| (e.i, e.j));
        let origin = picked.iter().map(|(_, k)| *k).collect();
        let edges = picked.into_iter().map(|(e, _)| e).collect();
        (Self::from_sorted(nodes.len(), edges), origin)
    }

    /// Dense weight matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for e in &self.edges {
            m[e.i][e.j] = e.w;
            m[e.j][e.i] = e.w;
        }
        m
    }

    /// Renders the graph in the whitespace edge-list format
    /// (`i j w` per line, 0-based).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n = {}\n", self.n);
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.i, e.j, e.w));
        }
        out
    }

    /// Parses the edge-list format. Blank lines and `#` comments are
    /// skipped; a `# n = <count>` comment fixes the node count, otherwise it
    /// is one past the largest index (or `n` if given).
    pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut declared = n;
        let mut triples = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(rest) = comment.trim().strip_prefix("n") {
                    if let Some(value) = rest.trim().strip_prefix('=') {
                        if declared.is_none() {
                            declared = Some(value.trim().parse().map_err(|_| {
                                Error::Parse(format!("line {}: bad node count", lineno + 1))
                            })?);
                        }
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected `i j w`, got {:?}",
                    lineno + 1,
                    line
                )));
            }
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", lineno + 1));
            let i: usize = fields[0].parse().map_err(|_| bad("node index"))?;
            let j: usize = fields[1].parse().map_err(|_| bad("node index"))?;
            let w: f64 = fields[2].parse().map_err(|_| bad("weight"))?;
            triples.push((i, j, w));
        }
        let n = declared.unwrap_or_else(|| {
            triples
                .iter()
                .map(|&(i, j, _)| i.max(j) + 1)
                .max()
                .unwrap_or(0)
        });
        Self::from_edges(n, triples)
    }
}

/// Sorted, duplicate-free, nonempty set of node indices selecting a
/// principal submatrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexSubset {
    members: Vec<usize>,
}

impl IndexSubset {
    /// Validates `members` against dimension `n`. Order of input is
    /// irrelevant; duplicates are rejected.
    pub fn new(members: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::EmptySubset);
        }
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex(w[0]));
            }
        }
        if let Some(&last) = members.last() {
            if last >= n {
                return Err(Error::SubsetOutOfRange { index: last, n });
            }
        }
        Ok(Self { members })
    }

    /// `{0, 1, ..., q-1}`.
    pub fn leading(q: usize, n: usize) -> Result<Self> {
        Self::new(0..q, n)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            if v < n {
                mask[v] = true;
            }
        }
        mask
    }

    /// All nonempty subsets of `0..n` with at most `max_order` members, by
    /// order, then lexicographically.
    pub fn all(n: usize, max_order: usize) -> Vec<IndexSubset> {
        let mut out = Vec::new();
        for q in 1..=max_order.min(n) {
            let mut combo: Vec<usize> = (0..q).collect();
            loop {
                out.push(IndexSubset {
                    members: combo.clone(),
                });
                // next combination in lexicographic order
                let mut k = q;
                while k > 0 && combo[k - 1] == n - q + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                combo[k - 1] += 1;
                for t in k..q {
                    combo[t] = combo[t - 1] + 1;
                }
            }
        }
        out
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Small union-find used by the forest and spanning-tree routines.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig2;

    #[test]
    fn triangle_from_all_ones_matrix() {
        let rows = vec![vec![1.0; 3]; 3];
        let g = WeightedGraph::from_matrix(&rows).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().iter().all(|e| e.w == 1.0 && e.i < e.j));
    }

    #[test]
    fn fig2_matrix_gives_fig2_graph() {
        let mut rows = vec![vec![0.0; 6]; 6];
        for &(i, j) in &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5)] {
            rows[i][j] = 1.0;
            rows[j][i] = 1.0;
        }
        for i in 0..6 {
            rows[i][i] = -rows[i].iter().sum::<f64>();
        }
        let g = WeightedGraph::from_matrix(&rows).unwrap();
        assert_eq!(g, fig2());
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let rows = vec![vec![0.0, 1.0], vec![1.1, 0.0]];
        assert!(matches!(
            WeightedGraph::from_matrix(&rows),
            Err(Error::AsymmetricInput { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_averaged() {
        let rows = vec![vec![0.0, 1.0], vec![1.0 + 1e-14, 0.0]];
        let g = WeightedGraph::from_matrix(&rows).unwrap();
        assert!((g.weight(0, 1).unwrap() - (1.0 + 0.5e-14)).abs() < 1e-15);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            WeightedGraph::from_edges(3, [(1, 1, 1.0)]).unwrap_err(),
            Error::SelfLoop(1)
        );
        assert_eq!(
            WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 0, 2.0)]).unwrap_err(),
            Error::DuplicateEdge(0, 1)
        );
        assert!(matches!(
            WeightedGraph::from_edges(2, [(0, 2, 1.0)]),
            Err(Error::NodeOutOfRange { node: 2, n: 2 })
        ));
    }

    #[test]
    fn zero_weight_means_absent() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 0.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), None);
        assert_eq!(g.weight(2, 1), Some(2.0));
    }

    #[test]
    fn edge_list_text_round_trip() {
        let g = fig2().map_weights(|k, _| k as f64 - 2.5).unwrap();
        let text = g.to_edge_list();
        assert_eq!(WeightedGraph::parse_edge_list(&text, None).unwrap(), g);
        let isolated = WeightedGraph::parse_edge_list("# n = 4\n0 1 1.5\n", None).unwrap();
        assert_eq!(isolated.n(), 4);
        assert!(WeightedGraph::parse_edge_list("0 1\n", None).is_err());
    }

    #[test]
    fn subsets() {
        assert_eq!(IndexSubset::new([2, 0], 3).unwrap().members(), &[0, 2]);
        assert_eq!(IndexSubset::new([], 3).unwrap_err(), Error::EmptySubset);
        assert_eq!(
            IndexSubset::new([1, 1], 3).unwrap_err(),
            Error::DuplicateIndex(1)
        );
        assert_eq!(
            IndexSubset::new([3], 3).unwrap_err(),
            Error::SubsetOutOfRange { index: 3, n: 3 }
        );
        let all = IndexSubset::all(4, 4);
        assert_eq!(all.len(), 15);
        assert_eq!(all[4].members(), &[0, 1]);
        assert_eq!(all.last().unwrap().members(), &[0, 1, 2, 3]);
        assert_eq!(IndexSubset::all(5, 2).len(), 15);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let (sub, origin) = fig2().induced(&[2, 3, 4]);
        assert_eq!(sub.n(), 3);
        let pairs: Vec<_> = sub.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
        assert_eq!(origin, vec![3, 4]);
    }
}
