//! Enumeration of the rooted forests that make up a zero-row-sum minor.
//!
//! For a node subset `S`, the relevant forests have exactly `|S|` links and
//! can be characterized two ways:
//!
//! * every tree contains exactly one node outside `S` (rooted form), or
//! * the links can be oriented so that each starts at a different node of
//!   `S` (orientation form).
//!
//! [`enumerate_forests`] searches the rooted form with pruning;
//! [`enumerate_forests_by_orientation`] scans all `|S|`-edge subsets and
//! tests orientability with a bipartite matching. Both are exponential and
//! guarded by a cap.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::{DisjointSets, IndexSubset, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::bareiss_determinant;

pub const DEFAULT_FOREST_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Forest {
    /// Edge indices, increasing.
    pub edges: Vec<usize>,
    /// Tree index for every node the forest touches or that lies in `S`.
    pub tree_of: BTreeMap<usize, usize>,
}

impl Forest {
    fn from_edges(g: &WeightedGraph, s: &IndexSubset, mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        let mut sets = DisjointSets::new(g.n());
        for &k in &edges {
            let e = g.edge(k);
            sets.union(e.i, e.j);
        }
        let mut nodes: Vec<usize> = s.members().to_vec();
        for &k in &edges {
            nodes.push(g.edge(k).i);
            nodes.push(g.edge(k).j);
        }
        nodes.sort_unstable();
        nodes.dedup();
        let mut tree_ids = BTreeMap::new();
        let mut tree_of = BTreeMap::new();
        for v in nodes {
            let root = sets.find(v);
            let next = tree_ids.len();
            let id = *tree_ids.entry(root).or_insert(next);
            tree_of.insert(v, id);
        }
        Self { edges, tree_of }
    }

    pub fn tree_count(&self) -> usize {
        self.tree_of.values().max().map_or(0, |m| m + 1)
    }

    /// Product of the link weights.
    pub fn weight(&self, g: &WeightedGraph) -> f64 {
        self.edges.iter().map(|&k| g.edge(k).w).product()
    }
}

fn check_subset(g: &WeightedGraph, s: &IndexSubset) -> Result<()> {
    match s.members().last() {
        Some(&v) if v >= g.n() => Err(Error::SubsetOutOfRange { index: v, n: g.n() }),
        _ => Ok(()),
    }
}

/// Edges with at least one endpoint in `S`; no other edge can appear.
fn candidate_edges(g: &WeightedGraph, in_s: &[bool]) -> Vec<usize> {
    (0..g.edge_count())
        .filter(|&k| in_s[g.edge(k).i] || in_s[g.edge(k).j])
        .collect()
}

/// Exact number of rooted forests for `S`, ignoring weights.
///
/// This is the minor of the unit-weight Laplacian on `S`, evaluated with
/// fraction-free elimination.
pub fn count_forests(g: &WeightedGraph, s: &IndexSubset) -> Result<u128> {
    check_subset(g, s)?;
    let members = s.members();
    let rows: Vec<Vec<BigInt>> = members
        .iter()
        .map(|&a| {
            members
                .iter()
                .map(|&b| {
                    if a == b {
                        BigInt::from(g.degree(a))
                    } else if g.edge_index(a, b).is_some() {
                        BigInt::from(-1)
                    } else {
                        BigInt::from(0)
                    }
                })
                .collect()
        })
        .collect();
    let count = bareiss_determinant(rows);
    debug_assert!(!count.is_negative());
    Ok(count.to_u128().unwrap_or(u128::MAX))
}

pub fn enumerate_forests(g: &WeightedGraph, s: &IndexSubset) -> Result<Vec<Forest>> {
    enumerate_forests_capped(g, s, DEFAULT_FOREST_CAP)
}

/// Rooted-form enumeration; refuses with `TooLarge` when the forest count
/// exceeds `cap`.
pub fn enumerate_forests_capped(
    g: &WeightedGraph,
    s: &IndexSubset,
    cap: u128,
) -> Result<Vec<Forest>> {
    check_subset(g, s)?;
    let projected = count_forests(g, s)?;
    if projected > cap {
        return Err(Error::TooLarge {
            what: "forest enumeration",
            size: projected,
            limit: cap,
        });
    }
    let in_s = s.mask(g.n());
    let mut search = RootedSearch {
        g,
        candidates: candidate_edges(g, &in_s),
        parent: (0..g.n()).collect(),
        size: vec![1; g.n()],
        has_root: in_s.iter().map(|&inside| !inside).collect(),
        undo: Vec::new(),
        chosen: Vec::new(),
        target: s.order(),
        found: Vec::new(),
    };
    search.run(0);
    let mut forests: Vec<Forest> = search
        .found
        .into_iter()
        .map(|edges| Forest::from_edges(g, s, edges))
        .collect();
    forests.sort();
    debug_assert_eq!(forests.len() as u128, projected);
    Ok(forests)
}

struct RootedSearch<'a> {
    g: &'a WeightedGraph,
    candidates: Vec<usize>,
    parent: Vec<usize>,
    size: Vec<usize>,
    // tree already holds its single node outside S
    has_root: Vec<bool>,
    undo: Vec<(usize, usize, bool)>,
    chosen: Vec<usize>,
    target: usize,
    found: Vec<Vec<usize>>,
}

impl RootedSearch<'_> {
    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn run(&mut self, pos: usize) {
        if self.chosen.len() == self.target {
            self.found.push(self.chosen.clone());
            return;
        }
        if self.candidates.len() - pos < self.target - self.chosen.len() {
            return;
        }
        let k = self.candidates[pos];
        let e = *self.g.edge(k);
        let (a, b) = (self.find(e.i), self.find(e.j));
        if a != b && !(self.has_root[a] && self.has_root[b]) {
            let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
            self.undo.push((small, big, self.has_root[big]));
            self.parent[small] = big;
            self.size[big] += self.size[small];
            self.has_root[big] |= self.has_root[small];
            self.chosen.push(k);
            self.run(pos + 1);
            self.chosen.pop();
            let (small, big, had) = self.undo.pop().expect("undo entry");
            self.parent[small] = small;
            self.size[big] -= self.size[small];
            self.has_root[big] = had;
        }
        self.run(pos + 1);
    }
}

/// Orientation-form enumeration over all `|S|`-subsets of candidate edges.
pub fn enumerate_forests_by_orientation(
    g: &WeightedGraph,
    s: &IndexSubset,
) -> Result<Vec<Forest>> {
    check_subset(g, s)?;
    let in_s = s.mask(g.n());
    let candidates = candidate_edges(g, &in_s);
    let q = s.order();
    let subsets = binomial(candidates.len() as u128, q as u128);
    if subsets > DEFAULT_FOREST_CAP {
        return Err(Error::TooLarge {
            what: "edge-subset scan",
            size: subsets,
            limit: DEFAULT_FOREST_CAP,
        });
    }
    let mut out = Vec::new();
    if q > candidates.len() {
        return Ok(out);
    }
    let mut pick: Vec<usize> = (0..q).collect();
    loop {
        let edges: Vec<usize> = pick.iter().map(|&p| candidates[p]).collect();
        if is_acyclic(g, &edges) && orientable(g, s, &edges) {
            out.push(Forest::from_edges(g, s, edges));
        }
        let mut k = q;
        while k > 0 && pick[k - 1] == candidates.len() - q + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        pick[k - 1] += 1;
        for t in k..q {
            pick[t] = pick[t - 1] + 1;
        }
    }
    out.sort();
    Ok(out)
}

fn is_acyclic(g: &WeightedGraph, edges: &[usize]) -> bool {
    let mut sets = DisjointSets::new(g.n());
    edges.iter().all(|&k| sets.union(g.edge(k).i, g.edge(k).j))
}

/// Perfect matching of edges to distinct start nodes in `S` (Kuhn's
/// augmenting paths).
fn orientable(g: &WeightedGraph, s: &IndexSubset, edges: &[usize]) -> bool {
    let members = s.members();
    let slot = |v: usize| members.binary_search(&v).ok();
    let options: Vec<Vec<usize>> = edges
        .iter()
        .map(|&k| {
            let e = g.edge(k);
            [slot(e.i), slot(e.j)].into_iter().flatten().collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; members.len()];

    fn augment(
        edge: usize,
        options: &[Vec<usize>],
        owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &node in &options[edge] {
            if visited[node] {
                continue;
            }
            visited[node] = true;
            if owner[node].is_none_or(|other| augment(other, options, owner, visited)) {
                owner[node] = Some(edge);
                return true;
            }
        }
        false
    }

    (0..edges.len()).all(|edge| {
        let mut visited = vec![false; members.len()];
        augment(edge, &options, &mut owner, &mut visited)
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc.saturating_mul(n - t) / (t + 1);
    }
    acc
}
