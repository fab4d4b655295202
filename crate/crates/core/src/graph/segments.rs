use serde::Serialize;

use super::{bridge_edges, WeightedGraph};

/// Maximal path whose interior nodes all have degree two.
///
/// `nodes` runs `v_0, v_1, ..., v_d`: the interior nodes `v_1..v_{d-1}`
/// are flanked by two endpoints of degree other than two. Link `c_k`
/// (`links[k-1]`) joins `v_{k-1}` and `v_k`, so interior node `v_k` touches
/// `c_k` and `c_{k+1}`.
///
/// A component that is a bare cycle has no such endpoint; it is reported
/// once, anchored at its smallest node, with `v_0 == v_d` and `closed` set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnbranchedSegment {
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    pub weights: Vec<f64>,
    pub on_cycle: bool,
    pub closed: bool,
}

impl UnbranchedSegment {
    /// Number of links `d`.
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn interior(&self) -> &[usize] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    pub fn negative_positions(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w < 0.0)
            .map(|(k, _)| k)
            .collect()
    }

    /// The same segment traversed from the other end.
    pub fn reversed(&self) -> Self {
        let mut s = self.clone();
        s.nodes.reverse();
        s.links.reverse();
        s.weights.reverse();
        s
    }
}

pub fn unbranched_segments(g: &WeightedGraph) -> Vec<UnbranchedSegment> {
    let bridges = bridge_edges(g);
    let mut used = vec![false; g.edge_count()];
    let mut out = Vec::new();

    let walk = |start: usize, first_edge: usize, used: &mut Vec<bool>| {
        let mut nodes = vec![start];
        let mut links = Vec::new();
        let mut cur = start;
        let mut k = first_edge;
        loop {
            used[k] = true;
            links.push(k);
            let next = g.edge(k).other(cur);
            nodes.push(next);
            if g.degree(next) != 2 || next == start {
                break;
            }
            let (_, k2) = *g
                .incident(next)
                .iter()
                .find(|&&(_, e)| e != k)
                .expect("degree-two node has a second link");
            cur = next;
            k = k2;
        }
        let weights = links.iter().map(|&e| g.edge(e).w).collect();
        let on_cycle = bridges.binary_search(&links[0]).is_err();
        let closed = nodes.first() == nodes.last();
        UnbranchedSegment {
            nodes,
            links,
            weights,
            on_cycle,
            closed,
        }
    };

    for v in 0..g.n() {
        if g.degree(v) == 2 {
            continue;
        }
        for &(_, k) in g.incident(v) {
            if !used[k] {
                let mut seg = walk(v, k, &mut used);
                // a loop back to a branch node is not a bare cycle
                seg.closed = false;
                out.push(seg);
            }
        }
    }
    // what remains are components that are bare cycles
    for v in 0..g.n() {
        if let Some(&(_, k)) = g.incident(v).iter().find(|&&(_, e)| !used[e]) {
            out.push(walk(v, k, &mut used));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cycle, fig2};

    #[test]
    fn bare_cycle_is_one_closed_segment() {
        let segs = unbranched_segments(&cycle(&[1.0; 5]));
        assert_eq!(segs.len(), 1);
        let s = &segs[0];
        assert_eq!(s.len(), 5);
        assert!(s.closed && s.on_cycle);
        assert_eq!(s.nodes, vec![0, 1, 2, 3, 4, 0]);
        assert_eq!(s.interior(), &[1, 2, 3, 4]);
    }

    #[test]
    fn fig2_segments() {
        let g = fig2();
        let segs = unbranched_segments(&g);
        assert_eq!(segs.len(), 2);
        let tail = segs.iter().find(|s| !s.on_cycle).unwrap();
        assert_eq!(tail.nodes, vec![2, 3, 4, 5]);
        assert_eq!(tail.interior(), &[3, 4]);
        let ring = segs.iter().find(|s| s.on_cycle).unwrap();
        assert_eq!(ring.nodes, vec![2, 0, 1, 2]);
        assert_eq!(ring.len(), 3);
        assert!(!ring.closed);
    }

    #[test]
    fn triangle_with_pendant() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0)])
            .unwrap();
        let segs = unbranched_segments(&g);
        assert_eq!(segs.len(), 2);
        let on: Vec<_> = segs.iter().filter(|s| s.on_cycle).collect();
        assert_eq!(on.len(), 1);
        assert_eq!(on[0].len(), 3);
        let off: Vec<_> = segs.iter().filter(|s| !s.on_cycle).collect();
        assert_eq!(off[0].len(), 1);
        assert!(off[0].interior().is_empty());
    }

    #[test]
    fn single_links_between_branch_nodes_are_segments() {
        // K4: every node has degree 3, so each edge is its own segment
        let edges: Vec<_> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0)))
            .collect();
        let g = WeightedGraph::from_edges(4, edges).unwrap();
        let segs = unbranched_segments(&g);
        assert_eq!(segs.len(), 6);
        assert!(segs.iter().all(|s| s.len() == 1 && s.on_cycle));
    }
}
