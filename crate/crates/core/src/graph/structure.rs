use super::WeightedGraph;

/// Partition of the nodes into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component id per node.
    pub of_node: Vec<usize>,
    /// Sorted member lists, ordered by smallest member.
    pub members: Vec<Vec<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn is_connected(&self) -> bool {
        self.members.len() <= 1
    }
}

pub fn components(g: &WeightedGraph) -> Components {
    let n = g.n();
    let mut of_node = vec![usize::MAX; n];
    let mut members = Vec::new();
    let mut stack = Vec::new();
    for root in 0..n {
        if of_node[root] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut list = vec![root];
        of_node[root] = id;
        stack.push(root);
        while let Some(v) = stack.pop() {
            for &(u, _) in g.incident(v) {
                if of_node[u] == usize::MAX {
                    of_node[u] = id;
                    list.push(u);
                    stack.push(u);
                }
            }
        }
        list.sort_unstable();
        members.push(list);
    }
    Components { of_node, members }
}

/// Indices of edges lying on no cycle, in increasing order.
///
/// Iterative low-link DFS; `low[v]` is the smallest discovery time
/// reachable from the subtree of `v` without reusing the tree edge into `v`.
pub fn bridge_edges(g: &WeightedGraph) -> Vec<usize> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut bridges = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (node, edge used to enter it, next incident position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, parent_edge, ref mut pos)) = stack.last_mut() {
            if let Some(&(u, k)) = g.incident(v).get(*pos) {
                *pos += 1;
                if k == parent_edge {
                    continue;
                }
                if disc[u] == usize::MAX {
                    disc[u] = timer;
                    low[u] = timer;
                    timer += 1;
                    stack.push((u, k, 0));
                } else {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridges.push(parent_edge);
                    }
                }
            }
        }
    }
    bridges.sort_unstable();
    bridges
}
