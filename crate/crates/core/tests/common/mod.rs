//! Brute-force oracles and generators shared by the integration tests.
//!
//! Nothing here calls into the library's own elimination or enumeration
//! code: determinants are Leibniz sums over `i128`, forest sums come from
//! scanning every edge subset, trees from Prüfer codes.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabigraph::WeightedGraph;

pub fn rng(tag: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(tag.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ case)
}

pub fn nonzero(rng: &mut impl Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let v = rng.gen_range(lo..=hi);
        if v != 0 {
            return v;
        }
    }
}

/// Random spanning tree plus extra links with probability `extra`.
pub fn connected_edges(
    rng: &mut impl Rng,
    n: usize,
    extra: f64,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> i64,
) -> Vec<(usize, usize, i64)> {
    let mut inner = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for k in 1..n {
        let (a, b) = (order[k], order[rng.gen_range(0..k)]);
        present[a][b] = true;
        present[b][a] = true;
        edges.push((a.min(b), a.max(b), weight(&mut inner)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !present[i][j] && rng.gen_bool(extra) {
                edges.push((i, j, weight(&mut inner)));
            }
        }
    }
    edges
}

pub fn graph(n: usize, edges: &[(usize, usize, i64)]) -> WeightedGraph {
    WeightedGraph::from_edges(n, edges.iter().map(|&(i, j, w)| (i, j, w as f64))).unwrap()
}

/// Zero-row-sum matrix with integer entries.
pub fn laplacian_like(n: usize, edges: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for &(i, j, w) in edges {
        m[i][j] += w;
        m[j][i] += w;
        m[i][i] -= w;
        m[j][j] -= w;
    }
    m
}

/// Determinant of `m[rows][rows]` by the Leibniz formula.
pub fn leibniz(m: &[Vec<i64>], rows: &[usize]) -> i128 {
    let q = rows.len();
    let mut perm: Vec<usize> = (0..q).collect();
    let mut total = 0i128;
    permute(&mut perm, 0, &mut |p| {
        let mut sign = 1i128;
        let mut seen = vec![false; q];
        for start in 0..q {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = p[k];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        let prod: i128 = (0..q).map(|i| m[rows[i]][rows[p[i]]] as i128).product();
        total += sign * prod;
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Sum of weight products over all `|S|`-edge subsets that are forests in
/// which every tree holds exactly one node outside `S`.
pub fn forest_sum(n: usize, edges: &[(usize, usize, i64)], s: &[usize]) -> i128 {
    let mut total = 0i128;
    let mut pick = Vec::with_capacity(s.len());
    choose(edges.len(), s.len(), 0, &mut pick, &mut |pick| {
        if let Some(w) = rooted_forest_weight(n, edges, s, pick) {
            total += w;
        }
    });
    total
}

fn choose(m: usize, q: usize, from: usize, pick: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if pick.len() == q {
        f(pick);
        return;
    }
    for k in from..m {
        if m - k < q - pick.len() {
            break;
        }
        pick.push(k);
        choose(m, q, k + 1, pick, f);
        pick.pop();
    }
}

fn rooted_forest_weight(n: usize, edges: &[(usize, usize, i64)], s: &[usize], pick: &[usize]) -> Option<i128> {
    let mut parent: Vec<usize> = (0..n).collect();
    for &k in pick {
        let (a, b) = (find(&mut parent, edges[k].0), find(&mut parent, edges[k].1));
        if a == b {
            return None;
        }
        parent[a] = b;
    }
    let mut outside = vec![0usize; n];
    for v in (0..n).filter(|v| !s.contains(v)) {
        outside[find(&mut parent, v)] += 1;
    }
    let one_root_each = (0..n).all(|v| find(&mut parent, v) != v || outside[v] == 1);
    one_root_each.then(|| pick.iter().map(|&k| edges[k].2 as i128).product())
}

/// All subsets of `0..n`, as sorted vectors.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (0..n).filter(|v| mask >> v & 1 == 1).collect())
        .collect()
}

/// Every labeled tree on `n` nodes, from Prüfer codes.
pub fn labeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    match n {
        0 | 1 => return vec![Vec::new()],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let mut out = Vec::new();
    let count = n.pow(n as u32 - 2);
    for code_id in 0..count {
        let mut code = Vec::with_capacity(n - 2);
        let mut c = code_id;
        for _ in 0..n - 2 {
            code.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &v in &code {
            degree[v] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &v in &code {
            let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
            edges.push((leaf.min(v), leaf.max(v)));
            degree[leaf] -= 1;
            degree[v] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

/// Does some set of positive links connect every component of the graph?
/// Checked without the library: union over positive links only.
pub fn has_positive_spanning_forest(n: usize, edges: &[(usize, usize, i64)]) -> bool {
    let mut all: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    for &(i, j, w) in edges {
        let (a, b) = (find(&mut all, i), find(&mut all, j));
        all[a] = b;
        if w > 0 {
            let (a, b) = (find(&mut pos, i), find(&mut pos, j));
            pos[a] = b;
        }
    }
    (0..n).all(|u| (0..n).all(|v| find(&mut all, u) != find(&mut all, v) || find(&mut pos, u) == find(&mut pos, v)))
}

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}  {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Proptest strategy: `(n, edges)` with each pair linked with probability
/// about `density` and nonzero integer weights in `lo..=hi`.
pub fn arb_graph(
    min_n: usize,
    max_n: usize,
    lo: i64,
    hi: i64,
) -> impl proptest::strategy::Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
    use proptest::prelude::*;
    (min_n..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let weight = prop_oneof![
            2 => Just(0i64),
            3 => (lo..=hi).prop_filter("nonzero", |w| *w != 0),
        ];
        proptest::collection::vec(weight, pairs.len()).prop_map(move |ws| {
            let edges = pairs
                .iter()
                .zip(ws)
                .filter(|(_, w)| *w != 0)
                .map(|(&(i, j), w)| (i, j, w))
                .collect();
            (n, edges)
        })
    })
}

/// Proptest strategy for connected graphs: a seeded random tree plus extras.
pub fn arb_connected(
    min_n: usize,
    max_n: usize,
    lo: i64,
    hi: i64,
) -> impl proptest::strategy::Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
    use proptest::prelude::*;
    (min_n..=max_n, any::<u64>(), 0.0..0.6f64).prop_map(move |(n, seed, extra)| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let edges = connected_edges(&mut r, n, extra, |r| nonzero(r, lo, hi));
        (n, edges)
    })
}
