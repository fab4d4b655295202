use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest_sums::{phi, PhiMethod, ZeroRowSumMatrix};
use crate::graph::{components, DisjointSets, IndexSubset, WeightedGraph};
use crate::scalar::rational;

/// A node bipartition `(I_1, I_2)` of one component whose crossing links
/// are all negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutWitness {
    pub part_one: Vec<usize>,
    pub part_two: Vec<usize>,
    /// Crossing edge indices `E*`.
    pub crossing: Vec<usize>,
    /// Nodes of `I_1` incident to `E*`.
    pub boundary: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PositiveTree {
    /// A spanning forest of positive links (one tree per component), as
    /// edge indices.
    Spanning { edges: Vec<usize> },
    Cut(CutWitness),
}

impl PositiveTree {
    pub fn is_spanning(&self) -> bool {
        matches!(self, PositiveTree::Spanning { .. })
    }

    pub fn cut(&self) -> Option<&CutWitness> {
        match self {
            PositiveTree::Cut(c) => Some(c),
            PositiveTree::Spanning { .. } => None,
        }
    }
}

/// Positive spanning tree of every component, or a cut witnessing that
/// one component has none.
///
/// The cut takes the smallest connected piece of the positive subgraph
/// inside the first deficient component as `I_1` (ties go to the piece with
/// the smallest node) and the rest of that component as `I_2`.
pub fn positive_spanning_tree(g: &WeightedGraph) -> PositiveTree {
    let n = g.n();
    let mut sets = DisjointSets::new(n);
    let mut tree = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        if e.w > 0.0 && sets.union(e.i, e.j) {
            tree.push(k);
        }
    }
    let comps = components(g);
    for members in &comps.members {
        let root = sets.find(members[0]);
        if members.iter().all(|&v| sets.find(v) == root) {
            continue;
        }
        let mut pieces: Vec<Vec<usize>> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for &v in members {
            let r = sets.find(v);
            match roots.iter().position(|&x| x == r) {
                Some(p) => pieces[p].push(v),
                None => {
                    roots.push(r);
                    pieces.push(vec![v]);
                }
            }
        }
        let part_one = pieces
            .into_iter()
            .min_by_key(|p| (p.len(), p[0]))
            .expect("component has a piece");
        let part_two: Vec<usize> = members
            .iter()
            .copied()
            .filter(|v| part_one.binary_search(v).is_err())
            .collect();
        let (crossing, boundary) = crossing_links(g, &part_one, &part_two);
        return PositiveTree::Cut(CutWitness {
            part_one,
            part_two,
            crossing,
            boundary,
        });
    }
    PositiveTree::Spanning { edges: tree }
}

fn crossing_links(g: &WeightedGraph, one: &[usize], two: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut crossing = Vec::new();
    let mut boundary = BTreeSet::new();
    for &v in one {
        for &(u, k) in g.incident(v) {
            if two.binary_search(&u).is_ok() {
                crossing.push(k);
                boundary.insert(v);
            }
        }
    }
    crossing.sort_unstable();
    (crossing, boundary.into_iter().collect())
}

/// One term `sigma_B * tau_{B u C}` of the cut expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionTerm {
    pub b: Vec<usize>,
    pub sigma: f64,
    pub tau: f64,
}

/// Both sides of the expansion of `Phi_{I_1 \ C}` over the crossing links,
/// plus the alternating sum over all `C` that must vanish.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutExpansionCheck {
    pub c: Vec<usize>,
    /// `(x, sigma_x)`: total crossing weight at each boundary node.
    pub sigma: Vec<(usize, f64)>,
    pub direct: f64,
    pub expanded: f64,
    pub terms: Vec<ExpansionTerm>,
    /// Exact comparison of `direct` and `expanded`.
    pub sides_agree: bool,
    /// `sum_C (-1)^|C| sigma_C Phi_{I_1 \ C}` over all `C` in the boundary.
    pub telescoping: f64,
    pub telescoping_is_zero: bool,
}

const BOUNDARY_LIMIT: usize = 20;

/// Evaluates the cut expansion exactly (rational arithmetic on the given
/// weights) for one subset `c` of the boundary.
pub fn cut_expansion_check(g: &WeightedGraph, cut: &CutWitness, c: &[usize]) -> Result<CutExpansionCheck> {
    validate_cut(g, cut)?;
    let c: BTreeSet<usize> = c.iter().copied().collect();
    if let Some(&bad) = c.iter().find(|v| cut.boundary.binary_search(v).is_err()) {
        return Err(Error::BadSubset(format!("node {bad} is not a boundary node of the cut")));
    }
    if cut.boundary.len() > BOUNDARY_LIMIT {
        return Err(Error::TooLarge {
            what: "cut boundary",
            size: cut.boundary.len() as u128,
            limit: BOUNDARY_LIMIT as u128,
        });
    }
    let full = ZeroRowSumMatrix::new(g.clone());
    let (inner_graph, _) = g.induced(&cut.part_one);
    let inner = ZeroRowSumMatrix::new(inner_graph);
    let local = |v: usize| cut.part_one.binary_search(&v).expect("node of I_1");

    let sigma: Vec<BigRational> = cut
        .boundary
        .iter()
        .map(|&x| {
            g.incident(x)
                .iter()
                .filter(|(_, k)| cut.crossing.binary_search(k).is_ok())
                .fold(BigRational::zero(), |acc, &(_, k)| acc + rational(g.edge(k).w))
        })
        .collect();
    let sigma_of = |mask: usize| -> BigRational {
        (0..cut.boundary.len())
            .filter(|b| mask >> b & 1 == 1)
            .fold(BigRational::one(), |acc, b| acc * sigma[b].clone())
    };
    let mask_of = |set: &BTreeSet<usize>| -> usize {
        cut.boundary
            .iter()
            .enumerate()
            .filter(|(_, x)| set.contains(x))
            .fold(0, |m, (b, _)| m | 1 << b)
    };
    let nodes_of = |mask: usize| -> Vec<usize> {
        (0..cut.boundary.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| cut.boundary[b])
            .collect()
    };
    // Phi on the full graph for S = I_1 \ C
    let phi_outer = |mask: usize| -> Result<BigRational> {
        let removed = nodes_of(mask);
        let s: Vec<usize> = cut
            .part_one
            .iter()
            .copied()
            .filter(|v| !removed.contains(v))
            .collect();
        if s.is_empty() {
            return Ok(BigRational::one());
        }
        Ok(phi::<BigRational>(&full, &IndexSubset::new(s, g.n())?, PhiMethod::Determinant)?.value)
    };
    // Phi on G[I_1] for S = I_1 \ Y
    let tau = |mask: usize| -> Result<BigRational> {
        let removed = nodes_of(mask);
        let s: Vec<usize> = cut
            .part_one
            .iter()
            .copied()
            .filter(|v| !removed.contains(v))
            .map(local)
            .collect();
        if s.is_empty() {
            return Ok(BigRational::one());
        }
        Ok(phi::<BigRational>(&inner, &IndexSubset::new(s, inner.n())?, PhiMethod::Determinant)?.value)
    };

    let c_mask = mask_of(&c);
    let all = (1usize << cut.boundary.len()) - 1;
    let direct = phi_outer(c_mask)?;
    let free = all & !c_mask;
    let mut expanded = BigRational::zero();
    let mut terms = Vec::new();
    let mut b = free;
    loop {
        let s = sigma_of(b);
        let t = tau(b | c_mask)?;
        expanded += s.clone() * t.clone();
        terms.push(ExpansionTerm {
            b: nodes_of(b),
            sigma: to_f64(&s),
            tau: to_f64(&t),
        });
        if b == 0 {
            break;
        }
        b = (b - 1) & free;
    }
    terms.reverse();

    let mut telescoping = BigRational::zero();
    for mask in 0..=all {
        let term = sigma_of(mask) * phi_outer(mask)?;
        if mask.count_ones() % 2 == 0 {
            telescoping += term;
        } else {
            telescoping -= term;
        }
    }

    Ok(CutExpansionCheck {
        c: c.into_iter().collect(),
        sigma: cut
            .boundary
            .iter()
            .zip(&sigma)
            .map(|(&x, s)| (x, to_f64(s)))
            .collect(),
        direct: to_f64(&direct),
        expanded: to_f64(&expanded),
        terms,
        sides_agree: direct == expanded,
        telescoping: to_f64(&telescoping),
        telescoping_is_zero: telescoping.is_zero(),
    })
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn validate_cut(g: &WeightedGraph, cut: &CutWitness) -> Result<()> {
    let invalid = |msg: String| Err(Error::InvalidCut(msg));
    if cut.part_one.is_empty() || cut.part_two.is_empty() {
        return invalid("both sides must be nonempty".into());
    }
    for part in [&cut.part_one, &cut.part_two] {
        if part.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("node lists must be strictly increasing".into());
        }
        if let Some(&v) = part.iter().find(|&&v| v >= g.n()) {
            return invalid(format!("node {v} out of range"));
        }
    }
    if let Some(v) = cut.part_one.iter().find(|v| cut.part_two.binary_search(v).is_ok()) {
        return invalid(format!("node {v} is on both sides"));
    }
    for &v in &cut.part_one {
        for &(u, k) in g.incident(v) {
            if cut.part_one.binary_search(&u).is_ok() {
                continue;
            }
            if cut.part_two.binary_search(&u).is_err() {
                return invalid(format!("link {v}-{u} leaves I_1 outside I_2"));
            }
            if g.edge(k).w > 0.0 {
                return invalid(format!("crossing link {v}-{u} is positive"));
            }
        }
    }
    let (crossing, boundary) = crossing_links(g, &cut.part_one, &cut.part_two);
    if crossing != cut.crossing || boundary != cut.boundary {
        return invalid("crossing links or boundary do not match the bipartition".into());
    }
    Ok(())
}

/// `1_{I_1}^T J 1_{I_1}` for the zero-row-sum matrix: minus the crossing
/// weight, positive for a nonempty negative cut.
pub fn cut_rayleigh_quotient(g: &WeightedGraph, cut: &CutWitness) -> f64 {
    -cut.crossing.iter().map(|&k| g.edge(k).w).sum::<f64>() / cut.part_one.len() as f64
}

#[cfg(test)]
fn is_negative_cut(g: &WeightedGraph, cut: &CutWitness) -> bool {
    use num_traits::Signed;
    !cut.crossing.is_empty()
        && cut
            .crossing
            .iter()
            .all(|&k| rational(g.edge(k).w).is_negative())
}
