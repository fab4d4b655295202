//! Zero-row-sum matrices and their forest sums.
//!
//! When `J_ii = -sum_{j != i} J_ij`, the principal minor on `S` satisfies
//! `D_S = (-1)^|S| Phi_S`, where `Phi_S` sums the weights of the rooted
//! forests of `S` (see [`crate::graph::enumerate_forests`]). For `|S| = n-1`
//! on a connected graph, `Phi_S` is the weighted spanning-tree sum.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    components, enumerate_forests_capped, Edge, IndexSubset, WeightedGraph, DEFAULT_FOREST_CAP,
};
use crate::matrix::SymmetricMatrix;
use crate::scalar::{Ring, Scalar};

/// Symmetric matrix whose diagonal is derived from the graph so that every
/// row sums to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroRowSumMatrix {
    graph: WeightedGraph,
    matrix: SymmetricMatrix<f64>,
}

pub fn zero_row_sum_matrix(g: &WeightedGraph) -> ZeroRowSumMatrix {
    ZeroRowSumMatrix::new(g.clone())
}

impl ZeroRowSumMatrix {
    pub fn new(graph: WeightedGraph) -> Self {
        let matrix = build(&graph, |_, e| e.w);
        Self { graph, matrix }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn matrix(&self) -> &SymmetricMatrix<f64> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// The same pattern over another ring; `weight` gives each link's entry.
    pub fn matrix_over<T: Ring>(&self, weight: impl Fn(usize, &Edge) -> T) -> SymmetricMatrix<T> {
        build(&self.graph, weight)
    }

    /// Exact copy; floats convert to rationals without rounding.
    pub fn exact(&self) -> SymmetricMatrix<BigRational> {
        self.matrix_over(|_, e| <BigRational as Scalar>::from_f64(e.w))
    }
}

fn build<T: Ring>(g: &WeightedGraph, weight: impl Fn(usize, &Edge) -> T) -> SymmetricMatrix<T> {
    let mut m = SymmetricMatrix::zeros(g.n());
    let mut diag = vec![T::zero(); g.n()];
    for (k, e) in g.edges().iter().enumerate() {
        let w = weight(k, e);
        diag[e.i] = diag[e.i].clone() - w.clone();
        diag[e.j] = diag[e.j].clone() - w.clone();
        m.set(e.i, e.j, w);
    }
    for (i, d) in diag.into_iter().enumerate() {
        m.set(i, i, d);
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMethod {
    Enumeration,
    #[default]
    Determinant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiValue<T = f64> {
    pub subset: IndexSubset,
    pub value: T,
    pub method: PhiMethod,
    /// Number of forests summed (enumeration only).
    pub forest_count: Option<u128>,
}

/// `Phi_S`, evaluated per connected component and multiplied. A subset that
/// covers a whole component gives exactly zero.
pub fn phi<T: Scalar>(zm: &ZeroRowSumMatrix, s: &IndexSubset, method: PhiMethod) -> Result<PhiValue<T>> {
    zm.matrix.check_subset(s)?;
    let g = &zm.graph;
    match method {
        PhiMethod::Enumeration => {
            let forests = enumerate_forests_capped(g, s, DEFAULT_FOREST_CAP)?;
            let value = forests.iter().fold(T::zero(), |acc, f| {
                acc + f
                    .edges
                    .iter()
                    .fold(T::one(), |p, &k| p * T::from_f64(g.edge(k).w))
            });
            Ok(PhiValue {
                subset: s.clone(),
                value,
                method,
                forest_count: Some(forests.len() as u128),
            })
        }
        PhiMethod::Determinant => {
            let m: SymmetricMatrix<T> = zm.matrix_over(|_, e| T::from_f64(e.w));
            let comps = components(g);
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); comps.count()];
            for &v in s.members() {
                groups[comps.of_node[v]].push(v);
            }
            let mut value = T::one();
            for (c, group) in groups.iter().enumerate() {
                if group.is_empty() {
                    continue;
                }
                if group.len() == comps.members[c].len() {
                    value = T::zero();
                    break;
                }
                let block = m.submatrix(&IndexSubset::new(group.iter().copied(), g.n())?);
                let d = T::determinant(block);
                value = value * if group.len() % 2 == 0 { d } else { -d };
            }
            Ok(PhiValue {
                subset: s.clone(),
                value,
                method,
                forest_count: None,
            })
        }
    }
}

/// Weighted spanning-tree sum of a connected graph (`Phi` with one node
/// dropped; the choice of node does not matter).
pub fn spanning_tree_sum<T: Scalar>(zm: &ZeroRowSumMatrix) -> Result<T> {
    let n = zm.n();
    if n == 0 || !components(&zm.graph).is_connected() {
        return Err(Error::Disconnected);
    }
    if n == 1 {
        return Ok(T::one());
    }
    let s = IndexSubset::new(1..n, n)?;
    Ok(phi::<T>(zm, &s, PhiMethod::Determinant)?.value)
}

/// `Phi` for the nested chain `{0}, {0,1}, ..., {0..n-2}` under `order`.
pub fn nested_phi<T: Scalar>(zm: &ZeroRowSumMatrix, order: &[usize]) -> Result<Vec<PhiValue<T>>> {
    let n = zm.n();
    (1..n)
        .map(|k| {
            let s = IndexSubset::new(order[..k].iter().copied(), n)?;
            phi(zm, &s, PhiMethod::Determinant)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig2, triangle};
    use crate::minors::principal_minor;
    use num_traits::{One, Zero};

    #[test]
    fn single_edge_matrix() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 2.5)]).unwrap();
        let zm = zero_row_sum_matrix(&g);
        assert_eq!(zm.matrix().rows(), vec![vec![-2.5, 2.5], vec![2.5, -2.5]]);
    }

    #[test]
    fn empty_graph_gives_zero_matrix() {
        let g = WeightedGraph::from_edges(3, Vec::<(usize, usize, f64)>::new()).unwrap();
        let zm = zero_row_sum_matrix(&g);
        assert_eq!(*zm.matrix(), SymmetricMatrix::zeros(3));
    }

    #[test]
    fn fig2_nested_sequence() {
        let zm = zero_row_sum_matrix(&fig2());
        let order: Vec<usize> = (0..6).collect();
        let values: Vec<f64> = nested_phi::<f64>(&zm, &order)
            .unwrap()
            .into_iter()
            .map(|p| p.value)
            .collect();
        for (v, want) in values.iter().zip([2.0, 3.0, 3.0, 3.0, 3.0]) {
            assert!((v - want).abs() < 1e-12, "{values:?}");
        }
        for k in 1..6 {
            let s = IndexSubset::leading(k, 6).unwrap();
            let e = phi::<BigRational>(&zm, &s, PhiMethod::Enumeration).unwrap();
            let d = phi::<BigRational>(&zm, &s, PhiMethod::Determinant).unwrap();
            assert_eq!(e.value, d.value);
            assert_eq!(e.forest_count, Some(if k == 1 { 2 } else { 3 }));
        }
    }

    #[test]
    fn singleton_is_weighted_degree() {
        let g = triangle(1.5, -0.5, 2.0);
        let zm = zero_row_sum_matrix(&g);
        let s = IndexSubset::new([0], 3).unwrap();
        assert_eq!(phi::<f64>(&zm, &s, PhiMethod::Determinant).unwrap().value, 1.0);
        assert_eq!(phi::<f64>(&zm, &s, PhiMethod::Enumeration).unwrap().value, 1.0);
    }

    #[test]
    fn sign_relation_to_minor() {
        let g = triangle(1.0, 2.0, -0.5);
        let zm = zero_row_sum_matrix(&g);
        for s in IndexSubset::all(3, 3) {
            let d = principal_minor(&zm.exact(), &s).unwrap().value;
            let p = phi::<BigRational>(&zm, &s, PhiMethod::Enumeration).unwrap().value;
            let expected = if s.order() % 2 == 0 { p } else { -p };
            assert_eq!(d, expected, "S = {s}");
        }
    }

    #[test]
    fn whole_component_is_exactly_zero() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (2, 3, 0.3)]).unwrap();
        let zm = zero_row_sum_matrix(&g);
        let s = IndexSubset::new([2, 3], 4).unwrap();
        assert!(phi::<f64>(&zm, &s, PhiMethod::Determinant).unwrap().value.is_zero());
        let s = IndexSubset::new([0, 2], 4).unwrap();
        let v = phi::<f64>(&zm, &s, PhiMethod::Determinant).unwrap().value;
        assert!((v - 0.3).abs() < 1e-15);
    }

    #[test]
    fn spanning_trees() {
        let zm = zero_row_sum_matrix(&triangle(1.0, 1.0, 1.0));
        assert_eq!(spanning_tree_sum::<BigRational>(&zm).unwrap(), BigRational::from_integer(3.into()));
        let zm = zero_row_sum_matrix(&fig2());
        assert!((spanning_tree_sum::<f64>(&zm).unwrap() - 3.0).abs() < 1e-12);
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert_eq!(
            spanning_tree_sum::<f64>(&zero_row_sum_matrix(&g)),
            Err(Error::Disconnected)
        );
        let lone = WeightedGraph::from_edges(1, Vec::<(usize, usize, f64)>::new()).unwrap();
        assert!(spanning_tree_sum::<f64>(&zero_row_sum_matrix(&lone)).unwrap().is_one());
    }
}
