use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::{IndexSubset, WeightedGraph, SYMMETRY_TOLERANCE};
use crate::scalar::{Ring, Scalar};

/// Dense real symmetric matrix. Symmetry holds exactly: every constructor
/// writes `(i, j)` and `(j, i)` together.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for SymmetricMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.n.max(1)).collect();
        f.debug_struct("SymmetricMatrix")
            .field("n", &self.n)
            .field("rows", &rows)
            .finish()
    }
}

impl<T: Ring> SymmetricMatrix<T> {
    /// Builds from the upper triangle: `entry(i, j)` is called for `i <= j`.
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = entry(i, j);
                data[j * n + i] = v.clone();
                data[i * n + j] = v;
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    /// Writes both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[j * self.n + i] = v.clone();
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(<[T]>::to_vec).collect()
    }

    /// Principal submatrix on `s`, as rows.
    pub fn submatrix(&self, s: &IndexSubset) -> Vec<Vec<T>> {
        s.members()
            .iter()
            .map(|&i| s.members().iter().map(|&j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Principal submatrix on `s` as a matrix of its own.
    pub fn principal(&self, s: &IndexSubset) -> Self {
        let m = s.members();
        Self::from_fn(m.len(), |a, b| self.get(m[a], m[b]).clone())
    }

    /// Symmetric permutation `P^T M P` with new index `k` taking old index
    /// `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_fn(self.n, |a, b| self.get(order[a], order[b]).clone())
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> SymmetricMatrix<U> {
        SymmetricMatrix {
            n: self.n,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub(crate) fn check_subset(&self, s: &IndexSubset) -> Result<()> {
        match s.members().last() {
            Some(&v) if v >= self.n => Err(Error::SubsetOutOfRange { index: v, n: self.n }),
            _ => Ok(()),
        }
    }
}

impl<T: Scalar> SymmetricMatrix<T> {
    /// Largest absolute row sum over the rows and columns in `s`.
    pub fn row_sum_norm_on(&self, s: &IndexSubset) -> f64 {
        s.members()
            .iter()
            .map(|&i| s.members().iter().map(|&j| self.get(i, j).to_f64().abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn row_sum_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_f64().abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> SymmetricMatrix<f64> {
        self.map(Scalar::to_f64)
    }
}

impl SymmetricMatrix<f64> {
    /// Accepts a square matrix that is symmetric up to
    /// `SYMMETRY_TOLERANCE * max|M|` and averages the two triangles.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite(bad));
            }
        }
        let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = SYMMETRY_TOLERANCE * scale;
        for i in 0..n {
            for j in i + 1..n {
                let diff = (rows[i][j] - rows[j][i]).abs();
                if diff > tol {
                    return Err(Error::AsymmetricInput { i, j, diff, tol });
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Graph on the nonzero off-diagonal entries.
    pub fn off_diagonal_graph(&self) -> WeightedGraph {
        let n = self.n;
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        WeightedGraph::from_edges(n, edges.map(|(i, j)| (i, j, *self.get(i, j))))
            .expect("symmetric matrix yields a simple graph")
    }

    /// Exact rational copy; every float converts without rounding.
    pub fn to_exact(&self) -> SymmetricMatrix<BigRational> {
        self.map(|&v| <BigRational as Scalar>::from_f64(v))
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}
