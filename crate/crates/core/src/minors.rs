//! Principal minors and Jacobi's signature criterion.
//!
//! A symmetric matrix of rank `n - 1` has `n - 1` negative eigenvalues iff
//! every principal minor of order `q <= n - 1` has the sign of `(-1)^q`.
//! [`jsc_verdict`] checks that family of signs (or a chosen part of it);
//! [`eigen_signs`] is the independent spectral oracle.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::IndexSubset;
use crate::matrix::SymmetricMatrix;
use crate::scalar::{Ring, Scalar, SignClass};

/// A minor counts as zero when `|D| <= ZERO_TOLERANCE * r^|S|`, with `r`
/// the largest absolute row sum of the submatrix.
pub const ZERO_TOLERANCE: f64 = 1e-10;

/// Largest order the permutation-sum oracle accepts (`9! = 362880` terms).
pub const LEIBNIZ_LIMIT: usize = 9;

/// Largest dimension for the exhaustive all-subsets sweep.
pub const ALL_SUBSETS_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorValue<T = f64> {
    pub subset: IndexSubset,
    pub value: T,
    pub sign: SignClass,
}

/// Zero threshold for a minor on `s` under relative tolerance `tol_zero`.
pub fn minor_zero_threshold<T: Scalar>(m: &SymmetricMatrix<T>, s: &IndexSubset, tol_zero: f64) -> f64 {
    if T::EXACT {
        0.0
    } else {
        tol_zero * m.row_sum_norm_on(s).powi(s.order() as i32)
    }
}

pub fn principal_minor<T: Scalar>(m: &SymmetricMatrix<T>, s: &IndexSubset) -> Result<MinorValue<T>> {
    principal_minor_with(m, s, ZERO_TOLERANCE)
}

/// Determinant of the principal submatrix on `s`: pivoted elimination for
/// floats, fraction-free elimination for rationals.
pub fn principal_minor_with<T: Scalar>(
    m: &SymmetricMatrix<T>,
    s: &IndexSubset,
    tol_zero: f64,
) -> Result<MinorValue<T>> {
    m.check_subset(s)?;
    let value = T::determinant(m.submatrix(s));
    let sign = value.sign_class(minor_zero_threshold(m, s, tol_zero));
    Ok(MinorValue {
        subset: s.clone(),
        value,
        sign,
    })
}

/// Permutation-sum evaluation of the minor on `s`.
pub fn leibniz_minor<T: Ring>(m: &SymmetricMatrix<T>, s: &IndexSubset) -> Result<T> {
    m.check_subset(s)?;
    let q = s.order();
    if q > LEIBNIZ_LIMIT {
        return Err(Error::TooLarge {
            what: "Leibniz expansion order",
            size: q as u128,
            limit: LEIBNIZ_LIMIT as u128,
        });
    }
    let idx = s.members();
    Ok(leibniz_determinant(q, |a, b| m.get(idx[a], idx[b]).clone()))
}

/// `sum over permutations p of sgn(p) * prod_a entry(a, p(a))`, generated
/// by Heap's algorithm (each step is one transposition, so the sign
/// alternates).
pub fn leibniz_determinant<T: Ring>(q: usize, entry: impl Fn(usize, usize) -> T) -> T {
    let mut perm: Vec<usize> = (0..q).collect();
    let mut counters = vec![0usize; q];
    let term = |p: &[usize]| {
        p.iter()
            .enumerate()
            .fold(T::one(), |acc, (a, &b)| acc * entry(a, b))
    };
    let mut total = term(&perm);
    let mut positive = true;
    let mut i = 1;
    while i < q {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            positive = !positive;
            let t = term(&perm);
            total = if positive { total + t } else { total - t };
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    total
}

/// Counts of negative, zero and positive eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Inertia {
    pub fn new(negative: usize, zero: usize, positive: usize) -> Self {
        Self {
            negative,
            zero,
            positive,
        }
    }

    /// `(n - 1, 1, 0)`: negative apart from a single zero mode.
    pub fn is_stable_up_to_one_zero_mode(&self) -> bool {
        self.zero == 1 && self.positive == 0
    }
}

pub fn eigen_signs(m: &SymmetricMatrix<f64>) -> Inertia {
    eigen_signs_with(m, ZERO_TOLERANCE)
}

/// Inertia from a dense symmetric eigensolver; `|lambda| <= tol * ||m||`
/// counts as zero, with `||m||` the largest absolute row sum.
pub fn eigen_signs_with(m: &SymmetricMatrix<f64>, tol_zero: f64) -> Inertia {
    let threshold = tol_zero * m.row_sum_norm();
    let mut inertia = Inertia::new(0, 0, 0);
    for &lambda in eigenvalues(m).iter() {
        if lambda.abs() <= threshold {
            inertia.zero += 1;
        } else if lambda < 0.0 {
            inertia.negative += 1;
        } else {
            inertia.positive += 1;
        }
    }
    inertia
}

/// Eigenvalues in increasing order.
pub fn eigenvalues(m: &SymmetricMatrix<f64>) -> Vec<f64> {
    if m.n() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = nalgebra::SymmetricEigen::new(m.to_nalgebra())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Rank by complete-pivoting elimination (floats: pivots below
/// `tol_zero * ||m||` are zero) or exact elimination (rationals).
pub fn matrix_rank<T: Scalar>(m: &SymmetricMatrix<T>, tol_zero: f64) -> usize {
    let tol = if T::EXACT { 0.0 } else { tol_zero * m.row_sum_norm() };
    T::rank(m.rows(), tol)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JscStrategy {
    /// Leading minors in the natural variable order.
    Nested,
    /// Leading minors after reordering; `order[k]` is the k-th variable.
    NestedOrder(Vec<usize>),
    /// Every subset with `|S| <= rank` (dimension capped at
    /// [`ALL_SUBSETS_LIMIT`]).
    AllSubsets,
    /// `count` random subsets drawn from a seeded generator.
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JscOptions {
    pub strategy: JscStrategy,
    pub tol_zero: f64,
}

impl Default for JscOptions {
    fn default() -> Self {
        Self {
            strategy: JscStrategy::Nested,
            tol_zero: ZERO_TOLERANCE,
        }
    }
}

impl JscOptions {
    pub fn with_strategy(strategy: JscStrategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JscOutcome {
    Satisfied,
    Violated,
    Degenerate,
}

/// A minor whose sign is not `(-1)^|S|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorWitness {
    pub subset: IndexSubset,
    pub value: f64,
    pub sign: SignClass,
    pub expected: SignClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JscVerdict {
    pub outcome: JscOutcome,
    pub rank: usize,
    pub dimension: usize,
    /// First subset with a strictly wrong sign.
    pub witness: Option<MinorWitness>,
    /// First subset whose minor fell under the zero threshold.
    pub zero_minor: Option<MinorWitness>,
    /// Variable orderings whose nested chains were examined.
    pub orderings: Vec<Vec<usize>>,
    pub minors_checked: usize,
    pub exact: bool,
}

pub fn jsc_verdict<T: Scalar>(m: &SymmetricMatrix<T>, options: &JscOptions) -> Result<JscVerdict> {
    let n = m.n();
    let rank = matrix_rank(m, options.tol_zero);
    let mut verdict = JscVerdict {
        outcome: JscOutcome::Degenerate,
        rank,
        dimension: n,
        witness: None,
        zero_minor: None,
        orderings: Vec::new(),
        minors_checked: 0,
        exact: T::EXACT,
    };
    if n == 0 || rank + 1 != n {
        return Ok(verdict);
    }

    let subsets: Vec<IndexSubset> = match &options.strategy {
        JscStrategy::Nested => {
            let order: Vec<usize> = (0..n).collect();
            let chain = nested_chain(&order, rank, n)?;
            verdict.orderings.push(order);
            chain
        }
        JscStrategy::NestedOrder(order) => {
            validate_order(order, n)?;
            let chain = nested_chain(order, rank, n)?;
            verdict.orderings.push(order.clone());
            chain
        }
        JscStrategy::AllSubsets => {
            if n > ALL_SUBSETS_LIMIT {
                return Err(Error::TooLarge {
                    what: "all-subsets sweep dimension",
                    size: n as u128,
                    limit: ALL_SUBSETS_LIMIT as u128,
                });
            }
            IndexSubset::all(n, rank)
        }
        JscStrategy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| {
                    let q = rng.gen_range(1..=rank);
                    IndexSubset::new(sample(&mut rng, n, q).into_iter(), n)
                })
                .collect::<Result<_>>()?
        }
    };

    let checked: Vec<(SignClass, MinorWitness)> = subsets
        .par_iter()
        .map(|s| {
            let minor = principal_minor_with(m, s, options.tol_zero)?;
            let expected = SignClass::alternating(s.order());
            Ok((
                minor.sign,
                MinorWitness {
                    subset: s.clone(),
                    value: minor.value.to_f64(),
                    sign: minor.sign,
                    expected,
                },
            ))
        })
        .collect::<Result<_>>()?;

    verdict.minors_checked = checked.len();
    verdict.witness = checked
        .iter()
        .find(|(sign, w)| *sign == w.expected.flip())
        .map(|(_, w)| w.clone());
    verdict.zero_minor = checked
        .iter()
        .find(|(sign, _)| *sign == SignClass::Zero)
        .map(|(_, w)| w.clone());
    verdict.outcome = if verdict.witness.is_some() {
        JscOutcome::Violated
    } else if verdict.zero_minor.is_some() {
        JscOutcome::Degenerate
    } else {
        JscOutcome::Satisfied
    };
    Ok(verdict)
}

fn validate_order(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: order.len(),
        });
    }
    IndexSubset::new(order.iter().copied(), n).map(|_| ())
}

fn nested_chain(order: &[usize], rank: usize, n: usize) -> Result<Vec<IndexSubset>> {
    (1..=rank)
        .map(|k| IndexSubset::new(order[..k].iter().copied(), n))
        .collect()
}
