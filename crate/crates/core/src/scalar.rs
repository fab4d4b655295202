//! Number types the minor calculus runs over.
//!
//! Everything that only multiplies and adds matrix entries (Leibniz sums,
//! symbol placements, forest sums) is generic over [`Ring`]. Elimination,
//! rank and sign decisions additionally need [`Scalar`], which is
//! implemented for `f64` (pivoted elimination under a zero threshold) and
//! for `BigRational` (fraction-free elimination, exact signs).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Commutative ring with the operations the expansion formulas need.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

impl SignClass {
    /// Sign demanded of a minor of the given order for stability: `(-1)^order`.
    pub fn alternating(order: usize) -> Self {
        if order % 2 == 0 {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }

    pub fn flip(self) -> Self {
        match self {
            SignClass::Negative => SignClass::Positive,
            SignClass::Zero => SignClass::Zero,
            SignClass::Positive => SignClass::Negative,
        }
    }
}

/// Ordered field with elimination-based determinant and rank.
pub trait Scalar: Ring + Send + Sync + 'static {
    /// `true` when arithmetic is exact and signs need no tolerance.
    const EXACT: bool;

    /// Converts a float. Exact types represent the binary value exactly.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Determinant of a dense square matrix given by rows.
    fn determinant(rows: Vec<Vec<Self>>) -> Self;

    /// Rank of a dense matrix; pivots with magnitude `<= tol` count as zero
    /// (ignored by exact types).
    fn rank(rows: Vec<Vec<Self>>, tol: f64) -> usize;

    /// Sign decision; `|self| <= zero_threshold` is zero for inexact types.
    fn sign_class(&self, zero_threshold: f64) -> SignClass;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
        let n = a.len();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&r, &s| a[r][k].abs().total_cmp(&a[s][k].abs()))
                .expect("nonempty pivot range");
            if a[p][k] == 0.0 {
                return 0.0;
            }
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            let pivot = a[k][k];
            det *= pivot;
            for r in k + 1..n {
                let factor = a[r][k] / pivot;
                if factor != 0.0 {
                    for c in k + 1..n {
                        a[r][c] -= factor * a[k][c];
                    }
                }
            }
        }
        det
    }

    fn rank(mut a: Vec<Vec<f64>>, tol: f64) -> usize {
        // Complete pivoting: pick the largest remaining entry each step.
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        let mut col_perm: Vec<usize> = (0..cols).collect();
        while rank < rows.min(cols) {
            let mut best = (rank, rank, 0.0f64);
            for r in rank..rows {
                for c in rank..cols {
                    let v = a[r][col_perm[c]].abs();
                    if v > best.2 {
                        best = (r, c, v);
                    }
                }
            }
            if best.2 <= tol {
                break;
            }
            a.swap(rank, best.0);
            col_perm.swap(rank, best.1);
            let pc = col_perm[rank];
            let pivot = a[rank][pc];
            for r in rank + 1..rows {
                let factor = a[r][pc] / pivot;
                if factor != 0.0 {
                    for c in rank..cols {
                        let cc = col_perm[c];
                        a[r][cc] -= factor * a[rank][cc];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn sign_class(&self, zero_threshold: f64) -> SignClass {
        if self.abs() <= zero_threshold {
            SignClass::Zero
        } else if *self > 0.0 {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x} in exact mode"))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn determinant(rows: Vec<Vec<BigRational>>) -> BigRational {
        let q = rows.len();
        let (ints, denom) = clear_denominators(&rows);
        let det = bareiss_determinant(ints);
        BigRational::new(det, num_traits::pow(denom, q))
    }

    fn rank(rows: Vec<Vec<BigRational>>, _tol: f64) -> usize {
        exact_rank(rows)
    }

    fn sign_class(&self, _zero_threshold: f64) -> SignClass {
        if self.is_zero() {
            SignClass::Zero
        } else if self.is_positive() {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }
}

/// Scales a rational matrix to integers by the lcm of all denominators.
fn clear_denominators(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let denom = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.numer() * (&denom / v.denom()))
                .collect()
        })
        .collect();
    (ints, denom)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
///
/// Every intermediate entry is itself a minor of the input, so all
/// divisions are exact.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn exact_rank(mut a: Vec<Vec<BigRational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let factor = &a[r][c] / &a[rank][c];
            for cc in c..cols {
                let v = &factor * &a[rank][cc];
                a[r][cc] -= v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Shorthand used throughout tests and the CLI.
pub fn rational(x: f64) -> BigRational {
    <BigRational as Scalar>::from_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn bareiss_matches_hand_values() {
        assert_eq!(bareiss_determinant(ints(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(
            bareiss_determinant(ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])),
            BigInt::from(-5)
        );
        assert_eq!(
            bareiss_determinant(ints(&[&[1, 2], &[2, 4]])),
            BigInt::zero()
        );
    }

    #[test]
    fn rational_determinant_clears_denominators() {
        let half = BigRational::new(1.into(), 2.into());
        let m = vec![
            vec![half.clone(), BigRational::zero()],
            vec![BigRational::zero(), BigRational::from_integer(3.into())],
        ];
        assert_eq!(
            <BigRational as Scalar>::determinant(m),
            BigRational::new(3.into(), 2.into())
        );
    }

    #[test]
    fn float_and_exact_rank_agree_on_laplacian() {
        let rows = vec![
            vec![-2.0, 1.0, 1.0],
            vec![1.0, -1.0, 0.0],
            vec![1.0, 0.0, -1.0],
        ];
        assert_eq!(<f64 as Scalar>::rank(rows.clone(), 1e-12), 2);
        let exact: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| rational(v)).collect())
            .collect();
        assert_eq!(<BigRational as Scalar>::rank(exact, 0.0), 2);
    }

    #[test]
    fn float_determinant_pivots() {
        let d = <f64 as Scalar>::determinant(vec![vec![0.0, 2.0], vec![3.0, 1.0]]);
        assert!((d + 6.0).abs() < 1e-15);
    }

    #[test]
    fn sign_classes() {
        assert_eq!(1e-12f64.sign_class(1e-10), SignClass::Zero);
        assert_eq!((-1.0f64).sign_class(1e-10), SignClass::Negative);
        assert_eq!(rational(-0.0).sign_class(0.0), SignClass::Zero);
        assert_eq!(SignClass::alternating(3), SignClass::Negative);
    }
}
