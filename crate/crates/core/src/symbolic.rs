//! Cycle-symbol expansion of principal minors.
//!
//! Every Leibniz term of a symmetric minor decomposes into cycles on the
//! nodes of `S`: self-loops (`x`), back-and-forth links (`|`), and longer
//! cycles (`C3`, `C4`, ...). Grouping terms by their multiset of cycle
//! lengths gives one [`SymbolTerm`] per integer partition of `|S|`, with
//! coefficient `prod (-1)^(n+1)` times `2` per cycle of length `n >= 3`
//! (its two orientations carry the same product).
//!
//! A term is evaluated by summing over its [`Placement`]s: node-disjoint
//! cycles covering `S`, each cycle taken once (anchored at its smallest
//! node, one orientation).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::IndexSubset;
use crate::matrix::SymmetricMatrix;
use crate::minors::LEIBNIZ_LIMIT;
use crate::scalar::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolTerm {
    /// Cycle lengths, ascending.
    pub cycles: Vec<usize>,
    pub coefficient: i64,
}

impl SymbolTerm {
    fn from_cycles(mut cycles: Vec<usize>) -> Self {
        cycles.sort_unstable();
        let coefficient = cycles.iter().fold(1i64, |acc, &n| {
            let sign = if n % 2 == 0 { -1 } else { 1 };
            let orientations = if n >= 3 { 2 } else { 1 };
            acc * sign * orientations
        });
        Self {
            cycles,
            coefficient,
        }
    }

    pub fn order(&self) -> usize {
        self.cycles.iter().sum()
    }

    /// Product of symbols, e.g. `x.x.|` or `x.C3`.
    pub fn symbols(&self) -> String {
        self.cycles
            .iter()
            .map(|&n| match n {
                1 => "x".to_string(),
                2 => "|".to_string(),
                n => format!("C{n}"),
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// All terms of a minor of order `q`, ordered as they are usually written:
/// all self-loops first, single long cycle last.
pub fn symbol_terms(q: usize) -> Result<Vec<SymbolTerm>> {
    if q == 0 || q > LEIBNIZ_LIMIT {
        return Err(Error::TooLarge {
            what: "symbol expansion order",
            size: q as u128,
            limit: LEIBNIZ_LIMIT as u128,
        });
    }
    let mut parts = Vec::new();
    partitions(q, q, &mut Vec::new(), &mut parts);
    // lexicographic on the descending form
    parts.sort();
    Ok(parts
        .into_iter()
        .map(SymbolTerm::from_cycles)
        .collect())
}

fn partitions(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=rest.min(max)).rev() {
        current.push(part);
        partitions(rest - part, part, current, out);
        current.pop();
    }
}

/// Renders an expansion in symbol notation, e.g.
/// `x.x.x - x.| + 2C3`.
pub fn format_expansion(terms: &[SymbolTerm]) -> String {
    let mut out = String::new();
    for (k, term) in terms.iter().enumerate() {
        let magnitude = term.coefficient.abs();
        let sign = if term.coefficient < 0 { "-" } else { "+" };
        if k == 0 {
            if term.coefficient < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if magnitude != 1 {
            out.push_str(&magnitude.to_string());
        }
        out.push_str(&term.symbols());
    }
    out
}

/// Node-disjoint cycles realizing one symbol term on `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placement {
    /// Each cycle as its node sequence, starting at its smallest node; for
    /// length >= 3 the second node is smaller than the last.
    pub cycles: Vec<Vec<usize>>,
}

impl Placement {
    pub fn product<T: Ring>(&self, m: &SymmetricMatrix<T>) -> T {
        self.cycles
            .iter()
            .fold(T::one(), |acc, c| acc * cycle_product(m, c))
    }
}

fn cycle_product<T: Ring>(m: &SymmetricMatrix<T>, cycle: &[usize]) -> T {
    match cycle.len() {
        1 => m.get(cycle[0], cycle[0]).clone(),
        2 => {
            let v = m.get(cycle[0], cycle[1]).clone();
            v.clone() * v
        }
        len => (0..len).fold(T::one(), |acc, k| {
            acc * m.get(cycle[k], cycle[(k + 1) % len]).clone()
        }),
    }
}

/// Placements of `term` on `s` whose cycles all exist in the graph of `m`
/// (nonzero entries along every cycle).
pub fn placements<T: Ring>(
    m: &SymmetricMatrix<T>,
    s: &IndexSubset,
    term: &SymbolTerm,
) -> Result<Vec<Placement>> {
    m.check_subset(s)?;
    if term.order() != s.order() {
        return Err(Error::DimensionMismatch {
            expected: s.order(),
            got: term.order(),
        });
    }
    let mut remaining: BTreeMap<usize, usize> = BTreeMap::new();
    for &n in &term.cycles {
        *remaining.entry(n).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut unused: Vec<usize> = s.members().to_vec();
    place(m, &mut unused, &mut remaining, &mut Vec::new(), &mut out);
    Ok(out)
}

fn place<T: Ring>(
    m: &SymmetricMatrix<T>,
    unused: &mut Vec<usize>,
    remaining: &mut BTreeMap<usize, usize>,
    current: &mut Vec<Vec<usize>>,
    out: &mut Vec<Placement>,
) {
    let Some(&anchor) = unused.first() else {
        out.push(Placement {
            cycles: current.clone(),
        });
        return;
    };
    let sizes: Vec<usize> = remaining
        .iter()
        .filter(|(_, &count)| count > 0)
        .map(|(&n, _)| n)
        .collect();
    for size in sizes {
        if size > unused.len() {
            continue;
        }
        *remaining.get_mut(&size).expect("size present") -= 1;
        let others: Vec<usize> = unused[1..].to_vec();
        for_each_combination(&others, size - 1, &mut |chosen| {
            for cycle in cycles_through(anchor, chosen) {
                if cycle_product(m, &cycle).is_zero() {
                    continue;
                }
                let block: Vec<usize> = cycle.clone();
                unused.retain(|v| !block.contains(v));
                current.push(cycle);
                place(m, unused, remaining, current, out);
                current.pop();
                unused.extend(block);
                unused.sort_unstable();
            }
        });
        *remaining.get_mut(&size).expect("size present") += 1;
    }
}

fn for_each_combination(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - acc.len() {
                break;
            }
            acc.push(items[i]);
            rec(items, k, i + 1, acc, f);
            acc.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), f);
}

/// Undirected cycles on `{anchor} ∪ others`, one orientation each.
fn cycles_through(anchor: usize, others: &[usize]) -> Vec<Vec<usize>> {
    match others.len() {
        0 => vec![vec![anchor]],
        1 => vec![vec![anchor, others[0]]],
        _ => {
            let mut out = Vec::new();
            let mut rest = others.to_vec();
            permute(&mut rest, 0, &mut |p| {
                if p[0] < p[p.len() - 1] {
                    let mut c = vec![anchor];
                    c.extend_from_slice(p);
                    out.push(c);
                }
            });
            out
        }
    }
}

fn permute(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// `coefficient * sum over placements` for one term.
pub fn evaluate_term<T: Ring>(m: &SymmetricMatrix<T>, s: &IndexSubset, term: &SymbolTerm) -> Result<T> {
    let sum = placements(m, s, term)?
        .iter()
        .fold(T::zero(), |acc, p| acc + p.product(m));
    Ok(scale(sum, term.coefficient))
}

/// Minor on `s` evaluated through the symbol expansion.
pub fn evaluate_symbolic<T: Ring>(m: &SymmetricMatrix<T>, s: &IndexSubset) -> Result<T> {
    symbol_terms(s.order())?
        .iter()
        .try_fold(T::zero(), |acc, term| Ok(acc + evaluate_term(m, s, term)?))
}

fn scale<T: Ring>(value: T, k: i64) -> T {
    let mut factor = T::zero();
    for _ in 0..k.unsigned_abs() {
        factor = factor + T::one();
    }
    if k < 0 {
        -(factor * value)
    } else {
        factor * value
    }
}

type Monomial = Vec<(u32, u32)>;

/// Multivariate polynomial with integer coefficients, used to run the
/// expansions on indeterminate entries.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, i64>,
}

impl Poly {
    pub fn var(id: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(id, 1)], 1);
        Self { terms }
    }

    pub fn constant(c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Vec::new(), c);
        }
        Self { terms }
    }

    /// `(monomial, coefficient)` pairs; a monomial lists `(variable, power)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[(u32, u32)], i64)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, value: impl Fn(u32) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(mono, &c)| {
                mono.iter()
                    .fold(c as f64, |acc, &(v, p)| acc * value(v).powi(p as i32))
            })
            .sum()
    }

    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(u32) -> String) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }

    fn insert(&mut self, mono: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(mono).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }
}

fn multiply_monomials(a: &[(u32, u32)], b: &[(u32, u32)]) -> Monomial {
    let mut out: BTreeMap<u32, u32> = a.iter().copied().collect();
    for &(v, p) in b {
        *out.entry(v).or_insert(0) += p;
    }
    out.into_iter().collect()
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.insert(m, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert(multiply_monomials(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(1)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: u32| format!("v{v}");
        let shown = PolyDisplay {
            poly: self,
            names: &names,
        };
        write!(f, "{shown}")
    }
}

struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a dyn Fn(u32) -> String,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (mono, &c)) in self.poly.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            let mag = c.abs();
            if mag != 1 || mono.is_empty() {
                write!(f, "{mag}")?;
            }
            for (t, &(v, p)) in mono.iter().enumerate() {
                if t > 0 || mag != 1 {
                    write!(f, "*")?;
                }
                write!(f, "{}", (self.names)(v))?;
                if p > 1 {
                    write!(f, "^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// Variable id of entry `(i, j)` in an `n x n` symmetric pattern
/// (upper-triangle numbering).
pub fn entry_variable(n: usize, i: usize, j: usize) -> u32 {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    (a * n - a * (a + 1) / 2 + b) as u32
}

/// Fully indeterminate symmetric matrix: entry `(i, j)` is its own
/// variable, named `J{i+1}{j+1}`.
pub fn indeterminate_matrix(n: usize) -> (SymmetricMatrix<Poly>, impl Fn(u32) -> String) {
    let m = SymmetricMatrix::from_fn(n, |i, j| Poly::var(entry_variable(n, i, j)));
    let mut names = vec![String::new(); n * (n + 1) / 2];
    for i in 0..n {
        for j in i..n {
            names[entry_variable(n, i, j) as usize] = format!("J{}{}", i + 1, j + 1);
        }
    }
    (m, move |v: u32| names[v as usize].clone())
}
