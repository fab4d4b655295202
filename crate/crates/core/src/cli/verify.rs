//! Seeded cross-check suites: every case draws from its own generator
//! derived from `(seed, suite, case)`, so results do not depend on thread
//! scheduling.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adaptive::reduction_check;
use crate::criteria::{cut_expansion_check, positive_spanning_tree, PositiveTree};
use crate::forest_sums::{phi, PhiMethod, ZeroRowSumMatrix};
use crate::graph::{IndexSubset, WeightedGraph};
use crate::matrix::SymmetricMatrix;
use crate::minors::{eigen_signs, jsc_verdict, leibniz_minor, principal_minor, JscOptions, JscOutcome};
use crate::scalar::rational;
use crate::symbolic::evaluate_symbolic;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub max_n: usize,
    pub cases: usize,
    /// Flips the sign convention of the forest-sum identity; the suite must
    /// then fail.
    pub mutate_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            max_n: 6,
            cases: 100,
            mutate_sign: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    /// Cases outside the suite's hypothesis (e.g. wrong rank).
    pub skipped: usize,
    pub first_failure: Option<usize>,
}

impl SuiteResult {
    pub fn failed(&self) -> usize {
        self.cases - self.passed - self.skipped
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub suites: Vec<SuiteResult>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed() == 0)
    }

    pub fn render(&self, options: &VerifyOptions) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "verify seed={} max_n={} cases={}",
            options.seed, options.max_n, options.cases
        );
        for s in &self.suites {
            let _ = write!(
                out,
                "{:<22} {:>5}/{:<5} passed  {:>4} skipped  {:>4} failed",
                s.name,
                s.passed,
                s.cases - s.skipped,
                s.skipped,
                s.failed()
            );
            if let Some(c) = s.first_failure {
                let _ = write!(out, "  (first failing case {c})");
            }
            out.push('\n');
        }
        out.push_str(if self.all_passed() {
            "all suites passed\n"
        } else {
            "FAILURES\n"
        });
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Skip,
    Fail,
}

type Suite = fn(&mut ChaCha8Rng, &VerifyOptions) -> Outcome;

const SUITES: [(&str, Suite); 5] = [
    ("forest-sum-identity", forest_sum_identity),
    ("adaptive-reduction", adaptive_reduction),
    ("cut-telescoping", cut_telescoping),
    ("symbolic-vs-leibniz", symbolic_vs_leibniz),
    ("sign-criterion-inertia", sign_criterion_inertia),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

pub fn cmd_verify(options: &VerifyOptions) -> VerifySummary {
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(id, &(name, run))| {
            let outcomes: Vec<Outcome> = (0..options.cases)
                .into_par_iter()
                .map(|case| run(&mut case_rng(options.seed, id as u64, case as u64), options))
                .collect();
            SuiteResult {
                name,
                cases: options.cases,
                passed: outcomes.iter().filter(|o| **o == Outcome::Pass).count(),
                skipped: outcomes.iter().filter(|o| **o == Outcome::Skip).count(),
                first_failure: outcomes.iter().position(|o| *o == Outcome::Fail),
            }
        })
        .collect();
    VerifySummary { suites }
}

/// Independent generator per case (splitmix64 over the three inputs).
pub fn case_rng(seed: u64, suite: u64, case: u64) -> ChaCha8Rng {
    let mut z = seed;
    for v in [suite, case] {
        z = splitmix(z ^ splitmix(v.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    ChaCha8Rng::seed_from_u64(z)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn nonzero_int(rng: &mut (impl Rng + ?Sized), lo: i32, hi: i32) -> f64 {
    loop {
        let v = rng.gen_range(lo..=hi);
        if v != 0 {
            return v as f64;
        }
    }
}

/// Random graph with integer weights in `[-3, 3] \ {0}`, edge density 1/2.
pub fn random_integer_graph(rng: &mut impl Rng, n: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((i, j, nonzero_int(rng, -3, 3)));
            }
        }
    }
    WeightedGraph::from_edges(n, edges).expect("valid edges")
}

/// Connected graph: a random spanning tree plus random extra links, weights
/// drawn by `weight`.
pub fn random_connected_graph(
    rng: &mut impl Rng,
    n: usize,
    extra: f64,
    mut weight: impl FnMut(&mut dyn rand::RngCore) -> f64,
) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for k in 1..n {
        let a = order[k];
        let b = order[rng.gen_range(0..k)];
        present[a][b] = true;
        present[b][a] = true;
        edges.push((a, b, weight(rng)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !present[i][j] && rng.gen_bool(extra) {
                edges.push((i, j, weight(rng)));
            }
        }
    }
    WeightedGraph::from_edges(n, edges).expect("valid edges")
}

fn forest_sum_identity(rng: &mut ChaCha8Rng, o: &VerifyOptions) -> Outcome {
    let n = rng.gen_range(2..=o.max_n.max(2));
    let g = random_integer_graph(rng, n);
    let zm = ZeroRowSumMatrix::new(g);
    let exact = zm.exact();
    for s in IndexSubset::all(n, n) {
        let d = principal_minor(&exact, &s).expect("in range").value;
        let Ok(p) = phi::<BigRational>(&zm, &s, PhiMethod::Enumeration) else {
            return Outcome::Fail;
        };
        let flip = (s.order() + usize::from(o.mutate_sign)) % 2 == 1;
        let expected = if flip { -p.value } else { p.value };
        if d != expected {
            return Outcome::Fail;
        }
    }
    Outcome::Pass
}

fn adaptive_reduction(rng: &mut ChaCha8Rng, o: &VerifyOptions) -> Outcome {
    let n = rng.gen_range(2..=o.max_n.clamp(2, 5));
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-PI..PI)).collect();
    let b = rng.gen_range(0.2..3.0);
    for s in IndexSubset::all(n, n) {
        match reduction_check(&x, b, &s) {
            Ok(r) if r.relative_gap <= 1e-9 => {}
            _ => return Outcome::Fail,
        }
    }
    Outcome::Pass
}

fn cut_telescoping(rng: &mut ChaCha8Rng, o: &VerifyOptions) -> Outcome {
    let n = rng.gen_range(3..=o.max_n.max(3));
    // random side assignment with both sides nonempty
    let split = rng.gen_range(1..n);
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(rng);
    let side_one: Vec<usize> = nodes[..split].to_vec();
    let mut g = random_connected_graph(rng, n, 0.4, |r| nonzero_int(r, -3, 3));
    // make every crossing link negative
    g = g
        .map_weights(|_, e| {
            if side_one.contains(&e.i) != side_one.contains(&e.j) {
                -e.w.abs()
            } else {
                e.w
            }
        })
        .expect("finite");
    let PositiveTree::Cut(cut) = positive_spanning_tree(&g) else {
        return Outcome::Fail;
    };
    let zm = ZeroRowSumMatrix::new(g.clone());
    let witness = IndexSubset::all(n, n).into_iter().any(|s| {
        phi::<BigRational>(&zm, &s, PhiMethod::Determinant)
            .map(|p| !p.value.is_positive())
            .unwrap_or(false)
    });
    if !witness {
        return Outcome::Fail;
    }
    let boundary = cut.boundary.clone();
    for mask in 0..1usize << boundary.len() {
        let c: Vec<usize> = (0..boundary.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| boundary[b])
            .collect();
        match cut_expansion_check(&g, &cut, &c) {
            Ok(check) if check.sides_agree && check.telescoping_is_zero => {}
            _ => return Outcome::Fail,
        }
    }
    Outcome::Pass
}

fn symbolic_vs_leibniz(rng: &mut ChaCha8Rng, o: &VerifyOptions) -> Outcome {
    let n = rng.gen_range(1..=o.max_n.clamp(1, 7));
    let m = SymmetricMatrix::from_fn(n, |i, j| {
        if i != j && rng.gen_bool(0.3) {
            rational(0.0)
        } else {
            rational(rng.gen_range(-4..=4) as f64)
        }
    });
    for s in IndexSubset::all(n, n) {
        let (Ok(a), Ok(b)) = (evaluate_symbolic(&m, &s), leibniz_minor(&m, &s)) else {
            return Outcome::Fail;
        };
        if a != b {
            return Outcome::Fail;
        }
    }
    Outcome::Pass
}

fn sign_criterion_inertia(rng: &mut ChaCha8Rng, o: &VerifyOptions) -> Outcome {
    let n = rng.gen_range(2..=o.max_n.max(2));
    let g = random_connected_graph(rng, n, 0.4, |r| nonzero_int(r, -2, 4));
    let zm = ZeroRowSumMatrix::new(g);
    let verdict = jsc_verdict(&zm.exact(), &JscOptions::default()).expect("square");
    if verdict.rank + 1 != n {
        return Outcome::Skip;
    }
    let inertia = eigen_signs(zm.matrix());
    let stable = inertia.negative == n - 1 && inertia.zero == 1 && inertia.positive == 0;
    if (verdict.outcome == JscOutcome::Satisfied) == stable {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}
