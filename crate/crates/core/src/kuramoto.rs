//! Phase oscillators `dx_i/dt = C_i + sum_j A_ij O_ij(x_j - x_i)` with odd
//! couplings `O_ij` (plain Kuramoto: `O = sin`, `C = omega`).
//!
//! In a phase-locked state all oscillators turn at the common frequency
//! `Omega = mean(C)`; in the co-rotating frame the state is a steady state
//! whose Jacobian `J_ij = A_ij O'_ij(x_j - x_i)` has zero row sums.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::criteria::{stability_certificate, PhaseTreeRule, StabilityReport};
use crate::error::{Error, Result};
use crate::forest_sums::ZeroRowSumMatrix;
use crate::graph::{components, DisjointSets, WeightedGraph};

pub const NEWTON_MAX_ITERATIONS: usize = 100;
pub const NEWTON_MAX_HALVINGS: usize = 20;
pub const NEWTON_TOLERANCE: f64 = 1e-10;

const ODDNESS_SAMPLES: [f64; 3] = [0.1, 0.7, 1.3];

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Odd coupling function with its derivative.
#[derive(Clone)]
pub struct OddCoupling {
    name: String,
    value: RealFn,
    derivative: RealFn,
}

impl fmt::Debug for OddCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("OddCoupling").field(&self.name).finish()
    }
}

impl OddCoupling {
    /// Wraps a value/derivative pair; oddness is spot-checked at a few
    /// sample points.
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let name = name.into();
        for u in ODDNESS_SAMPLES {
            let (plus, minus) = (value(u), value(-u));
            if (plus + minus).abs() > 1e-12 * plus.abs().max(1.0) {
                return Err(Error::NotOdd(name));
            }
        }
        Ok(Self {
            name,
            value: Arc::new(value),
            derivative: Arc::new(derivative),
        })
    }

    pub fn sin() -> Self {
        Self::named("sin").expect("registered")
    }

    /// Built-in couplings: `sin`, `cubic` (`u - u^3/6`) and `tanh-sin`
    /// (`tanh(sin u)`).
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "sin" => Self::new(name, f64::sin, f64::cos),
            "cubic" => Self::new(name, |u| u - u * u * u / 6.0, |u| 1.0 - u * u / 2.0),
            "tanh-sin" => Self::new(
                name,
                |u| u.sin().tanh(),
                |u| {
                    let t = u.sin().tanh();
                    (1.0 - t * t) * u.cos()
                },
            ),
            other => Err(Error::UnknownCoupling(other.to_string())),
        }
    }

    pub const REGISTERED: [&'static str; 3] = ["sin", "cubic", "tanh-sin"];

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, u: f64) -> f64 {
        (self.value)(u)
    }

    pub fn derivative(&self, u: f64) -> f64 {
        (self.derivative)(u)
    }
}

#[derive(Debug, Clone)]
pub struct PhaseSystem {
    omega: Vec<f64>,
    constants: Option<Vec<f64>>,
    coupling: WeightedGraph,
    // one per coupling edge
    functions: Vec<OddCoupling>,
}

impl PhaseSystem {
    /// Kuramoto system with frequencies `omega` and coupling graph `A`.
    pub fn new(omega: Vec<f64>, coupling: WeightedGraph) -> Result<Self> {
        if omega.len() != coupling.n() {
            return Err(Error::DimensionMismatch {
                expected: coupling.n(),
                got: omega.len(),
            });
        }
        if let Some(&bad) = omega.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        let functions = vec![OddCoupling::sin(); coupling.edge_count()];
        Ok(Self {
            omega,
            constants: None,
            coupling,
            functions,
        })
    }

    /// Uses `f` on every link.
    pub fn with_uniform_coupling(mut self, f: OddCoupling) -> Self {
        self.functions = vec![f; self.coupling.edge_count()];
        self
    }

    pub fn with_edge_coupling(mut self, i: usize, j: usize, f: OddCoupling) -> Result<Self> {
        let k = self.coupling.edge_index(i, j).ok_or(Error::NoSuchEdge(i, j))?;
        self.functions[k] = f;
        Ok(self)
    }

    /// Node constants `C_i` replacing `omega` in the drift.
    pub fn with_constants(mut self, c: Vec<f64>) -> Result<Self> {
        if c.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: c.len(),
            });
        }
        self.constants = Some(c);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn coupling(&self) -> &WeightedGraph {
        &self.coupling
    }

    pub fn coupling_function(&self, edge: usize) -> &OddCoupling {
        &self.functions[edge]
    }

    fn drift(&self) -> &[f64] {
        self.constants.as_deref().unwrap_or(&self.omega)
    }

    /// Plain Kuramoto: every link uses `sin`.
    pub fn is_homogeneous_sin(&self) -> bool {
        self.functions.iter().all(|f| f.name() == "sin")
    }

    /// Common frequency of a locked state; the coupling terms cancel in
    /// the mean because every `O_ij` is odd.
    pub fn collective_frequency(&self) -> f64 {
        let c = self.drift();
        if c.is_empty() {
            0.0
        } else {
            c.iter().sum::<f64>() / c.len() as f64
        }
    }

    /// `dx/dt` at phases `x`.
    pub fn vector_field(&self, x: &[f64]) -> Vec<f64> {
        let mut f = self.drift().to_vec();
        for (k, e) in self.coupling.edges().iter().enumerate() {
            let o = e.w * self.functions[k].value(x[e.j] - x[e.i]);
            f[e.i] += o;
            f[e.j] -= o;
        }
        f
    }

    /// State record for given phases, without solving.
    pub fn state_at(&self, x: Vec<f64>) -> Result<PhaseLockedState> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        let omega = self.collective_frequency();
        let residual = self
            .vector_field(&x)
            .iter()
            .map(|f| (f - omega).abs())
            .fold(0.0, f64::max);
        Ok(PhaseLockedState {
            phases: x,
            omega,
            residual,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseLockedState {
    pub phases: Vec<f64>,
    /// Common frequency `Omega`.
    pub omega: f64,
    /// `max_i |dx_i/dt - Omega|`.
    pub residual: f64,
}

/// Damped Newton iteration for a locked state, gauge `x_0 = 0`.
pub fn find_phase_locked(sys: &PhaseSystem, x0: &[f64]) -> Result<PhaseLockedState> {
    let n = sys.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if n == 0 {
        return sys.state_at(Vec::new());
    }
    if !components(&sys.coupling).is_connected() {
        return Err(Error::Disconnected);
    }
    let scale = sys.omega.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = NEWTON_TOLERANCE * scale;
    let omega = sys.collective_frequency();
    let residual = |x: &[f64]| -> Vec<f64> {
        sys.vector_field(x).into_iter().map(|f| f - omega).collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut x: Vec<f64> = x0.iter().map(|v| v - x0[0]).collect();
    let mut r = residual(&x);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        if norm(&r) <= tol {
            return sys.state_at(x);
        }
        // reduced system: unknowns x_1..x_{n-1}, equations 1..n-1
        let jac = jacobian_matrix(sys, &x);
        let m = n - 1;
        let a = DMatrix::from_fn(m, m, |p, q| jac[(p + 1) * n + q + 1]);
        let b = DVector::from_fn(m, |p, _| -r[p + 1]);
        let Some(step) = a.lu().solve(&b) else {
            break;
        };
        let current = norm(&r);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let trial: Vec<f64> = (0..n)
                .map(|i| if i == 0 { 0.0 } else { x[i] + t * step[i - 1] })
                .collect();
            let rt = residual(&trial);
            if norm(&rt) < current {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm(&r) <= tol {
        return sys.state_at(x);
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_MAX_ITERATIONS,
        residual: norm(&r),
    })
}

/// Dense row-major `n x n` Jacobian of the vector field.
fn jacobian_matrix(sys: &PhaseSystem, x: &[f64]) -> Vec<f64> {
    let n = sys.n();
    let mut jac = vec![0.0; n * n];
    for (k, e) in sys.coupling.edges().iter().enumerate() {
        let w = e.w * sys.functions[k].derivative(x[e.j] - x[e.i]);
        jac[e.i * n + e.j] += w;
        jac[e.j * n + e.i] += w;
        jac[e.i * n + e.i] -= w;
        jac[e.j * n + e.j] -= w;
    }
    jac
}

/// Jacobian at a locked state: link weights `A_ij O'_ij(x_j - x_i)` on the
/// coupling graph. Links whose weight evaluates to exactly zero drop out.
pub fn kuramoto_jacobian(sys: &PhaseSystem, state: &PhaseLockedState) -> ZeroRowSumMatrix {
    let x = &state.phases;
    let g = sys
        .coupling
        .map_weights(|k, e| e.w * sys.functions[k].derivative(x[e.j] - x[e.i]))
        .expect("finite phases give finite weights");
    ZeroRowSumMatrix::new(g)
}

/// Phase difference folded into `[0, pi]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    (b - a).sin().atan2((b - a).cos()).abs()
}

/// Links with phase distance below `threshold` and whether they contain a
/// spanning tree of every component of the coupling graph.
pub fn phase_tree_rule(g: &WeightedGraph, x: &[f64], threshold: f64) -> PhaseTreeRule {
    let edges: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| phase_distance(x[e.i], x[e.j]) < threshold)
        .map(|(k, _)| k)
        .collect();
    let mut sets = DisjointSets::new(g.n());
    for &k in &edges {
        sets.union(g.edge(k).i, g.edge(k).j);
    }
    let spans = components(g).members.iter().all(|m| {
        let r = sets.find(m[0]);
        m.iter().all(|&v| sets.find(v) == r)
    });
    PhaseTreeRule {
        threshold,
        edges,
        spans,
    }
}

/// Certificate for a locked state. For plain Kuramoto with non-negative
/// coupling the report also lists the links with `|x_j - x_i| < pi/2`.
pub fn analyze_state(sys: &PhaseSystem, state: &PhaseLockedState) -> StabilityReport {
    let jac = kuramoto_jacobian(sys, state);
    let mut report = stability_certificate(jac.graph());
    if sys.is_homogeneous_sin() && sys.coupling.all_weights_nonnegative() {
        report.phase_rule = Some(phase_tree_rule(&sys.coupling, &state.phases, FRAC_PI_2));
    }
    report
}
