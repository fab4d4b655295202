//! Graphical stability calculus for symmetric Jacobians.
//!
//! Local stability of a steady state with a symmetric Jacobian `J` is decided
//! by the signs of its principal minors. For zero-row-sum Jacobians every
//! minor is, up to sign, a weighted forest sum on the network, which turns
//! the sign conditions into topological statements: positive spanning trees,
//! negative cuts, and weight bounds on unbranched segments.
//!
//! Modules follow that chain from raw graphs ([`graph`]) through minors
//! ([`minors`], [`symbolic`]), forest sums ([`forest_sums`]) and criteria
//! ([`criteria`]) to the model layers ([`kuramoto`], [`adaptive`]) and
//! sign-flip isospectrality ([`isospectral`]).

pub mod adaptive;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod forest_sums;
pub mod graph;
pub mod isospectral;
pub mod kuramoto;
pub mod matrix;
pub mod minors;
pub mod scalar;
pub mod symbolic;

pub use error::{Error, Result};
pub use forest_sums::{phi, spanning_tree_sum, PhiMethod, PhiValue, ZeroRowSumMatrix};
pub use graph::{Edge, IndexSubset, WeightedGraph};
pub use matrix::SymmetricMatrix;
pub use minors::{eigen_signs, jsc_verdict, principal_minor, Inertia, JscOptions, JscOutcome, JscStrategy, JscVerdict};
pub use scalar::{Ring, Scalar, SignClass};
