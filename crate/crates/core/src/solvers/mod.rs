//! Densest-subgraph solvers for known weights.

mod brute;
mod exact;
mod flow;
mod peeling;

pub use brute::{brute_force_densest, BRUTE_FORCE_LIMIT};
pub use exact::{exact_densest, second_best_density};
pub use peeling::{greedy_peeling, Peeling};

pub(crate) use exact::densest_fast;
pub(crate) use peeling::argmin_alive;

use crate::graph::VertexSet;

/// A densest set and its density.
#[derive(Debug, Clone, PartialEq)]
pub struct Densest {
    pub set: VertexSet,
    pub density: f64,
    /// No edge carried positive weight, so every set has density zero.
    pub all_zero: bool,
}
