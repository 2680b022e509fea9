//! Densest-subgraph discovery when edge weights are hidden behind a noisy
//! oracle that only reports sums over queried edge subsets.
//!
//! * [`graph`]: graphs, vertex sets, weights and density.
//! * [`solvers`]: exact, brute-force and greedy solvers for known weights.
//! * [`oracle`]: the simulated sampling oracle.
//! * [`dslin`]: the fixed-confidence algorithm DS-Lin.
//! * [`dssr`]: the fixed-budget algorithm DS-SR.
//! * [`baselines`]: Naive and R-Oracle.
//! * [`bench`]: experiment configuration, knockout weights and CSV output.

pub mod baselines;
pub mod bench;
pub mod dslin;
pub mod dssr;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, VertexId, VertexSet, WeightVector};
pub use oracle::{NoiseModel, SamplingOracle};
pub use solvers::{
    brute_force_densest, exact_densest, greedy_peeling, second_best_density, Densest,
};
