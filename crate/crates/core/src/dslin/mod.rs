//! DS-Lin: fixed-confidence densest-subgraph identification with linear
//! bandit estimation over queryable vertex subsets.

mod arms;
mod design;
mod qp;

pub use arms::ArmFamily;
pub use design::{DesignState, INVERSE_TOLERANCE, REFRESH_INTERVAL};
pub use qp::{qp_upper_bound, relaxed_bound, QpMode, EXACT_QP_LIMIT};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, WeightVector};
use crate::oracle::SamplingOracle;
use crate::solvers::{densest_fast, second_best_density};

/// Choice of the second-best term in the stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopMode {
    /// Uses the empirical best density itself.
    #[default]
    Conservative,
    /// Computes the best density over all other sets, at `n` exact solves
    /// per check.
    ExactSecondBest,
}

/// Hyperparameters of DS-Lin.
#[derive(Debug, Clone, PartialEq)]
pub struct DsLinParams {
    pub epsilon: f64,
    pub delta: f64,
    pub lambda: f64,
    /// Sub-Gaussian scale of the per-edge noise.
    pub r: f64,
    /// Bound on `||w||_2`.
    pub l: f64,
    /// Cap on the total number of rounds, initialization included.
    pub max_iters: u64,
    pub stop_mode: StopMode,
}

impl DsLinParams {
    /// Defaults for a graph with `m` edges: `lambda = 100`, `R = 1`,
    /// `L = 100 sqrt(m)` and 10,000 rounds after initialization.
    pub fn defaults(m: usize) -> Self {
        Self {
            epsilon: 0.01,
            delta: 0.05,
            lambda: 100.0,
            r: 1.0,
            l: (m as f64).sqrt() * 100.0,
            max_iters: m as u64 + 10_000,
            stop_mode: StopMode::Conservative,
        }
    }

    fn validate(&self, m: usize) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive, got {x}")))
            }
        };
        positive("epsilon", self.epsilon)?;
        positive("lambda", self.lambda)?;
        positive("R", self.r)?;
        if !(self.l.is_finite() && self.l >= 0.0) {
            return Err(Error::Domain(format!(
                "L must be nonnegative, got {}",
                self.l
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Domain(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.max_iters < m as u64 {
            return Err(Error::Domain(format!(
                "max_iters = {} is below the {m} initialization rounds",
                self.max_iters
            )));
        }
        Ok(())
    }
}

/// Terms of the stopping inequality
/// `f(S) - C width / |S| >= second_best + C U / 2 - epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopCheck {
    /// Empirical density of the empirical best set.
    pub best_density: f64,
    /// `||chi_{E(S)}||_{A^{-1}}` of the empirical best set.
    pub width: f64,
    pub size: usize,
    pub radius: f64,
    pub qp_bound: f64,
    pub second_best: f64,
    pub epsilon: f64,
}

impl StopCheck {
    pub fn holds(&self) -> bool {
        let lhs = self.best_density - self.radius * self.width / self.size as f64;
        let rhs = self.second_best + self.radius * self.qp_bound / 2.0 - self.epsilon;
        lhs >= rhs
    }
}

/// Index of the arm to pull next.
pub fn select_arm(state: &DesignState, family: &ArmFamily) -> usize {
    family.select(state.counts())
}

/// One row of the per-round diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DsLinTraceRow {
    /// Rounds completed.
    pub iteration: u64,
    /// Density of the empirical best set, under the true weights when they
    /// were supplied and under the estimate otherwise.
    pub incumbent_density: f64,
    pub confidence_radius: f64,
    /// `||w - w_hat||_1 / m`, when the true weights were supplied.
    pub estimation_error: Option<f64>,
}

/// Result of [`run_dslin`].
#[derive(Debug, Clone)]
pub struct DsLinOutcome {
    pub set: VertexSet,
    pub iterations: u64,
    /// The stopping rule fired.
    pub stopped: bool,
    /// The round cap was reached before the stopping rule fired.
    pub capped: bool,
    pub estimate: WeightVector,
    pub trace: Vec<DsLinTraceRow>,
}

/// Runs DS-Lin until the stopping rule holds or `max_iters` rounds have been
/// played.
///
/// The first `m` rounds initialize the design; the stopping rule is checked
/// after every round from then on. Arms without induced edges count as
/// rounds but issue no query. `truth`, when given, is used only for the
/// diagnostics.
pub fn run_dslin(
    graph: &Graph,
    family: &ArmFamily,
    oracle: &mut SamplingOracle,
    params: &DsLinParams,
    truth: Option<&WeightVector>,
) -> Result<DsLinOutcome> {
    let m = graph.m();
    params.validate(m)?;
    if m == 0 {
        return Err(Error::Domain("the graph has no edges".into()));
    }
    if let Some(w) = truth {
        w.check_graph(graph)?;
    }
    if family.rank(m) < m {
        return Err(Error::Domain(format!(
            "the arm family does not span all {m} edges"
        )));
    }
    let max_degree = graph.max_degree();
    let mut state = DesignState::new(m, params.lambda, family.len())?;
    let mut trace = Vec::new();

    let pull = |state: &mut DesignState, oracle: &mut SamplingOracle| -> Result<()> {
        let arm = select_arm(state, family);
        let support = family.support(arm);
        let reward = if support.is_empty() {
            0.0
        } else {
            oracle.sample_edges(support)?
        };
        state.update(arm, support, reward)
    };

    for _ in 0..m {
        pull(&mut state, oracle)?;
    }
    loop {
        let round = evaluate(graph, &state, params, max_degree, truth)?;
        trace.push(round.row);
        let stopped = round.stop;
        let capped = !stopped && state.t() >= params.max_iters;
        if stopped || capped {
            return Ok(DsLinOutcome {
                set: round.set,
                iterations: state.t(),
                stopped,
                capped,
                estimate: round.estimate,
                trace,
            });
        }
        pull(&mut state, oracle)?;
    }
}

struct Round {
    set: VertexSet,
    estimate: WeightVector,
    stop: bool,
    row: DsLinTraceRow,
}

fn evaluate(
    graph: &Graph,
    state: &DesignState,
    params: &DsLinParams,
    max_degree: usize,
    truth: Option<&WeightVector>,
) -> Result<Round> {
    let estimate = state.estimate()?;
    let best = densest_fast(graph, &estimate);
    let radius = state.confidence_radius(params.delta, params.r, params.l, max_degree)?;
    let width = state.width(&graph.induced_edges(&best.set));

    let mut check = StopCheck {
        best_density: best.density,
        width,
        size: best.set.len(),
        radius,
        qp_bound: 0.0,
        second_best: best.density,
        epsilon: params.epsilon,
    };
    // The bound and the second-best term only enter on the right-hand side
    // with nonnegative sign, so each is computed only while the inequality
    // could still hold.
    let mut stop = false;
    if params.stop_mode == StopMode::ExactSecondBest {
        check.second_best = 0.0;
        if check.holds() {
            check.second_best = second_best_density(graph, &estimate, &best.set)?;
        }
    }
    if check.holds() {
        check.qp_bound = qp::relaxed_bound(state.a_inv());
        if !check.holds() && state.m() <= EXACT_QP_LIMIT {
            check.qp_bound = qp::qp_upper_bound_unchecked(state.a_inv()).0;
        }
        stop = check.holds();
    }

    let row = DsLinTraceRow {
        iteration: state.t(),
        incumbent_density: match truth {
            Some(w) => graph.density(w, &best.set)?,
            None => best.density,
        },
        confidence_radius: radius,
        estimation_error: truth.map(|w| {
            w.iter()
                .zip(estimate.iter())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / w.len() as f64
        }),
    };
    Ok(Round {
        set: best.set,
        estimate,
        stop,
        row,
    })
}
