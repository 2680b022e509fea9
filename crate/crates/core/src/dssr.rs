//! DS-SR: fixed-budget densest-subgraph identification by successive
//! rejection of vertices, reusing degree samples across phases.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::oracle::SamplingOracle;
use crate::solvers::argmin_alive;

/// Per-phase sample counts for a budget `T` on `n` vertices.
///
/// Phase `t` runs for `t = 1..n`; vectors are indexed by `t - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetSchedule {
    pub budget: u64,
    pub n: usize,
    /// `sum_{i=1}^{n-1} 1/i`.
    pub harmonic: f64,
    /// `sum_{i=1}^{n+1} i`.
    pub overhead: u64,
    /// `ceil((T - overhead) / (harmonic (n - t)))`.
    pub t_tilde: Vec<u64>,
    /// `ceil(t_tilde / (2 (n - t + 1)))`.
    pub t_prime: Vec<u64>,
    /// `t_prime[t] - t_prime[t - 1]`, with `t_prime[0] = 0`.
    pub tau: Vec<u64>,
}

impl BudgetSchedule {
    pub fn phases(&self) -> usize {
        self.n - 1
    }

    /// `sum_{i <= t} tau_i`, for phase `t >= 1`.
    pub fn cumulative_tau(&self, t: usize) -> u64 {
        self.t_prime[t - 1]
    }
}

/// `(n + 1)(n + 2) / 2`.
pub fn schedule_overhead(n: usize) -> u64 {
    let n = n as u64;
    (n + 1) * (n + 2) / 2
}

pub fn build_schedule(budget: u64, n: usize) -> Result<BudgetSchedule> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "DS-SR needs at least 2 vertices, got {n}"
        )));
    }
    let overhead = schedule_overhead(n);
    if budget <= overhead {
        return Err(Error::BudgetTooSmall {
            budget,
            n,
            min_feasible: overhead + 1,
        });
    }
    let harmonic: f64 = (1..n).map(|i| 1.0 / i as f64).sum();
    let spare = (budget - overhead) as f64;
    let mut t_tilde = Vec::with_capacity(n - 1);
    let mut t_prime = Vec::with_capacity(n - 1);
    let mut tau = Vec::with_capacity(n - 1);
    let mut previous = 0u64;
    for t in 1..n {
        let tilde = (spare / (harmonic * (n - t) as f64)).ceil() as u64;
        let prime = tilde.div_ceil(2 * (n - t + 1) as u64);
        t_tilde.push(tilde);
        t_prime.push(prime);
        tau.push(prime.saturating_sub(previous));
        previous = prime;
    }
    Ok(BudgetSchedule {
        budget,
        n,
        harmonic,
        overhead,
        t_tilde,
        t_prime,
        tau,
    })
}

/// Surviving vertices and their empirical degrees.
#[derive(Debug, Clone)]
pub struct PeelingState<'g> {
    graph: &'g Graph,
    alive: Vec<bool>,
    survivors: usize,
    last_removed: Option<VertexId>,
    degree: Vec<f64>,
    samples: Vec<u64>,
}

impl<'g> PeelingState<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let n = graph.n();
        Self {
            graph,
            alive: vec![true; n],
            survivors: n,
            last_removed: None,
            degree: vec![0.0; n],
            samples: vec![0; n],
        }
    }

    pub fn survivors(&self) -> VertexSet {
        VertexSet::from_mask(&self.alive)
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive[v]
    }

    pub fn last_removed(&self) -> Option<VertexId> {
        self.last_removed
    }

    pub fn degree(&self, v: VertexId) -> f64 {
        self.degree[v]
    }

    pub fn samples(&self, v: VertexId) -> u64 {
        self.samples[v]
    }

    /// Seeds the carried estimate of `v`, as if `samples` earlier
    /// observations had averaged `mean`.
    pub fn set_prior(&mut self, v: VertexId, mean: f64, samples: u64) {
        self.degree[v] = mean;
        self.samples[v] = samples;
    }

    /// Refreshes the empirical degree of `v` for phase `t`.
    ///
    /// * No surviving neighbors: the degree is 0 and nothing is queried.
    /// * `v` is not adjacent to the last removed vertex: its star is
    ///   unchanged, so `tau_t` new observations are merged into the carried
    ///   mean.
    /// * Otherwise the history is dropped and `sum_{i <= t} tau_i` new
    ///   observations replace it.
    pub fn sample_phase_vertex(
        &mut self,
        oracle: &mut SamplingOracle,
        schedule: &BudgetSchedule,
        t: usize,
        v: VertexId,
    ) -> Result<()> {
        if !self.alive[v] {
            return Err(Error::Domain(format!("vertex {v} has been removed")));
        }
        if t == 0 || t > schedule.phases() {
            return Err(Error::Domain(format!(
                "phase {t} is outside 1..{}",
                schedule.n
            )));
        }
        let star = self.graph.star_edges(&self.alive, v);
        if star.is_empty() {
            self.degree[v] = 0.0;
            self.samples[v] = 0;
            return Ok(());
        }
        let changed = self
            .last_removed
            .is_some_and(|u| self.graph.neighbors(v).iter().any(|&(x, _)| x == u));
        if changed {
            let k = schedule.cumulative_tau(t);
            self.degree[v] = observe_mean(oracle, &star, k)?;
            self.samples[v] = k;
        } else {
            let tau = schedule.tau[t - 1];
            if tau == 0 {
                return Ok(());
            }
            let fresh = observe_mean(oracle, &star, tau)?;
            let prior = self.samples[v];
            self.degree[v] = if prior == 0 {
                fresh
            } else {
                let old = self.degree[v];
                old + tau as f64 / (prior + tau) as f64 * (fresh - old)
            };
            self.samples[v] = prior + tau;
        }
        Ok(())
    }

    /// Half the empirical degree sum over the number of survivors.
    pub fn empirical_quality(&self) -> f64 {
        let total: f64 = (0..self.alive.len())
            .filter(|&v| self.alive[v])
            .map(|v| self.degree[v])
            .sum();
        0.5 * total / self.survivors as f64
    }

    /// Removes a survivor of minimum empirical degree (smallest index on
    /// ties) and returns it.
    pub fn remove_min(&mut self) -> VertexId {
        let v = argmin_alive(&self.degree, &self.alive);
        self.alive[v] = false;
        self.survivors -= 1;
        self.last_removed = Some(v);
        v
    }
}

fn observe_mean(oracle: &mut SamplingOracle, star: &[usize], k: u64) -> Result<f64> {
    let mut mean = 0.0;
    for i in 1..=k {
        let x = oracle.sample_edges(star)?;
        mean += (x - mean) / i as f64;
    }
    Ok(mean)
}

/// One row of the per-phase diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DssrPhase {
    pub phase: usize,
    pub survivors: usize,
    pub f_hat: f64,
    pub cumulative_queries: u64,
    pub cumulative_single_edge_queries: u64,
}

/// Result of [`run_dssr`].
#[derive(Debug, Clone)]
pub struct DssrOutcome {
    pub set: VertexSet,
    pub removal_order: Vec<VertexId>,
    pub phases: Vec<DssrPhase>,
    /// Queries issued by this run.
    pub queries: u64,
}

/// Runs DS-SR with budget `budget`.
///
/// Each phase samples every survivor, records the empirical quality of the
/// surviving set and removes the vertex of least empirical degree. The
/// output is the surviving set of highest empirical quality over all phases,
/// the earliest one on ties.
pub fn run_dssr(graph: &Graph, oracle: &mut SamplingOracle, budget: u64) -> Result<DssrOutcome> {
    let schedule = build_schedule(budget, graph.n())?;
    let n = graph.n();
    let start = oracle.total_queries();
    let start_single = oracle.single_edge_queries();
    let mut state = PeelingState::new(graph);
    let mut removal_order = Vec::with_capacity(n - 1);
    let mut phases = Vec::with_capacity(n - 1);
    let mut best = (f64::NEG_INFINITY, 0);

    for t in 1..n {
        for v in 0..n {
            if state.is_alive(v) {
                state.sample_phase_vertex(oracle, &schedule, t, v)?;
            }
        }
        let f_hat = state.empirical_quality();
        if f_hat > best.0 {
            best = (f_hat, t - 1);
        }
        phases.push(DssrPhase {
            phase: t,
            survivors: n - t + 1,
            f_hat,
            cumulative_queries: oracle.total_queries() - start,
            cumulative_single_edge_queries: oracle.single_edge_queries() - start_single,
        });
        removal_order.push(state.remove_min());
    }

    let queries = oracle.total_queries() - start;
    if queries > budget {
        return Err(Error::BudgetExceeded {
            used: queries,
            budget,
        });
    }
    let removed = &removal_order[..best.1];
    let set = (0..n).filter(|v| !removed.contains(v)).collect();
    Ok(DssrOutcome {
        set,
        removal_order,
        phases,
        queries,
    })
}
