//! Comparison algorithms: Naive equal-split averaging and R-Oracle.

use rand::Rng;

use crate::dslin::ArmFamily;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, WeightVector};
use crate::oracle::SamplingOracle;
use crate::solvers::exact_densest;

/// Result of [`run_naive`].
#[derive(Debug, Clone)]
pub struct NaiveOutcome {
    pub set: VertexSet,
    /// Running per-edge averages of the equal-split rewards.
    pub averages: Vec<f64>,
    /// Number of sampled arms that contained each edge.
    pub edge_visits: Vec<u64>,
}

/// Plays `budget` uniformly random arms, splits each reward equally over the
/// arm's induced edges, and solves the densest subgraph on the per-edge
/// averages (negative averages read as 0).
///
/// Arms without induced edges use up their round without a query.
pub fn run_naive(
    graph: &Graph,
    family: &ArmFamily,
    oracle: &mut SamplingOracle,
    budget: u64,
    rng: &mut impl Rng,
) -> Result<NaiveOutcome> {
    if budget == 0 {
        return Err(Error::Domain("Naive needs a positive budget".into()));
    }
    let m = graph.m();
    let mut averages = vec![0.0; m];
    let mut edge_visits = vec![0u64; m];
    for _ in 0..budget {
        let arm = rng.random_range(0..family.len());
        let support = family.support(arm);
        if support.is_empty() {
            continue;
        }
        let share = oracle.sample_edges(support)? / support.len() as f64;
        for &e in support {
            edge_visits[e] += 1;
            averages[e] += (share - averages[e]) / edge_visits[e] as f64;
        }
    }
    let clipped = WeightVector::clipped(averages.clone())?;
    let set = exact_densest(graph, &clipped)?.set;
    Ok(NaiveOutcome {
        set,
        averages,
        edge_visits,
    })
}

/// Per-edge prior intervals `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Intervals {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Intervals {
    /// `[max(w - 1, 0), w + 1]` around the true weights. With `literal`, the
    /// lower end is `min(w - 1, 0)` instead, floored at 0, which is always 0.
    pub fn around(weights: &WeightVector, literal: bool) -> Self {
        let lower = weights
            .iter()
            .map(|&w| if literal { 0.0 } else { (w - 1.0).max(0.0) })
            .collect();
        let upper = weights.iter().map(|&w| w + 1.0).collect();
        Self { lower, upper }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }
}

/// Result of R-Oracle.
#[derive(Debug, Clone)]
pub struct ROracleOutcome {
    pub set: VertexSet,
    pub intervals: Intervals,
    /// Single-edge samples drawn per edge.
    pub samples: Vec<u64>,
}

impl ROracleOutcome {
    pub fn total_samples(&self) -> u64 {
        self.samples.iter().sum()
    }
}

/// `ceil(m width^2 ln(2m / gamma) / (epsilon^2 f^2))`.
pub fn r_oracle_samples(m: usize, width: f64, gamma: f64, epsilon: f64, f: f64) -> u64 {
    let m = m as f64;
    (m * width * width * (2.0 * m / gamma).ln() / (epsilon * epsilon * f * f)).ceil() as u64
}

/// R-Oracle with intervals built from the hidden weights by
/// [`Intervals::around`].
pub fn run_r_oracle(
    graph: &Graph,
    hidden: &WeightVector,
    oracle: &mut SamplingOracle,
    gamma: f64,
    epsilon: f64,
    literal: bool,
) -> Result<ROracleOutcome> {
    hidden.check_graph(graph)?;
    let intervals = Intervals::around(hidden, literal);
    run_r_oracle_with_intervals(graph, &intervals, oracle, gamma, epsilon)
}

/// Narrows every nondegenerate interval by sampling its edge alone, then
/// solves the densest subgraph on the narrowed lower ends.
pub fn run_r_oracle_with_intervals(
    graph: &Graph,
    prior: &Intervals,
    oracle: &mut SamplingOracle,
    gamma: f64,
    epsilon: f64,
) -> Result<ROracleOutcome> {
    let m = graph.m();
    if prior.len() != m || prior.upper.len() != m {
        return Err(Error::InvalidWeights(format!(
            "{} intervals for a graph with {m} edges",
            prior.len()
        )));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    for (e, (&l, &r)) in prior.lower.iter().zip(&prior.upper).enumerate() {
        if !(l.is_finite() && r.is_finite() && l <= r) {
            return Err(Error::InvalidWeights(format!(
                "edge {e} has interval [{l}, {r}]"
            )));
        }
    }

    let mut lower = prior.lower.clone();
    let mut upper = prior.upper.clone();
    let mut samples = vec![0u64; m];
    let open: Vec<usize> = (0..m).filter(|&e| lower[e] < upper[e]).collect();
    if !open.is_empty() {
        let floor = WeightVector::clipped(prior.lower.clone())?;
        let base = exact_densest(graph, &floor)?;
        if base.density <= 0.0 {
            return Err(Error::DegenerateIntervals);
        }
        let f = base.density;
        let half_width = epsilon * f / (2.0 * m as f64).sqrt();
        for e in open {
            let (l, r) = (prior.lower[e], prior.upper[e]);
            let k = r_oracle_samples(m, r - l, gamma, epsilon, f);
            let mut mean = 0.0;
            for i in 1..=k {
                mean += (oracle.sample_edges(&[e])? - mean) / i as f64;
            }
            samples[e] = k;
            let p = mean.clamp(l, r);
            lower[e] = l.max(p - half_width);
            upper[e] = r.min(p + half_width);
        }
    }

    let set = exact_densest(graph, &WeightVector::clipped(lower.clone())?)?.set;
    Ok(ROracleOutcome {
        set,
        intervals: Intervals { lower, upper },
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::NoiseModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn naive_on_a_triangle() {
        let k3 = complete(3);
        let w = unit(&k3);
        let family = ArmFamily::new(&k3, vec![VertexSet::full(3)]).unwrap();
        let mut oracle = SamplingOracle::new(&k3, &w, NoiseModel::None, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = run_naive(&k3, &family, &mut oracle, 10, &mut rng).unwrap();
        assert_eq!(out.averages, vec![1.0, 1.0, 1.0]);
        assert_eq!(k3.density(&w, &out.set).unwrap(), 1.0);
        assert_eq!(oracle.total_queries(), 10);
    }

    #[test]
    fn naive_rejects_zero_budget() {
        let k3 = complete(3);
        let w = unit(&k3);
        let family = ArmFamily::new(&k3, vec![VertexSet::full(3)]).unwrap();
        let mut oracle = SamplingOracle::new(&k3, &w, NoiseModel::None, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(run_naive(&k3, &family, &mut oracle, 0, &mut rng).is_err());
    }

    #[test]
    fn naive_skips_edgeless_arms() {
        let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let w = unit(&g);
        let family = ArmFamily::new(&g, vec![VertexSet::new(vec![2, 3])]).unwrap();
        let mut oracle = SamplingOracle::new(&g, &w, NoiseModel::None, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = run_naive(&g, &family, &mut oracle, 5, &mut rng).unwrap();
        assert_eq!(oracle.total_queries(), 0);
        assert_eq!(out.edge_visits, vec![0]);
    }

    #[test]
    fn sample_count_example() {
        assert_eq!(r_oracle_samples(3, 2.0, 0.9, 0.9, 2.0), 8);
    }

    #[test]
    fn degenerate_intervals_need_no_samples() {
        let g = lollipop();
        let w = WeightVector::new(vec![1.0, 1.0, 1.0, 0.5]).unwrap();
        let exact = Intervals {
            lower: w.to_vec(),
            upper: w.to_vec(),
        };
        let mut oracle = SamplingOracle::new(&g, &w, NoiseModel::None, 0).unwrap();
        let out = run_r_oracle_with_intervals(&g, &exact, &mut oracle, 0.9, 0.9).unwrap();
        assert_eq!(out.total_samples(), 0);
        assert_eq!(out.set, exact_densest(&g, &w).unwrap().set);
    }

    #[test]
    fn literal_lower_ends_are_degenerate() {
        let k3 = complete(3);
        let w = WeightVector::uniform(3, 5.0).unwrap();
        let mut oracle = SamplingOracle::new(&k3, &w, NoiseModel::None, 0).unwrap();
        assert!(matches!(
            run_r_oracle(&k3, &w, &mut oracle, 0.9, 0.9, true),
            Err(Error::DegenerateIntervals)
        ));
    }

    #[test]
    fn narrowed_intervals_stay_inside_the_prior() {
        let g = lollipop();
        let w = WeightVector::new(vec![3.0, 4.0, 5.0, 2.0]).unwrap();
        let mut oracle =
            SamplingOracle::new(&g, &w, NoiseModel::gaussian(1.0).unwrap(), 9).unwrap();
        let out = run_r_oracle(&g, &w, &mut oracle, 0.9, 0.9, false).unwrap();
        let prior = Intervals::around(&w, false);
        for e in 0..g.m() {
            let (l, r) = (out.intervals.lower[e], out.intervals.upper[e]);
            assert!(prior.lower[e] <= l && l <= r && r <= prior.upper[e]);
        }
        assert_eq!(out.total_samples(), oracle.single_edge_queries());
    }
}
