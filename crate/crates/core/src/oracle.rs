//! Simulated sampling oracle with blurred-graph feedback.
//!
//! A query names a set of edges and returns the sum of their weights, each
//! perturbed by independent Gaussian noise. The generator is ChaCha8 seeded
//! from the oracle seed; query `q` reads from stream `q` at word position 0,
//! so every observation depends only on `(seed, q)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, VertexSet, WeightVector};

/// Per-edge observation noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Observations equal the exact sums.
    None,
    /// Each edge adds an independent `N(0, scale^2)` draw.
    Gaussian { scale: f64 },
}

impl NoiseModel {
    pub fn gaussian(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Domain(format!(
                "noise scale must be finite and positive, got {scale}"
            )));
        }
        Ok(Self::Gaussian { scale })
    }
}

/// Seeded source of noisy edge-subset sums that counts every query.
#[derive(Debug, Clone)]
pub struct SamplingOracle {
    weights: Vec<f64>,
    noise: NoiseModel,
    seed: u64,
    rng: ChaCha8Rng,
    total_queries: u64,
    histogram: Vec<u64>,
}

impl SamplingOracle {
    pub fn new(
        graph: &Graph,
        weights: &WeightVector,
        noise: NoiseModel,
        seed: u64,
    ) -> Result<Self> {
        weights.check_graph(graph)?;
        if let NoiseModel::Gaussian { scale } = noise {
            NoiseModel::gaussian(scale)?;
        }
        Ok(Self {
            weights: weights.to_vec(),
            noise,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            total_queries: 0,
            histogram: Vec::new(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    /// One noisy observation of `sum_{e in edges} w(e)`, summed in the given
    /// order.
    pub fn sample_edges(&mut self, edges: &[EdgeId]) -> Result<f64> {
        if edges.is_empty() {
            return Err(Error::Domain("cannot query an empty edge set".into()));
        }
        if let Some(&e) = edges.iter().find(|&&e| e >= self.weights.len()) {
            return Err(Error::Domain(format!(
                "edge {e} is outside 0..{}",
                self.weights.len()
            )));
        }
        let value = match self.noise {
            NoiseModel::None => edges.iter().map(|&e| self.weights[e]).sum(),
            NoiseModel::Gaussian { scale } => {
                self.rng.set_stream(self.total_queries);
                self.rng.set_word_pos(0);
                let mut sum = 0.0;
                for &e in edges {
                    let z: f64 = StandardNormal.sample(&mut self.rng);
                    sum += self.weights[e] + scale * z;
                }
                sum
            }
        };
        self.record(edges.len());
        Ok(value)
    }

    /// One observation of the edges joining `v` to the rest of `set`.
    pub fn sample_vertex_star(
        &mut self,
        graph: &Graph,
        set: &VertexSet,
        v: VertexId,
    ) -> Result<f64> {
        set.check_graph(graph)?;
        if !set.contains(v) {
            return Err(Error::Domain(format!(
                "vertex {v} is not a member of the set"
            )));
        }
        let star = graph.star_edges(&set.mask(graph.n()), v);
        if star.is_empty() {
            return Err(Error::Domain(format!(
                "vertex {v} has no neighbors inside the set"
            )));
        }
        self.sample_edges(&star)
    }

    fn record(&mut self, size: usize) {
        if self.histogram.len() <= size {
            self.histogram.resize(size + 1, 0);
        }
        self.histogram[size] += 1;
        self.total_queries += 1;
    }

    pub fn total_queries(&self) -> u64 {
        self.total_queries
    }

    pub fn single_edge_queries(&self) -> u64 {
        self.histogram.get(1).copied().unwrap_or(0)
    }

    /// `histogram()[s]` counts the queries of `s` edges.
    pub fn histogram(&self) -> &[u64] {
        &self.histogram
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn path() -> (Graph, WeightVector) {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        (g, WeightVector::new(vec![2.0, 3.0]).unwrap())
    }

    #[test]
    fn noiseless_sums_are_exact() {
        let (g, w) = path();
        let mut oracle = SamplingOracle::new(&g, &w, NoiseModel::None, 7).unwrap();
        for _ in 0..5 {
            assert_eq!(oracle.sample_edges(&[0, 1]).unwrap(), 5.0);
        }
        assert_eq!(oracle.total_queries(), 5);
        assert_eq!(oracle.histogram(), &[0, 0, 5]);
    }

    #[test]
    fn replaying_a_seed_reproduces_observations() {
        let (g, w) = path();
        let noise = NoiseModel::gaussian(1.0).unwrap();
        let run = |seed| {
            let mut o = SamplingOracle::new(&g, &w, noise, seed).unwrap();
            (0..20)
                .map(|i| {
                    o.sample_edges(if i % 2 == 0 { &[0] } else { &[0, 1] })
                        .unwrap()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3), run(4));
    }

    #[test]
    fn gaussian_mean_converges() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let w = WeightVector::new(vec![4.0]).unwrap();
        let mut oracle =
            SamplingOracle::new(&g, &w, NoiseModel::gaussian(1.0).unwrap(), 11).unwrap();
        let n = 100_000;
        let mean = (0..n)
            .map(|_| oracle.sample_edges(&[0]).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 4.0).abs() < 0.02, "mean {mean}");
        assert_eq!(oracle.single_edge_queries(), n);
    }

    #[test]
    fn empty_queries_are_rejected() {
        let (g, w) = path();
        let mut oracle = SamplingOracle::new(&g, &w, NoiseModel::None, 0).unwrap();
        assert!(matches!(oracle.sample_edges(&[]), Err(Error::Domain(_))));
        assert_eq!(oracle.total_queries(), 0);
    }

    #[test]
    fn vertex_stars() {
        let k3 = complete(3);
        let mut oracle = SamplingOracle::new(&k3, &unit(&k3), NoiseModel::None, 0).unwrap();
        assert_eq!(
            oracle
                .sample_vertex_star(&k3, &VertexSet::full(3), 0)
                .unwrap(),
            2.0
        );
        assert_eq!(
            oracle
                .sample_vertex_star(&k3, &VertexSet::new(vec![0, 2]), 0)
                .unwrap(),
            1.0
        );
        assert_eq!(oracle.single_edge_queries(), 1);
        assert!(oracle
            .sample_vertex_star(&k3, &VertexSet::new(vec![0]), 0)
            .is_err());

        let zero = WeightVector::uniform(3, 0.0).unwrap();
        let mut oracle = SamplingOracle::new(&k3, &zero, NoiseModel::None, 0).unwrap();
        assert_eq!(
            oracle
                .sample_vertex_star(&k3, &VertexSet::full(3), 1)
                .unwrap(),
            0.0
        );
    }
}
