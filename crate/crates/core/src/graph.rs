//! Undirected graphs with dense vertex and edge indices, per-edge weights,
//! vertex subsets, and the density quantities every algorithm shares.

use std::ops::Deref;

use crate::error::{Error, Result};

/// Vertex index in `0..n`.
pub type VertexId = usize;
/// Edge index in `0..m`.
pub type EdgeId = usize;

/// Immutable simple undirected graph.
///
/// Edges are stored as `(u, v)` with `u < v`. Each vertex keeps its incident
/// edges as `(neighbor, edge)` pairs in ascending edge-index order, which fixes
/// the summation order of every star sum in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    labels: Vec<String>,
}

impl Graph {
    /// Builds a graph on `n` vertices labelled `"0".."n-1"`.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let labels = (0..n).map(|v| v.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    /// Builds a graph whose vertex `i` carries `labels[i]`.
    ///
    /// Endpoints are normalised to `u < v`. Self-loops, duplicate edges and
    /// out-of-range endpoints are rejected.
    pub fn with_labels(labels: Vec<String>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut normalised = Vec::with_capacity(edges.len());
        for (index, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::Domain(format!(
                    "edge {index} = ({a}, {b}) has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Domain(format!("edge {index} is a self-loop on {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::Domain(format!("edge ({u}, {v}) appears twice")));
            }
            let e = normalised.len();
            normalised.push((u, v));
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        Ok(Self {
            edges: normalised,
            adjacency,
            labels,
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Incident `(neighbor, edge)` pairs of `v`, ascending by edge index.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    /// Largest unweighted degree; 0 for an empty graph.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edge indices of `E(S)` in ascending order.
    pub fn induced_edges(&self, set: &VertexSet) -> Vec<EdgeId> {
        let mask = set.mask(self.n());
        self.induced_edges_masked(&mask)
    }

    pub(crate) fn induced_edges_masked(&self, mask: &[bool]) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| mask[u] && mask[v])
            .map(|(e, _)| e)
            .collect()
    }

    /// Edges joining `v` to members of `mask`, ascending by edge index.
    pub fn star_edges(&self, mask: &[bool], v: VertexId) -> Vec<EdgeId> {
        self.adjacency[v]
            .iter()
            .filter(|&&(u, _)| mask[u])
            .map(|&(_, e)| e)
            .collect()
    }

    /// Weighted degree of `v` towards the members of `mask`.
    pub(crate) fn star_sum(&self, weights: &[f64], mask: &[bool], v: VertexId) -> f64 {
        self.adjacency[v]
            .iter()
            .filter(|&&(u, _)| mask[u])
            .map(|&(_, e)| weights[e])
            .sum()
    }

    /// Degree density `w(S) / |S|`.
    pub fn density(&self, weights: &WeightVector, set: &VertexSet) -> Result<f64> {
        weights.check_graph(self)?;
        if set.is_empty() {
            return Err(Error::Domain(
                "density of the empty set is undefined".into(),
            ));
        }
        set.check_graph(self)?;
        Ok(self.induced_weight(weights, set) / set.len() as f64)
    }

    /// `w(S)`, summed in ascending edge order.
    pub fn induced_weight(&self, weights: &WeightVector, set: &VertexSet) -> f64 {
        let mask = set.mask(self.n());
        self.induced_weight_masked(weights, &mask)
    }

    pub(crate) fn induced_weight_masked(&self, weights: &[f64], mask: &[bool]) -> f64 {
        self.edges
            .iter()
            .zip(weights)
            .filter(|(&(u, v), _)| mask[u] && mask[v])
            .map(|(_, &w)| w)
            .sum()
    }

    /// Weighted degree of `v` inside `G[S]`.
    pub fn degree_in(&self, weights: &WeightVector, set: &VertexSet, v: VertexId) -> Result<f64> {
        weights.check_graph(self)?;
        set.check_graph(self)?;
        if !set.contains(v) {
            return Err(Error::Domain(format!(
                "vertex {v} is not a member of the set"
            )));
        }
        let mask = set.mask(self.n());
        Ok(self.star_sum(weights, &mask, v))
    }
}

/// Sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    /// Sorts and deduplicates `members`.
    pub fn new(mut members: Vec<VertexId>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    /// Every vertex of a graph on `n` vertices.
    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Self(
            mask.iter()
                .enumerate()
                .filter(|(_, &inside)| inside)
                .map(|(v, _)| v)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.0 {
            mask[v] = true;
        }
        mask
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// Fails when a member is not a vertex of `graph`.
    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= graph.n() => Err(Error::Domain(format!(
                "vertex {v} is outside 0..{}",
                graph.n()
            ))),
            _ => Ok(()),
        }
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl Deref for VertexSet {
    type Target = [VertexId];

    fn deref(&self) -> &[VertexId] {
        &self.0
    }
}

/// Nonnegative finite weight per edge, addressed by edge index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((e, w)) = values
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidWeights(format!(
                "edge {e} has weight {w}; weights must be finite and nonnegative"
            )));
        }
        Ok(Self(values))
    }

    /// Clips negative entries to zero; fails on NaN or infinities.
    pub fn clipped(mut values: Vec<f64>) -> Result<Self> {
        for w in &mut values {
            if !w.is_finite() {
                return Err(Error::NonFinite(format!("weight {w}")));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        Ok(Self(values))
    }

    pub fn uniform(m: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        if self.0.len() == graph.m() {
            Ok(())
        } else {
            Err(Error::InvalidWeights(format!(
                "{} weights for a graph with {} edges",
                self.0.len(),
                graph.m()
            )))
        }
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn induced_edges_of_triangle() {
        let k3 = complete(3);
        assert_eq!(k3.induced_edges(&VertexSet::full(3)), vec![0, 1, 2]);
        assert!(k3.induced_edges(&VertexSet::new(vec![0])).is_empty());
    }

    #[test]
    fn lollipop_triangle_edges() {
        let g = lollipop();
        assert_eq!(
            g.induced_edges(&VertexSet::new(vec![0, 1, 2])),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn density_examples() {
        let k3 = complete(3);
        let d = k3.density(&unit(&k3), &VertexSet::full(3)).unwrap();
        assert_eq!(d, 1.0);

        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let w = WeightVector::new(vec![1.0, 3.0]).unwrap();
        assert_eq!(path.density(&w, &VertexSet::new(vec![1, 2])).unwrap(), 1.5);
        let all = path.density(&w, &VertexSet::full(3)).unwrap();
        assert!((all - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn density_of_empty_set_is_an_error() {
        let k3 = complete(3);
        assert!(matches!(
            k3.density(&unit(&k3), &VertexSet::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn degree_examples() {
        let k3 = complete(3);
        for v in 0..3 {
            assert_eq!(
                k3.degree_in(&unit(&k3), &VertexSet::full(3), v).unwrap(),
                2.0
            );
        }
        let g = lollipop();
        let w = unit(&g);
        assert_eq!(g.degree_in(&w, &VertexSet::full(4), 0).unwrap(), 3.0);
        assert_eq!(
            g.degree_in(&w, &VertexSet::new(vec![1, 3]), 3).unwrap(),
            0.0
        );
        assert!(g.degree_in(&w, &VertexSet::new(vec![1, 2]), 0).is_err());
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(complete(3).max_degree(), 2);
        assert_eq!(star(3).max_degree(), 3);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_is_consistent() {
        let g = lollipop();
        let mut count = vec![0; g.m()];
        for v in 0..g.n() {
            for &(u, e) in g.neighbors(v) {
                let (a, b) = g.edge(e);
                assert!((a, b) == (u.min(v), u.max(v)));
                count[e] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
    }

    #[test]
    fn weight_validation() {
        assert!(WeightVector::new(vec![1.0, -0.5]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
        assert_eq!(
            WeightVector::clipped(vec![-0.2, 1.0]).unwrap().as_slice(),
            &[0.0, 1.0]
        );
    }
}
