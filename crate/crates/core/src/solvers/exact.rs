//! Exact densest subgraph by parametric min cut.
//!
//! The reference formulation is Charikar's LP
//!
//! ```text
//! max  sum_e w_e y_e
//! s.t. y_e <= x_u, y_e <= x_v   for every e = {u, v}
//!      sum_v x_v = 1,  x, y >= 0
//! ```
//!
//! whose optimum equals the maximum degree density. Here the same optimum is
//! reached with Goldberg's cut construction: for a guess `g` the network
//!
//! * `s -> v` with capacity `d(v)` (weighted degree),
//! * `v -> t` with capacity `2g`,
//! * `u <-> v` with capacity `w(e)` in both directions
//!
//! has minimum cut `2 w(V) - 2 max_S (w(S) - g |S|)`, with `S` the source side.
//! Starting from `g = f(V)`, each cut yields a set of strictly larger density
//! until none exists (Dinkelbach's iteration), so the loop ends at the
//! optimum after finitely many cuts.

use super::flow::FlowNetwork;
use super::Densest;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet, WeightVector};

/// Computes a maximizer of `w(S) / |S|`.
///
/// When several sets are optimal the one with the fewest vertices is
/// returned, and among those the lexicographically smallest. If no edge has
/// positive weight the result is `{0}` with density 0 and `all_zero` set.
pub fn exact_densest(graph: &Graph, weights: &WeightVector) -> Result<Densest> {
    weights.check_graph(graph)?;
    if graph.n() == 0 {
        return Err(Error::Domain("the graph has no vertices".into()));
    }
    let active = vec![true; graph.n()];
    Ok(densest_with(graph, weights, &active, None, true).expect("nonempty vertex set"))
}

/// Exact solve without canonical tie-breaking; used in hot loops.
pub(crate) fn densest_fast(graph: &Graph, weights: &[f64]) -> Densest {
    let active = vec![true; graph.n()];
    densest_with(graph, weights, &active, None, false).expect("nonempty vertex set")
}

/// Densest set among the `active` vertices, optionally forced to contain
/// `forced`. Returns `None` when no vertex is active.
pub(crate) fn densest_with(
    graph: &Graph,
    weights: &[f64],
    active: &[bool],
    forced: Option<VertexId>,
    canonical: bool,
) -> Option<Densest> {
    let first = active.iter().position(|&a| a)?;
    let has_weight = graph
        .edges()
        .iter()
        .zip(weights)
        .any(|(&(u, v), &w)| w > 0.0 && active[u] && active[v]);
    if !has_weight {
        let v = forced.unwrap_or(first);
        return Some(Densest {
            set: VertexSet::new(vec![v]),
            density: 0.0,
            all_zero: true,
        });
    }

    let solver = CutSolver::new(graph, weights, active);
    let mut best = active.to_vec();
    let mut g = solver.density(&best);
    loop {
        let side = solver.min_cut(g, forced);
        if !side.iter().any(|&b| b) {
            break;
        }
        let f = solver.density(&side);
        if f > g {
            g = f;
            best = side;
        } else {
            break;
        }
    }

    let mut result = VertexSet::from_mask(&best);
    if canonical && forced.is_none() {
        result = solver.canonical(g, result);
    }
    let density = solver.density(&result.mask(graph.n()));
    Some(Densest {
        set: result,
        density,
        all_zero: false,
    })
}

struct CutSolver<'a> {
    graph: &'a Graph,
    weights: &'a [f64],
    active: &'a [bool],
    degree: Vec<f64>,
    eps: f64,
}

impl<'a> CutSolver<'a> {
    fn new(graph: &'a Graph, weights: &'a [f64], active: &'a [bool]) -> Self {
        let degree: Vec<f64> = (0..graph.n())
            .map(|v| {
                if active[v] {
                    graph.star_sum(weights, active, v)
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = degree.iter().sum();
        Self {
            graph,
            weights,
            active,
            degree,
            eps: 1e-12 * total.max(1.0),
        }
    }

    fn density(&self, mask: &[bool]) -> f64 {
        let size = mask.iter().filter(|&&b| b).count();
        self.graph.induced_weight_masked(self.weights, mask) / size as f64
    }

    /// Vertex side of the minimal minimum cut for guess `g`.
    fn min_cut(&self, g: f64, forced: Option<VertexId>) -> Vec<bool> {
        let n = self.graph.n();
        let (s, t) = (n, n + 1);
        let mut net = FlowNetwork::new(n + 2, self.eps);
        for v in (0..n).filter(|&v| self.active[v]) {
            let supply = if forced == Some(v) {
                f64::INFINITY
            } else {
                self.degree[v]
            };
            net.add_arc(s, v, supply, 0.0);
            net.add_arc(v, t, 2.0 * g, 0.0);
        }
        for (&(u, v), &w) in self.graph.edges().iter().zip(self.weights) {
            if w > 0.0 && self.active[u] && self.active[v] {
                net.add_arc(u, v, w, w);
            }
        }
        net.max_flow(s, t);
        let mut side = net.source_side(s);
        side.truncate(n);
        for (inside, &a) in side.iter_mut().zip(self.active) {
            *inside &= a;
        }
        side
    }

    /// Smallest-then-lexicographically-first optimal set.
    ///
    /// Every nonempty optimal set contains the inclusion-minimal optimal set
    /// through each of its members, so the canonical answer is among the
    /// minimal sets through single vertices. Cutting slightly above the
    /// optimum with one vertex pinned to the source isolates that set.
    fn canonical(&self, g: f64, fallback: VertexSet) -> VertexSet {
        let n = self.graph.n();
        let shift = 1e-9 * g.max(1.0) / n as f64;
        let floor = g - 1e-12 * g.max(1.0);
        let mut best = fallback;
        for v in (0..n).filter(|&v| self.active[v]) {
            let side = self.min_cut(g + shift, Some(v));
            let size = side.iter().filter(|&&b| b).count();
            if size > best.len() || self.density(&side) < floor {
                continue;
            }
            let candidate = VertexSet::from_mask(&side);
            if (candidate.len(), &candidate) < (best.len(), &best) {
                best = candidate;
            }
        }
        best
    }
}

/// Largest density over nonempty sets other than `best`.
///
/// Any other set either misses a member of `best` or contains a vertex
/// outside it, so the answer is the maximum of one constrained solve per
/// vertex: excluded if it belongs to `best`, forced in otherwise.
pub fn second_best_density(graph: &Graph, weights: &WeightVector, best: &VertexSet) -> Result<f64> {
    weights.check_graph(graph)?;
    best.check_graph(graph)?;
    if graph.n() < 2 {
        return Err(Error::Domain(
            "a graph with one vertex has no second-best set".into(),
        ));
    }
    let n = graph.n();
    let mut value = f64::NEG_INFINITY;
    for v in 0..n {
        let solved = if best.contains(v) {
            let mut active = vec![true; n];
            active[v] = false;
            densest_with(graph, weights, &active, None, false)
        } else {
            densest_with(graph, weights, &vec![true; n], Some(v), false)
        };
        if let Some(d) = solved {
            value = value.max(d.density);
        }
    }
    Ok(value)
}
