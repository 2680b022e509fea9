use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet, WeightVector};

/// Outcome of greedy peeling.
#[derive(Debug, Clone, PartialEq)]
pub struct Peeling {
    pub set: VertexSet,
    pub density: f64,
    /// Vertices in the order they were removed; `n - 1` entries.
    pub removal_order: Vec<VertexId>,
    /// Half the degree sum over the size for every prefix, from `V` down to
    /// the last surviving vertex.
    pub prefix_quality: Vec<f64>,
}

/// Charikar's greedy peeling.
///
/// Repeatedly removes a vertex of minimum weighted degree (smallest index on
/// ties) and returns the densest intermediate set (the largest one on ties).
pub fn greedy_peeling(graph: &Graph, weights: &WeightVector) -> Result<Peeling> {
    weights.check_graph(graph)?;
    let n = graph.n();
    if n == 0 {
        return Err(Error::Domain("the graph has no vertices".into()));
    }
    let mut alive = vec![true; n];
    let mut degree: Vec<f64> = (0..n).map(|v| graph.star_sum(weights, &alive, v)).collect();
    let mut removal_order = Vec::with_capacity(n - 1);
    let mut prefix_quality = Vec::with_capacity(n);
    let mut best = (f64::NEG_INFINITY, 0);

    for step in 0..n {
        let survivors = n - step;
        let total: f64 = (0..n).filter(|&v| alive[v]).map(|v| degree[v]).sum();
        let quality = 0.5 * total / survivors as f64;
        prefix_quality.push(quality);
        if quality > best.0 {
            best = (quality, step);
        }
        if survivors == 1 {
            break;
        }
        let victim = argmin_alive(&degree, &alive);
        alive[victim] = false;
        removal_order.push(victim);
        for &(u, _) in graph.neighbors(victim) {
            if alive[u] {
                degree[u] = graph.star_sum(weights, &alive, u);
            }
        }
    }

    let removed = &removal_order[..best.1];
    let set: VertexSet = (0..n).filter(|v| !removed.contains(v)).collect();
    let density = graph.density(weights, &set)?;
    Ok(Peeling {
        set,
        density,
        removal_order,
        prefix_quality,
    })
}

/// Smallest-index vertex of minimum value among the live ones.
pub(crate) fn argmin_alive(values: &[f64], alive: &[bool]) -> VertexId {
    let mut best: Option<VertexId> = None;
    for v in (0..values.len()).filter(|&v| alive[v]) {
        match best {
            Some(b) if values[v] >= values[b] => {}
            _ => best = Some(v),
        }
    }
    best.expect("at least one live vertex")
}
