use super::Densest;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, WeightVector};

/// Largest graph [`brute_force_densest`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Relative slack under which two densities count as tied.
const TIE: f64 = 1e-12;

/// Enumerates every nonempty subset and returns the densest.
///
/// Ties go to the smallest set, then to the lexicographically smallest one.
pub fn brute_force_densest(graph: &Graph, weights: &WeightVector) -> Result<Densest> {
    weights.check_graph(graph)?;
    let n = graph.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::Domain("the graph has no vertices".into()));
    }
    let edges: Vec<(u32, f64)> = graph
        .edges()
        .iter()
        .zip(weights.iter())
        .map(|(&(u, v), &w)| ((1u32 << u) | (1u32 << v), w))
        .collect();

    let mut best: Option<(f64, VertexSet)> = None;
    for bits in 1u32..(1u32 << n) {
        let weight: f64 = edges
            .iter()
            .filter(|(pair, _)| bits & pair == *pair)
            .map(|&(_, w)| w)
            .sum();
        let density = weight / bits.count_ones() as f64;
        let replace = match &best {
            None => true,
            Some((value, set)) => {
                let slack = TIE * value.abs().max(1.0);
                if density > value + slack {
                    true
                } else if density >= value - slack {
                    let candidate = members(bits);
                    (candidate.len(), &candidate) < (set.len(), set)
                } else {
                    false
                }
            }
        };
        if replace {
            best = Some((density, members(bits)));
        }
    }
    let (_, set) = best.expect("at least one subset");
    let density = graph.density(weights, &set)?;
    Ok(Densest {
        all_zero: weights.iter().all(|&w| w == 0.0),
        set,
        density,
    })
}

fn members(bits: u32) -> VertexSet {
    VertexSet::new((0..32).filter(|&v| bits & (1 << v) != 0).collect())
}
