use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexSet};

/// Pivot magnitude below which a column counts as dependent.
const RANK_TOLERANCE: f64 = 1e-8;

/// Queryable vertex subsets together with an allocation over them.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmFamily {
    arms: Vec<VertexSet>,
    supports: Vec<Vec<EdgeId>>,
    allocation: Vec<f64>,
}

impl ArmFamily {
    /// Family with the uniform allocation.
    pub fn new(graph: &Graph, arms: Vec<VertexSet>) -> Result<Self> {
        let p = if arms.is_empty() {
            Vec::new()
        } else {
            vec![1.0 / arms.len() as f64; arms.len()]
        };
        Self::with_allocation(graph, arms, p)
    }

    /// Family with an explicit allocation `p`, a probability vector with one
    /// entry per arm.
    pub fn with_allocation(graph: &Graph, arms: Vec<VertexSet>, p: Vec<f64>) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::Domain("the arm family is empty".into()));
        }
        if p.len() != arms.len() {
            return Err(Error::Domain(format!(
                "{} allocation entries for {} arms",
                p.len(),
                arms.len()
            )));
        }
        if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::Domain(
                "allocation entries must be nonnegative".into(),
            ));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("allocation sums to {total}, not 1")));
        }
        for arm in &arms {
            if arm.is_empty() {
                return Err(Error::Domain("arms must be nonempty".into()));
            }
            arm.check_graph(graph)?;
        }
        let supports = arms.iter().map(|arm| graph.induced_edges(arm)).collect();
        Ok(Self {
            arms,
            supports,
            allocation: p,
        })
    }

    /// Draws `count` arms with sizes uniform on `k..=n` and uniformly random
    /// members, redrawing the whole family until its indicator vectors span
    /// all `m` edge coordinates.
    pub fn random(graph: &Graph, k: usize, count: usize, rng: &mut impl Rng) -> Result<Self> {
        const ATTEMPTS: usize = 1000;
        let n = graph.n();
        if k < 3 || k > n {
            return Err(Error::Domain(format!(
                "minimum arm size k = {k} must satisfy 2 < k <= n = {n}"
            )));
        }
        if count < graph.m() {
            return Err(Error::Domain(format!(
                "{count} arms cannot span {} edges",
                graph.m()
            )));
        }
        for _ in 0..ATTEMPTS {
            let arms: Vec<VertexSet> = (0..count)
                .map(|_| {
                    let size = rng.random_range(k..=n);
                    VertexSet::new(rand::seq::index::sample(rng, n, size).into_vec())
                })
                .collect();
            let family = Self::new(graph, arms)?;
            if family.rank(graph.m()) == graph.m() {
                return Ok(family);
            }
        }
        Err(Error::Domain(format!(
            "no family of {count} arms with k = {k} reached rank {} in {ATTEMPTS} draws",
            graph.m()
        )))
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn arm(&self, i: usize) -> &VertexSet {
        &self.arms[i]
    }

    pub fn arms(&self) -> &[VertexSet] {
        &self.arms
    }

    /// Induced edges `E(S)` of arm `i`, ascending.
    pub fn support(&self, i: usize) -> &[EdgeId] {
        &self.supports[i]
    }

    pub fn allocation(&self) -> &[f64] {
        &self.allocation
    }

    /// Smallest arm size.
    pub fn min_size(&self) -> usize {
        self.arms.iter().map(VertexSet::len).min().unwrap_or(0)
    }

    /// Rank of the stacked edge-indicator rows, by column-pivoted QR.
    pub fn rank(&self, m: usize) -> usize {
        if m == 0 {
            return 0;
        }
        let mut x = DMatrix::<f64>::zeros(self.arms.len(), m);
        for (row, support) in self.supports.iter().enumerate() {
            for &e in support {
                x[(row, e)] = 1.0;
            }
        }
        let r = x.col_piv_qr().r();
        (0..r.nrows().min(r.ncols()))
            .filter(|&i| r[(i, i)].abs() > RANK_TOLERANCE)
            .count()
    }

    /// Index minimizing `counts[i] / p[i]` over arms with `p[i] > 0`; ties go
    /// to the lowest index.
    pub fn select(&self, counts: &[u64]) -> usize {
        let mut best: Option<usize> = None;
        for (i, &p) in self.allocation.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            match best {
                // counts[i] / p < counts[b] / p_b, cross-multiplied.
                Some(b) if counts[i] as f64 * self.allocation[b] >= counts[b] as f64 * p => {}
                _ => best = Some(i),
            }
        }
        best.expect("allocation has a positive entry")
    }
}
