use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightVector};

/// Updates between checks of the maintained inverse against a fresh one.
pub const REFRESH_INTERVAL: u64 = 256;

/// Largest entrywise drift of the maintained inverse tolerated at a check.
pub const INVERSE_TOLERANCE: f64 = 1e-8;

/// Ridge-regression state over edge-indicator designs.
///
/// Holds `A = lambda I + sum chi chi^T`, its inverse and log-determinant, the
/// response vector `b = sum chi r`, and per-arm pull counts.
#[derive(Debug, Clone)]
pub struct DesignState {
    lambda: f64,
    a: DMatrix<f64>,
    a_inv: DMatrix<f64>,
    logdet: f64,
    b: DVector<f64>,
    t: u64,
    counts: Vec<u64>,
    rank_one_updates: u64,
    refreshes: u64,
}

impl DesignState {
    pub fn new(m: usize, lambda: f64, arms: usize) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        Ok(Self {
            lambda,
            a: DMatrix::identity(m, m) * lambda,
            a_inv: DMatrix::identity(m, m) / lambda,
            logdet: m as f64 * lambda.ln(),
            b: DVector::zeros(m),
            t: 0,
            counts: vec![0; arms],
            rank_one_updates: 0,
            refreshes: 0,
        })
    }

    /// Records one pull of `arm`, whose induced edges are `support`, with
    /// observed reward `reward`. An empty support only advances the counters.
    pub fn update(&mut self, arm: usize, support: &[EdgeId], reward: f64) -> Result<()> {
        if !reward.is_finite() {
            return Err(Error::NonFinite(format!("reward {reward}")));
        }
        if !support.is_empty() {
            self.rank_one(support, reward);
        }
        self.counts[arm] += 1;
        self.t += 1;
        Ok(())
    }

    fn rank_one(&mut self, support: &[EdgeId], reward: f64) {
        let m = self.m();
        // u = A^{-1} chi and q = chi^T A^{-1} chi.
        let mut u = DVector::zeros(m);
        for &j in support {
            u += self.a_inv.column(j);
        }
        let q: f64 = support.iter().map(|&i| u[i]).sum();
        self.logdet += q.ln_1p();
        self.a_inv.ger(-1.0 / (1.0 + q), &u, &u, 1.0);
        for &i in support {
            for &j in support {
                self.a[(i, j)] += 1.0;
            }
            self.b[i] += reward;
        }
        self.rank_one_updates += 1;
        if self.rank_one_updates % REFRESH_INTERVAL == 0 {
            self.check_inverse();
        }
    }

    /// Compares the maintained inverse with a dense one and adopts the dense
    /// inverse and log-determinant when they have drifted apart.
    fn check_inverse(&mut self) {
        let Some(chol) = self.a.clone().cholesky() else {
            return;
        };
        let fresh = chol.inverse();
        if (&fresh - &self.a_inv).amax() > INVERSE_TOLERANCE {
            self.a_inv = fresh;
            self.logdet = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
            self.refreshes += 1;
        }
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Rounds recorded so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn a_inv(&self) -> &DMatrix<f64> {
        &self.a_inv
    }

    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    /// Times the inverse was replaced by a dense recomputation.
    pub fn refreshes(&self) -> u64 {
        self.refreshes
    }

    /// Unclipped least-squares estimate `A^{-1} b`.
    pub fn raw_estimate(&self) -> DVector<f64> {
        &self.a_inv * &self.b
    }

    /// Least-squares estimate with negative entries set to zero.
    pub fn estimate(&self) -> Result<WeightVector> {
        WeightVector::clipped(self.raw_estimate().iter().copied().collect())
    }

    /// `||chi_F||_{A^{-1}}` for the edge set `F`.
    pub fn width(&self, support: &[EdgeId]) -> f64 {
        let mut sum = 0.0;
        for &i in support {
            for &j in support {
                sum += self.a_inv[(i, j)];
            }
        }
        sum.max(0.0).sqrt()
    }

    /// Confidence radius
    /// `R' sqrt(2 ln(det(A)^{1/2} / (lambda^{m/2} delta))) + sqrt(lambda) L`
    /// with `R' = sqrt(deg_max) R`, evaluated from the log-determinant.
    pub fn confidence_radius(&self, delta: f64, r: f64, l: f64, max_degree: usize) -> Result<f64> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        let growth = 0.5 * self.logdet - 0.5 * self.m() as f64 * self.lambda.ln();
        if growth < -1e-9 * self.logdet.abs().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "log det A = {} is below m log lambda",
                self.logdet
            )));
        }
        let inner = 2.0 * (growth.max(0.0) - delta.ln());
        let r_prime = (max_degree as f64).sqrt() * r;
        Ok(r_prime * inner.sqrt() + self.lambda.sqrt() * l)
    }
}
