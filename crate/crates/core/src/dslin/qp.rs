use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest dimension solved by corner enumeration.
pub const EXACT_QP_LIMIT: usize = 22;

const PSD_TOLERANCE: f64 = 1e-8;

/// How [`qp_upper_bound`] obtained its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpMode {
    /// The exact box maximum.
    Exact,
    /// `sqrt(sum |q_ij|)`, an upper bound.
    Relaxed,
}

/// Upper bound on `max_{x in [-1, 1]^m} sqrt(x^T Q x)` for a symmetric PSD
/// matrix `Q`.
///
/// The quadratic form is convex, so the maximum sits at a corner of the box.
/// Up to [`EXACT_QP_LIMIT`] dimensions all corners are visited (half of them,
/// as `x` and `-x` agree); beyond that every term `q_ij x_i x_j` is bounded
/// by `|q_ij|`.
pub fn qp_upper_bound(q: &DMatrix<f64>) -> Result<(f64, QpMode)> {
    validate(q)?;
    Ok(qp_upper_bound_unchecked(q))
}

fn validate(q: &DMatrix<f64>) -> Result<()> {
    if !q.is_square() {
        return Err(Error::Domain(format!(
            "expected a square matrix, got {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    let scale = q.amax().max(1.0);
    if (q - q.transpose()).amax() > PSD_TOLERANCE * scale {
        return Err(Error::Domain("matrix is not symmetric".into()));
    }
    let eigen = SymmetricEigen::new(q.clone());
    if eigen.eigenvalues.min() < -PSD_TOLERANCE * scale {
        return Err(Error::Domain("matrix is not positive semidefinite".into()));
    }
    Ok(())
}

pub(crate) fn qp_upper_bound_unchecked(q: &DMatrix<f64>) -> (f64, QpMode) {
    if q.nrows() <= EXACT_QP_LIMIT {
        (exact_corner_max(q).sqrt(), QpMode::Exact)
    } else {
        (relaxed_bound(q), QpMode::Relaxed)
    }
}

/// `sqrt(sum |q_ij|)`, valid for any matrix and any dimension.
pub fn relaxed_bound(q: &DMatrix<f64>) -> f64 {
    q.iter().map(|x| x.abs()).sum::<f64>().sqrt()
}

/// `max x^T Q x` over sign vectors with `x_0 = +1`, walked in Gray-code order
/// so that each step flips one sign and updates `y = Q x` in `O(m)`.
fn exact_corner_max(q: &DMatrix<f64>) -> f64 {
    let m = q.nrows();
    if m == 0 {
        return 0.0;
    }
    let mut x = vec![1.0f64; m];
    let mut y: Vec<f64> = (0..m).map(|i| q.row(i).sum()).collect();
    let mut value: f64 = y.iter().sum();
    let mut best = (value, 0u64);
    for step in 1u64..(1u64 << (m - 1)) {
        let i = step.trailing_zeros() as usize + 1;
        value += 4.0 * (q[(i, i)] - x[i] * y[i]);
        let twice = 2.0 * x[i];
        for (j, yj) in y.iter_mut().enumerate() {
            *yj -= twice * q[(j, i)];
        }
        x[i] = -x[i];
        if value > best.0 {
            best = (value, step);
        }
    }
    // Re-evaluate the winning corner directly to shed accumulated rounding.
    let gray = best.1 ^ (best.1 >> 1);
    let corner: Vec<f64> = (0..m)
        .map(|i| {
            if i > 0 && gray & (1 << (i - 1)) != 0 {
                -1.0
            } else {
                1.0
            }
        })
        .collect();
    let mut exact = 0.0;
    for i in 0..m {
        for j in 0..m {
            exact += q[(i, j)] * corner[i] * corner[j];
        }
    }
    exact.max(0.0)
}
