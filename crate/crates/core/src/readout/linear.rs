//! Ridge regression through the normal equations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, ReadoutError};

pub const DEFAULT_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Minimizes `‖Xw + b − y‖² + ridge·‖w‖²` with the bias unpenalized.
///
/// Features and labels are centred first, which removes the bias from the
/// system. With more features than rows the equivalent row-space form
/// `w = Xᵀ(XXᵀ + ridge·I)⁻¹y` is solved instead of the `p × p` system. A
/// singular or numerically rank-deficient system falls back to the
/// minimum-norm SVD solution.
pub fn train_linear_regressor(train: &FeatureMatrix, ridge: f64) -> Result<LinearModel, ReadoutError> {
    if train.is_empty() {
        return Err(ReadoutError::Empty);
    }
    if !(ridge.is_finite() && ridge >= 0.0) {
        return Err(ReadoutError::InvalidParameter(format!("ridge {ridge}")));
    }
    train.check_finite()?;
    let n = train.len();
    let p = train.width();
    let y_mean = train.labels().iter().sum::<f64>() / n as f64;
    let mut x_mean = vec![0.0; p];
    for row in train.rows() {
        for (m, v) in x_mean.iter_mut().zip(row) {
            *m += v / n as f64;
        }
    }
    let x = DMatrix::from_fn(n, p, |i, j| train.rows()[i][j] - x_mean[j]);
    let y = DVector::from_iterator(n, train.labels().iter().map(|v| v - y_mean));

    let w = if p <= n {
        let gram = x.tr_mul(&x) + DMatrix::identity(p, p) * ridge;
        solve_spd(gram, x.tr_mul(&y))?
    } else {
        let gram = &x * x.transpose() + DMatrix::identity(n, n) * ridge;
        let alpha = solve_spd(gram, y)?;
        x.tr_mul(&alpha)
    };
    let bias = y_mean - w.iter().zip(&x_mean).map(|(a, b)| a * b).sum::<f64>();
    Ok(LinearModel {
        weights: w.iter().copied().collect(),
        bias,
    })
}

fn solve_spd(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>, ReadoutError> {
    if let Some(chol) = a.clone().cholesky() {
        let diag = chol.l_dirty().diagonal();
        let (lo, hi) = (diag.min(), diag.max());
        if lo * lo > 1e-12 * hi * hi {
            return Ok(chol.solve(&b));
        }
    }
    let tol = 1e-12 * a.amax().max(1.0);
    a.svd(true, true)
        .solve(&b, tol)
        .map_err(|e| ReadoutError::Singular(e.to_string()))
}
