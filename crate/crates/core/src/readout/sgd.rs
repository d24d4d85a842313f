//! Linear classifier trained by per-sample SGD on the L2-regularized hinge loss.

use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, LinearModel, ReadoutError};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SgdConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// L2 coefficient on the weights (bias unpenalized).
    pub alpha: f64,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            epochs: 200,
            learning_rate: 1e-3,
            alpha: 1e-4,
        }
    }
}

/// Per-sample objective `max(0, 1 − y·(w·x + b)) + ½·alpha·‖w‖²` for a label
/// `y ∈ {−1, +1}`, with its (sub)gradient in `w` and `b`.
pub fn hinge_loss_and_grad(
    model: &LinearModel,
    x: &[f64],
    y: f64,
    alpha: f64,
) -> (f64, Vec<f64>, f64) {
    let margin = y * model.decision(x);
    let reg = 0.5 * alpha * model.weights.iter().map(|w| w * w).sum::<f64>();
    let mut grad_w: Vec<f64> = model.weights.iter().map(|w| alpha * w).collect();
    if margin < 1.0 {
        for (g, v) in grad_w.iter_mut().zip(x) {
            *g -= y * v;
        }
        (1.0 - margin + reg, grad_w, -y)
    } else {
        (reg, grad_w, 0.0)
    }
}

/// Labels must be `0`/`1`; both classes must be present.
pub fn train_sgd_classifier(
    train: &FeatureMatrix,
    cfg: &SgdConfig,
    rng: &mut SeededRng,
) -> Result<LinearModel, ReadoutError> {
    train.check_finite()?;
    if !(cfg.learning_rate > 0.0) || !(cfg.alpha >= 0.0) {
        return Err(ReadoutError::InvalidParameter(
            "learning rate must be positive and alpha non-negative".to_string(),
        ));
    }
    let signs: Vec<f64> = train
        .labels()
        .iter()
        .map(|&y| if y > 0.5 { 1.0 } else { -1.0 })
        .collect();
    if !(signs.contains(&1.0) && signs.contains(&-1.0)) {
        return Err(ReadoutError::SingleClass);
    }
    let mut model = LinearModel {
        weights: vec![0.0; train.width()],
        bias: 0.0,
    };
    let mut order: Vec<usize> = (0..train.len()).collect();
    for _ in 0..cfg.epochs {
        rng.shuffle(&mut order);
        for &k in &order {
            let x = &train.rows()[k];
            let y = signs[k];
            let (_, grad_w, grad_b) = hinge_loss_and_grad(&model, x, y, cfg.alpha);
            for (w, g) in model.weights.iter_mut().zip(&grad_w) {
                *w -= cfg.learning_rate * g;
            }
            model.bias -= cfg.learning_rate * grad_b;
        }
    }
    Ok(model)
}
