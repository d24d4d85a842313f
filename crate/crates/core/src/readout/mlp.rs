//! Small fully connected regression network: rectifier hidden layers, one
//! linear output, mean squared error, plain gradient descent.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, ReadoutError};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub learning_rate: f64,
    /// `None` trains full-batch.
    pub batch_size: Option<usize>,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: vec![10],
            epochs: 500,
            learning_rate: 1e-2,
            batch_size: None,
            seed: 0,
        }
    }
}

impl MlpConfig {
    pub fn validate(&self) -> Result<(), ReadoutError> {
        if self.hidden.iter().any(|&w| w == 0) {
            return Err(ReadoutError::InvalidParameter("hidden widths must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(ReadoutError::InvalidParameter("learning rate must be positive".into()));
        }
        if self.batch_size == Some(0) {
            return Err(ReadoutError::InvalidParameter("batch size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// `out × in`
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layers: Vec<Dense>,
}

impl MlpModel {
    /// He-normal weights for rectifier layers, `N(0, 1/fan_in)` for the
    /// output layer, zero biases.
    pub fn init(inputs: usize, cfg: &MlpConfig) -> Self {
        let mut rng = SeededRng::new(cfg.seed);
        let mut widths = vec![inputs];
        widths.extend(&cfg.hidden);
        widths.push(1);
        let last = widths.len() - 2;
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let gain = if k == last { 1.0 } else { 2.0 };
                let std = (gain / fan_in.max(1) as f64).sqrt();
                Dense {
                    weights: DMatrix::from_fn(fan_out, fan_in, |_, _| rng.normal(0.0, std)),
                    bias: DVector::zeros(fan_out),
                }
            })
            .collect();
        Self { layers }
    }

    fn forward(&self, x: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        // activations[k] is the input of layer k; rows are samples
        let mut activations = vec![x.clone()];
        for (k, layer) in self.layers.iter().enumerate() {
            let mut z = activations[k].clone() * layer.weights.transpose();
            for mut row in z.row_iter_mut() {
                row += layer.bias.transpose();
            }
            if k + 1 < self.layers.len() {
                z.apply(|v| *v = v.max(0.0));
            }
            activations.push(z);
        }
        activations
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        if rows.is_empty() {
            return Vec::new();
        }
        let x = to_matrix(rows);
        self.forward(&x).last().unwrap().column(0).iter().copied().collect()
    }

    /// Mean squared error over `data` and its gradient, one [`Dense`] per layer.
    pub fn loss_and_gradients(&self, data: &FeatureMatrix) -> (f64, Vec<Dense>) {
        let x = to_matrix(data.rows());
        let y = DVector::from_column_slice(data.labels());
        self.loss_and_gradients_on(&x, &y)
    }

    fn loss_and_gradients_on(&self, x: &DMatrix<f64>, y: &DVector<f64>) -> (f64, Vec<Dense>) {
        let n = x.nrows() as f64;
        let acts = self.forward(x);
        let out = acts.last().unwrap().column(0).into_owned();
        let resid = &out - y;
        let loss = resid.norm_squared() / n;
        // d loss / d z for the output layer
        let mut delta = DMatrix::from_column_slice(x.nrows(), 1, (resid * (2.0 / n)).as_slice());
        let mut grads = Vec::with_capacity(self.layers.len());
        for k in (0..self.layers.len()).rev() {
            let input = &acts[k];
            let gw = delta.transpose() * input;
            let gb = DVector::from_iterator(delta.ncols(), delta.column_iter().map(|c| c.sum()));
            if k > 0 {
                let mut back = &delta * &self.layers[k].weights;
                back.zip_apply(input, |g, a| {
                    if a <= 0.0 {
                        *g = 0.0
                    }
                });
                delta = back;
            }
            grads.push(Dense { weights: gw, bias: gb });
        }
        grads.reverse();
        (loss, grads)
    }

    /// All parameters, layer by layer, weights (column-major) then bias.
    pub fn parameters(&self) -> Vec<f64> {
        flatten(&self.layers)
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        let mut at = 0;
        for layer in &mut self.layers {
            for v in layer.weights.iter_mut().chain(layer.bias.iter_mut()) {
                *v = params[at];
                at += 1;
            }
        }
    }
}

pub fn flatten(layers: &[Dense]) -> Vec<f64> {
    layers
        .iter()
        .flat_map(|l| l.weights.iter().chain(l.bias.iter()).copied())
        .collect()
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let width = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), width, |i, j| rows[i][j])
}

pub fn train_mlp(train: &FeatureMatrix, cfg: &MlpConfig) -> Result<MlpModel, ReadoutError> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(ReadoutError::Empty);
    }
    train.check_finite()?;
    let mut model = MlpModel::init(train.width(), cfg);
    let x = to_matrix(train.rows());
    let y = DVector::from_column_slice(train.labels());
    let mut rng = SeededRng::with_stream(cfg.seed, 1);
    let mut order: Vec<usize> = (0..train.len()).collect();
    for epoch in 0..cfg.epochs {
        let batches: Vec<(DMatrix<f64>, DVector<f64>)> = match cfg.batch_size {
            None => vec![(x.clone(), y.clone())],
            Some(b) => {
                rng.shuffle(&mut order);
                order
                    .chunks(b)
                    .map(|idx| (x.select_rows(idx), y.select_rows(idx)))
                    .collect()
            }
        };
        for (bx, by) in &batches {
            let (loss, grads) = model.loss_and_gradients_on(bx, by);
            if !loss.is_finite() {
                return Err(ReadoutError::Diverged { epoch });
            }
            for (layer, g) in model.layers.iter_mut().zip(&grads) {
                layer.weights -= &g.weights * cfg.learning_rate;
                layer.bias -= &g.bias * cfg.learning_rate;
            }
        }
        if model.parameters().iter().any(|v| !v.is_finite()) {
            return Err(ReadoutError::Diverged { epoch });
        }
    }
    Ok(model)
}
