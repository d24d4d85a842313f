//! Trainable readouts over graph encodings or reservoir states, plus the
//! split and metric utilities of the evaluation protocol.

mod data;
mod linear;
mod mlp;
mod sgd;

pub use data::{split, split_indices, FeatureMatrix, Standardizer};
pub use linear::{train_linear_regressor, LinearModel, DEFAULT_RIDGE};
pub use mlp::{flatten, train_mlp, Dense, MlpConfig, MlpModel};
pub use sgd::{hinge_loss_and_grad, train_sgd_classifier, SgdConfig};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReadoutError {
    #[error("feature shape mismatch: {0}")]
    Shape(String),
    #[error("no rows")]
    Empty,
    #[error("non-finite values in {0}")]
    NonFinite(String),
    #[error("invalid split: {0}")]
    Split(String),
    #[error("training set contains a single class")]
    SingleClass,
    #[error("invalid readout parameter: {0}")]
    InvalidParameter(String),
    #[error("linear system could not be solved: {0}")]
    Singular(String),
    #[error("training diverged at epoch {epoch}")]
    Diverged { epoch: usize },
    #[error("a {model} model cannot be evaluated on a {task} task")]
    TaskMismatch { model: &'static str, task: Task },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Classification,
    Regression,
}

impl Task {
    pub fn metric_name(self) -> &'static str {
        match self {
            Task::Classification => "accuracy",
            Task::Regression => "mae",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Classification => "classification",
            Task::Regression => "regression",
        })
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classification" => Ok(Task::Classification),
            "regression" => Ok(Task::Regression),
            other => Err(format!("unknown task '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Regressor(LinearModel),
    Classifier(LinearModel),
    Mlp(MlpModel),
    /// Predicts one constant; the regression and classification baselines.
    Constant(f64),
}

impl Model {
    fn kind(&self) -> &'static str {
        match self {
            Model::Regressor(_) => "linear regression",
            Model::Classifier(_) => "linear classifier",
            Model::Mlp(_) => "MLP",
            Model::Constant(_) => "constant",
        }
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        match self {
            Model::Regressor(m) => rows.iter().map(|x| m.decision(x)).collect(),
            Model::Classifier(m) => rows
                .iter()
                .map(|x| if m.decision(x) >= 0.0 { 1.0 } else { 0.0 })
                .collect(),
            Model::Mlp(m) => m.predict(rows),
            Model::Constant(c) => vec![*c; rows.len()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub task: Task,
    /// Mean absolute error or accuracy, by task.
    pub value: f64,
}

pub fn mean_absolute_error(pred: &[f64], labels: &[f64]) -> f64 {
    pred.iter().zip(labels).map(|(p, y)| (p - y).abs()).sum::<f64>() / labels.len() as f64
}

pub fn accuracy(pred: &[f64], labels: &[f64]) -> f64 {
    let correct = pred.iter().zip(labels).filter(|(p, y)| p == y).count();
    correct as f64 / labels.len() as f64
}

pub fn evaluate(model: &Model, test: &FeatureMatrix, task: Task) -> Result<Metrics, ReadoutError> {
    if test.is_empty() {
        return Err(ReadoutError::Empty);
    }
    let compatible = matches!(
        (model, task),
        (Model::Regressor(_) | Model::Mlp(_) | Model::Constant(_), Task::Regression)
            | (Model::Classifier(_) | Model::Constant(_), Task::Classification)
    );
    if !compatible {
        return Err(ReadoutError::TaskMismatch {
            model: model.kind(),
            task,
        });
    }
    let pred = model.predict(test.rows());
    let value = match task {
        Task::Regression => mean_absolute_error(&pred, test.labels()),
        Task::Classification => accuracy(&pred, test.labels()),
    };
    Ok(Metrics { task, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(labels: &[f64]) -> FeatureMatrix {
        FeatureMatrix::new(labels.iter().map(|&y| vec![y]).collect(), labels.to_vec()).unwrap()
    }

    #[test]
    fn perfect_predictors() {
        let data = fm(&[0.0, 1.5, 3.0]);
        let identity = Model::Regressor(LinearModel { weights: vec![1.0], bias: 0.0 });
        assert_eq!(evaluate(&identity, &data, Task::Regression).unwrap().value, 0.0);
        let cls = fm(&[0.0, 1.0, 1.0]);
        let threshold = Model::Classifier(LinearModel { weights: vec![1.0], bias: -0.5 });
        assert_eq!(evaluate(&threshold, &cls, Task::Classification).unwrap().value, 1.0);
    }

    #[test]
    fn mean_predictor_mae() {
        let data = fm(&[0.0, 2.0]);
        assert_eq!(evaluate(&Model::Constant(1.0), &data, Task::Regression).unwrap().value, 1.0);
    }

    #[test]
    fn hand_computed_mae() {
        assert_eq!(mean_absolute_error(&[1.0, 2.0, 3.0, 4.0], &[1.0, 1.0, 4.0, 4.0]), 0.5);
    }

    #[test]
    fn mismatch_and_empty() {
        let data = fm(&[1.0]);
        let cls = Model::Classifier(LinearModel { weights: vec![1.0], bias: 0.0 });
        assert!(matches!(
            evaluate(&cls, &data, Task::Regression),
            Err(ReadoutError::TaskMismatch { .. })
        ));
        let reg = Model::Regressor(LinearModel { weights: vec![1.0], bias: 0.0 });
        assert!(evaluate(&reg, &data, Task::Classification).is_err());
        let empty = FeatureMatrix::new(vec![], vec![]).unwrap();
        assert_eq!(evaluate(&reg, &empty, Task::Regression), Err(ReadoutError::Empty));
    }

    #[test]
    fn task_parse() {
        assert_eq!("regression".parse::<Task>().unwrap(), Task::Regression);
        assert!("other".parse::<Task>().is_err());
    }
}
