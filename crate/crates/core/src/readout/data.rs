use super::ReadoutError;
use crate::rng::SeededRng;

/// Per-molecule feature rows with aligned labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: Vec<Vec<f64>>,
    labels: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self, ReadoutError> {
        if rows.len() != labels.len() {
            return Err(ReadoutError::Shape(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some(first) = rows.first() {
            let width = first.len();
            if let Some(k) = rows.iter().position(|r| r.len() != width) {
                return Err(ReadoutError::Shape(format!(
                    "row {k} has {} features, expected {width}",
                    rows[k].len()
                )));
            }
        }
        Ok(Self { rows, labels })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Labels mapped to `{0, 1}`: 1 for a non-zero bandgap.
    pub fn as_classification(&self) -> Self {
        Self {
            rows: self.rows.clone(),
            labels: self
                .labels
                .iter()
                .map(|&y| if y != 0.0 { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub(crate) fn check_finite(&self) -> Result<(), ReadoutError> {
        for (k, row) in self.rows.iter().enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(ReadoutError::NonFinite(format!("row {k}")));
            }
        }
        if self.labels.iter().any(|v| !v.is_finite()) {
            return Err(ReadoutError::NonFinite("labels".to_string()));
        }
        Ok(())
    }
}

/// Seeded shuffle of `0..n`, split after `round(train_fraction · n)`.
pub fn split_indices(
    n: usize,
    train_fraction: f64,
    rng: &mut SeededRng,
) -> Result<(Vec<usize>, Vec<usize>), ReadoutError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(ReadoutError::Split(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let n_train = (train_fraction * n as f64).round() as usize;
    if n < 2 || n_train == 0 || n_train == n {
        return Err(ReadoutError::Split(format!(
            "{n} rows at fraction {train_fraction} leave one side empty"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let test = order.split_off(n_train);
    Ok((order, test))
}

pub fn split(
    data: &FeatureMatrix,
    train_fraction: f64,
    rng: &mut SeededRng,
) -> Result<(FeatureMatrix, FeatureMatrix), ReadoutError> {
    let (train, test) = split_indices(data.len(), train_fraction, rng)?;
    Ok((data.subset(&train), data.subset(&test)))
}

/// Per-column standardization fitted on training rows. Constant columns
/// keep scale 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(data: &FeatureMatrix) -> Result<Self, ReadoutError> {
        if data.is_empty() {
            return Err(ReadoutError::Empty);
        }
        let n = data.len() as f64;
        let width = data.width();
        let mut mean = vec![0.0; width];
        for row in data.rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; width];
        for row in data.rows() {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Self { mean, scale })
    }

    pub fn transform(&self, data: &FeatureMatrix) -> FeatureMatrix {
        FeatureMatrix {
            rows: data
                .rows()
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&self.mean)
                        .zip(&self.scale)
                        .map(|((v, m), s)| (v - m) / s)
                        .collect()
                })
                .collect(),
            labels: data.labels().to_vec(),
        }
    }
}
