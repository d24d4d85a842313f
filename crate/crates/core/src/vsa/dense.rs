use serde::{Deserialize, Serialize};

use super::{fft, similarity, VsaError};

/// Arbitrary real hypervector: sums of unitary vectors, graph encodings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseHypervector {
    values: Vec<f64>,
}

impl DenseHypervector {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Circular convolution with any vector of the same dimension.
    pub fn bind(&self, other: &[f64]) -> Result<Self, VsaError> {
        fft::circular_convolve(&self.values, other).map(Self::from_values)
    }

    pub fn add_assign(&mut self, other: &[f64]) -> Result<(), VsaError> {
        if other.len() != self.dim() {
            return Err(VsaError::DimensionMismatch {
                left: self.dim(),
                right: other.len(),
            });
        }
        for (a, b) in self.values.iter_mut().zip(other) {
            *a += b;
        }
        Ok(())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Rescaled to unit Euclidean norm.
    pub fn normalized(&self) -> Result<Self, VsaError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(VsaError::ZeroNorm);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn similarity(&self, other: &[f64]) -> Result<f64, VsaError> {
        similarity(&self.values, other)
    }
}

impl AsRef<[f64]> for DenseHypervector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
