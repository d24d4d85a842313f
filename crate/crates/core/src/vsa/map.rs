use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};

use super::{similarity, VsaError};
use crate::rng::SeededRng;

/// Integer-valued MAP hypervector. Codebook samples hold only `±1`; bundles
/// of `k` codebook vectors hold integers in `[-k, k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapHypervector {
    values: Vec<i32>,
}

impl MapHypervector {
    /// Each component independently `±1` with probability 1/2.
    pub fn sample(rng: &mut SeededRng, dim: usize) -> Result<Self, VsaError> {
        if dim < 2 {
            return Err(VsaError::InvalidDimension {
                dim,
                reason: "MAP vectors need at least 2 components",
            });
        }
        Ok(Self {
            values: (0..dim).map(|_| rng.sign()).collect(),
        })
    }

    pub fn from_values(values: Vec<i32>) -> Self {
        Self { values }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            values: vec![0; dim],
        }
    }

    /// Binding identity.
    pub fn ones(dim: usize) -> Self {
        Self {
            values: vec![1; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i32> {
        self.values
    }

    /// Component-wise product.
    pub fn bind(&self, other: &Self) -> Result<Self, VsaError> {
        self.check_dim(other)?;
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Adds `a * b` into `self` without allocating the bound vector.
    pub fn accumulate_bound(&mut self, a: &Self, b: &Self) -> Result<(), VsaError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        for ((acc, x), y) in self.values.iter_mut().zip(&a.values).zip(&b.values) {
            *acc += x * y;
        }
        Ok(())
    }

    /// Cyclic right shift by `k`: `out[i] = in[(i - k) mod D]`.
    pub fn permute(&self, k: i64) -> Self {
        let d = self.values.len();
        if d == 0 {
            return self.clone();
        }
        let shift = k.rem_euclid(d as i64) as usize;
        let mut values = self.values.clone();
        values.rotate_right(shift);
        Self { values }
    }

    pub fn scale(&self, factor: i32) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn is_bipolar(&self) -> bool {
        self.values.iter().all(|&v| v == 1 || v == -1)
    }

    pub fn similarity(&self, other: &Self) -> Result<f64, VsaError> {
        similarity(&self.values, &other.values)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| f64::from(v)).collect()
    }

    fn check_dim(&self, other: &Self) -> Result<(), VsaError> {
        if self.dim() != other.dim() {
            return Err(VsaError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// Component-wise integer sum. No thresholding is applied.
pub fn bundle(vs: &[MapHypervector]) -> Result<MapHypervector, VsaError> {
    let first = vs.first().ok_or(VsaError::EmptyBundle)?;
    let mut acc = first.clone();
    for v in &vs[1..] {
        acc.check_dim(v)?;
        acc += v;
    }
    Ok(acc)
}

impl AddAssign<&MapHypervector> for MapHypervector {
    fn add_assign(&mut self, rhs: &MapHypervector) {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in MAP addition");
        for (a, b) in self.values.iter_mut().zip(&rhs.values) {
            *a += b;
        }
    }
}

impl Add for &MapHypervector {
    type Output = MapHypervector;

    fn add(self, rhs: &MapHypervector) -> MapHypervector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul for &MapHypervector {
    type Output = MapHypervector;

    /// Panicking shorthand for [`MapHypervector::bind`].
    fn mul(self, rhs: &MapHypervector) -> MapHypervector {
        self.bind(rhs).expect("dimension mismatch in MAP binding")
    }
}
