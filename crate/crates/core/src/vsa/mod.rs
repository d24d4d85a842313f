//! Hypervector algebras.
//!
//! Two algebras are provided:
//!
//! * [`MapHypervector`]: Multiply-Add-Permute vectors over `{-1, +1}`.
//!   Binding is the element-wise product, bundling the integer sum and
//!   permutation a cyclic shift. Bundles stay as exact integer sums.
//! * [`UnitaryHypervector`]: real vectors whose DFT coefficients all have
//!   unit magnitude. Binding is circular convolution, and fractional powers
//!   scale the spectral phases.
//!
//! [`DenseHypervector`] holds arbitrary real vectors (sums of unitary
//! vectors, graph encodings) and supports the same convolution binding.

mod dense;
pub mod fft;
mod map;
mod unitary;

pub use dense::DenseHypervector;
pub use map::{bundle, MapHypervector};
pub use unitary::{UnitaryHypervector, UNITARY_TOLERANCE};

use thiserror::Error;

/// Dimension used throughout unless configured otherwise.
pub const DEFAULT_DIM: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VsaError {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot bundle an empty list of hypervectors")]
    EmptyBundle,
    #[error("similarity undefined for a zero-norm vector")]
    ZeroNorm,
    #[error("vector is not unitary: {0}")]
    NotUnitary(String),
}

/// Cosine similarity of two equal-length vectors.
pub fn similarity<T: Copy + Into<f64>>(a: &[T], b: &[T]) -> Result<f64, VsaError> {
    if a.len() != b.len() {
        return Err(VsaError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (mut dot, mut na, mut nb) = (0.0f64, 0.0f64, 0.0f64);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y): (f64, f64) = (x.into(), y.into());
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(VsaError::ZeroNorm);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}
