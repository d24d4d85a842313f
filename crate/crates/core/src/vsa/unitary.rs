use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{fft, similarity, DenseHypervector, VsaError};
use crate::rng::SeededRng;

/// Largest deviation of a spectral magnitude from 1 accepted by
/// [`UnitaryHypervector::from_values`].
pub const UNITARY_TOLERANCE: f64 = 1e-6;

/// Real vector whose DFT coefficients all have magnitude 1.
///
/// The self-conjugate bins (DC, and Nyquist for even `D`) are `+1`, which
/// keeps [`UnitaryHypervector::frac_power`] closed over real vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryHypervector {
    values: Vec<f64>,
}

impl UnitaryHypervector {
    /// Uniform phases in `(-π, π]` on the `D/2 - 1` free bins, conjugate
    /// mirror on the rest, DC and Nyquist fixed to `+1`.
    pub fn sample(rng: &mut SeededRng, dim: usize) -> Result<Self, VsaError> {
        if dim % 2 != 0 || dim < 4 {
            return Err(VsaError::InvalidDimension {
                dim,
                reason: "unitary vectors need an even dimension of at least 4",
            });
        }
        let mut spectrum = vec![Complex64::new(1.0, 0.0); dim];
        for k in 1..dim / 2 {
            let phase = PI * (1.0 - 2.0 * rng.uniform());
            let c = Complex64::from_polar(1.0, phase);
            spectrum[k] = c;
            spectrum[dim - k] = c.conj();
        }
        Ok(Self {
            values: fft::inverse_real(&spectrum),
        })
    }

    /// Convolution identity `[1, 0, ..., 0]`.
    pub fn identity(dim: usize) -> Self {
        let mut values = vec![0.0; dim];
        if dim > 0 {
            values[0] = 1.0;
        }
        Self { values }
    }

    /// Validates the spectrum before wrapping `values`.
    pub fn from_values(values: Vec<f64>) -> Result<Self, VsaError> {
        if values.is_empty() {
            return Err(VsaError::InvalidDimension {
                dim: 0,
                reason: "empty vector",
            });
        }
        let d = values.len();
        let spectrum = fft::forward(&values);
        for (k, c) in spectrum.iter().enumerate() {
            let dev = (c.norm() - 1.0).abs();
            if dev > UNITARY_TOLERANCE {
                return Err(VsaError::NotUnitary(format!(
                    "|F[{k}]| = {} deviates from 1",
                    c.norm()
                )));
            }
        }
        let self_conjugate = if d % 2 == 0 { vec![0, d / 2] } else { vec![0] };
        for k in self_conjugate {
            if spectrum[k].re < 0.0 {
                return Err(VsaError::NotUnitary(format!(
                    "self-conjugate bin F[{k}] must be +1"
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spectrum(&self) -> Vec<Complex64> {
        fft::forward(&self.values)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Circular convolution. The product of unit-magnitude spectra is again
    /// unit-magnitude, so the result stays unitary.
    pub fn bind(&self, other: &Self) -> Result<Self, VsaError> {
        fft::circular_convolve(&self.values, &other.values).map(|values| Self { values })
    }

    /// Multiplies every spectral phase (principal branch) by `exponent`.
    pub fn frac_power(&self, exponent: f64) -> Self {
        let d = self.dim();
        let spectrum = self.spectrum();
        let mut out = vec![Complex64::new(1.0, 0.0); d];
        for k in 1..d.div_ceil(2) {
            let c = Complex64::from_polar(1.0, exponent * spectrum[k].arg());
            out[k] = c;
            out[d - k] = c.conj();
        }
        Self {
            values: fft::inverse_real(&out),
        }
    }

    /// Binding inverse. Conjugating the spectrum of a real vector is the
    /// index reversal `out[n] = in[(-n) mod D]`, which is exact.
    pub fn invert(&self) -> Self {
        let d = self.dim();
        Self {
            values: (0..d).map(|n| self.values[(d - n) % d]).collect(),
        }
    }

    pub fn similarity(&self, other: &[f64]) -> Result<f64, VsaError> {
        similarity(&self.values, other)
    }

    pub fn to_dense(&self) -> DenseHypervector {
        DenseHypervector::from_values(self.values.clone())
    }
}

impl AsRef<[f64]> for UnitaryHypervector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
