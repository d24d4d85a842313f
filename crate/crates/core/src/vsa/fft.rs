//! Real-signal DFT helpers on top of `rustfft`.
//!
//! Forward transform is unnormalized; the inverse carries the `1/D` factor,
//! so a unitary vector (all spectral magnitudes 1) has Euclidean norm 1.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::VsaError;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    if buf.is_empty() {
        return buf;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(&mut buf);
    buf
}

/// Inverse DFT keeping only the real part.
pub fn inverse_real(spectrum: &[Complex64]) -> Vec<f64> {
    let mut buf = spectrum.to_vec();
    if buf.is_empty() {
        return Vec::new();
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(&mut buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter().map(|c| c.re * scale).collect()
}

/// Circular convolution `out[n] = Σ_k a[k]·b[(n−k) mod D]` through the spectrum.
pub fn circular_convolve(a: &[f64], b: &[f64]) -> Result<Vec<f64>, VsaError> {
    if a.len() != b.len() {
        return Err(VsaError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let fa = forward(a);
    let fb = forward(b);
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    Ok(inverse_real(&prod))
}
