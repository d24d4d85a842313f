//! Direct-evaluation oracles shared by the integration tests. Nothing here
//! calls the library's FFT, binding or permutation code.

#![allow(dead_code)]

use std::f64::consts::PI;

use neuromat::structures::{Atom, MoleculeGraph};

pub const PB: i64 = 82;
pub const B: i64 = 5;

/// Pb at the origin with two B atoms at equal distance `d1 = √3.25 Å`; the
/// B–B edge has `d2 = 2 Å`.
pub fn pbb2() -> MoleculeGraph {
    let atoms = vec![
        Atom::new(PB, [0.0, 0.0, 0.0]).unwrap(),
        Atom::new(B, [1.5, 1.0, 0.0]).unwrap(),
        Atom::new(B, [1.5, -1.0, 0.0]).unwrap(),
    ];
    MoleculeGraph::with_cutoff("PbB2", atoms, 6.0, None).unwrap()
}

pub fn pbb2_distances() -> (f64, f64) {
    (3.25f64.sqrt(), 2.0)
}

pub fn naive_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let d = a.len();
    (0..d)
        .map(|k| (0..d).map(|j| a[j] * b[(k + d - j) % d]).sum())
        .collect()
}

pub fn naive_dft(x: &[f64]) -> Vec<(f64, f64)> {
    let d = x.len();
    (0..d)
        .map(|k| {
            x.iter().enumerate().fold((0.0, 0.0), |(re, im), (n, v)| {
                let t = -2.0 * PI * (k * n % d) as f64 / d as f64;
                (re + v * t.cos(), im + v * t.sin())
            })
        })
        .collect()
}

pub fn naive_idft_real(spectrum: &[(f64, f64)]) -> Vec<f64> {
    let d = spectrum.len();
    (0..d)
        .map(|n| {
            spectrum
                .iter()
                .enumerate()
                .map(|(k, (re, im))| {
                    let t = 2.0 * PI * (k * n % d) as f64 / d as f64;
                    re * t.cos() - im * t.sin()
                })
                .sum::<f64>()
                / d as f64
        })
        .collect()
}

/// Position code from axis spectra: bin `k` has phase
/// `(x·φX_k + y·φY_k + z·φZ_k) / ℓ` with principal-branch axis phases.
pub fn position_oracle(axes: [&[f64]; 3], p: [f64; 3], length_scale: f64) -> Vec<f64> {
    let phases: Vec<Vec<f64>> = axes
        .iter()
        .map(|a| naive_dft(a).iter().map(|(re, im)| im.atan2(*re)).collect())
        .collect();
    let d = axes[0].len();
    let spectrum: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let phi = (0..3).map(|ax| p[ax] / length_scale * phases[ax][k]).sum::<f64>();
            (phi.cos(), phi.sin())
        })
        .collect();
    naive_idft_real(&spectrum)
}

/// `out[i] = v[(i − k) mod D]`
pub fn permute_oracle(v: &[i32], k: i64) -> Vec<i32> {
    let d = v.len() as i64;
    (0..d).map(|i| v[(i - k).rem_euclid(d) as usize]).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b) / (norm(a) * norm(b))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Central finite difference of `f` at every coordinate of `x`.
pub fn finite_difference(x: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            probe[k] = x[k] + h;
            let up = f(&probe);
            probe[k] = x[k] - h;
            let down = f(&probe);
            probe[k] = x[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

pub fn relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let diff = analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = norm(analytic).max(norm(numeric)).max(1e-12);
    diff / scale
}
