//! DFT helpers between centered time samples and ascending-frequency spectra.
//!
//! With fields written as `E(t) = sum_j Z_j exp(-i Omega_j t)`, the analysis
//! step uses the `exp(+i Omega t)` kernel, which is rustfft's inverse
//! transform. Multiplying `Z` by `exp(i Omega tau)` then delays the envelope
//! by `tau`.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Time samples (origin at `n/2`) to spectrum (zero frequency at `n/2`).
pub fn to_spectrum(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    buf.rotate_left(n / 2);
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf.rotate_left(n / 2);
    buf
}

/// Inverse of [`to_spectrum`].
pub fn from_spectrum(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    let mut buf = spectrum.to_vec();
    buf.rotate_left(n / 2);
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for v in &mut buf {
        *v *= scale;
    }
    buf.rotate_left(n / 2);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn round_trip() {
        let x: Vec<Complex64> = (0..64)
            .map(|k| Complex64::new((k as f64 * 0.3).sin(), (k as f64 * 0.1).cos()))
            .collect();
        let back = from_spectrum(&to_spectrum(&x));
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_sign_matches_direct_sum() {
        let n = 16;
        let x: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64, -(k as f64) * 0.5)).collect();
        let z = to_spectrum(&x);
        for (j, zj) in z.iter().enumerate() {
            let m = j as f64 - (n / 2) as f64;
            let direct: Complex64 = x
                .iter()
                .enumerate()
                .map(|(k, xk)| {
                    let t = k as f64 - (n / 2) as f64;
                    xk * Complex64::from_polar(1.0, 2.0 * PI * m * t / n as f64)
                })
                .sum();
            assert!((direct - zj).norm() < 1e-10, "bin {j}");
        }
    }
}
