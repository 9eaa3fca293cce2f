//! Direct discrete Fourier transform.

use std::f64::consts::PI;

use nalgebra::Complex;

/// `X_k = Σ_j x_j e^{∓2πi jk/n}`; the inverse (`inverse = true`) divides by `n`.
pub fn naive_dft(x: &[Complex<f64>], inverse: bool) -> Vec<Complex<f64>> {
    let n = x.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..n)
        .map(|k| {
            let sum: Complex<f64> = x
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    // reduce jk mod n first so the angle stays small
                    let angle = sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    v * Complex::new(angle.cos(), angle.sin())
                })
                .sum();
            if inverse {
                sum / n as f64
            } else {
                sum
            }
        })
        .collect()
}
