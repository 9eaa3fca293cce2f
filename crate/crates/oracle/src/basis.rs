//! Hat functions and their integrals by quadrature.

use nalgebra::DMatrix;

use crate::quadrature::adaptive_quadrature;

const TOL: f64 = 1e-14;

/// `h((x − u_j)/δ)` with `h(s) = max(1 − |s|, 0)`, `u_j = j/n`, `δ = 1/n`.
pub fn hat(x: f64, j: usize, n: usize) -> f64 {
    let delta = 1.0 / n as f64;
    let s = (x - j as f64 / n as f64) / delta;
    (1.0 - s.abs()).max(0.0)
}

/// `∫₀ˣ f`, split at the kinks of `h_j` so no panel can step over its support.
fn integrate_against_hat<F: Fn(f64) -> f64>(f: F, x: f64, j: usize, n: usize) -> f64 {
    let mut cuts = vec![0.0];
    for k in [j as f64 - 1.0, j as f64, j as f64 + 1.0] {
        let u = k / n as f64;
        if u > 0.0 && u < x {
            cuts.push(u);
        }
    }
    cuts.push(x);
    cuts.windows(2).map(|w| adaptive_quadrature(&f, w[0], w[1], TOL)).sum()
}

/// `∫₀ˣ h_j`.
pub fn psi(x: f64, j: usize, n: usize) -> f64 {
    integrate_against_hat(|t| hat(t, j, n), x, j, n)
}

/// `∫₀ˣ (x − t) h_j(t) dt`, the double integral collapsed by parts.
pub fn phi(x: f64, j: usize, n: usize) -> f64 {
    integrate_against_hat(|t| (x - t) * hat(t, j, n), x, j, n)
}

/// `∫₀ˣ ∫₀ᵗ h_j`, literally nested. Slow.
pub fn phi_nested(x: f64, j: usize, n: usize) -> f64 {
    integrate_against_hat(|t| psi(t, j, n), x, j, n)
}

/// `n_obs × (n+1)` matrix of `hat`, `psi` or `phi` (`integrations` = 0, 1, 2).
pub fn design(x: &[f64], n: usize, integrations: u8) -> DMatrix<f64> {
    DMatrix::from_fn(x.len(), n + 1, |i, j| match integrations {
        0 => hat(x[i], j, n),
        1 => psi(x[i], j, n),
        2 => phi(x[i], j, n),
        _ => panic!("at most two integrations"),
    })
}
