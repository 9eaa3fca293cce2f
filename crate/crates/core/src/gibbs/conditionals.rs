//! Conditionally conjugate updates for the intercept, slope and variances.

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};

/// Floor applied to inverse-gamma rates (residual sums of squares and prior
/// quadratic forms) at degenerate states.
pub const RATE_FLOOR: f64 = 1e-12;

/// `N(mean(working), σ²/n)` where `working = Y − ξ*X − Bξ`.
pub fn draw_intercept<R: Rng + ?Sized>(rng: &mut R, working: &[f64], sigma2: f64) -> Result<f64> {
    if working.is_empty() {
        return Err(Error::Degenerate("no observations"));
    }
    let n = working.len() as f64;
    let mean = working.iter().sum::<f64>() / n;
    let z: f64 = rng.sample(StandardNormal);
    Ok(mean + (sigma2 / n).sqrt() * z)
}

/// `N(Σ x_i w_i / Σ x_i², σ² / Σ x_i²)` where `w = Y − ξ₀1 − Bξ`.
pub fn draw_slope<R: Rng + ?Sized>(
    rng: &mut R,
    x: &[f64],
    working: &[f64],
    sigma2: f64,
) -> Result<f64> {
    if x.len() != working.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: working.len(),
        });
    }
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    if !(sxx > 0.0) {
        return Err(Error::Degenerate("all covariates are zero"));
    }
    let sxy: f64 = x.iter().zip(working).map(|(a, b)| a * b).sum();
    let z: f64 = rng.sample(StandardNormal);
    Ok(sxy / sxx + (sigma2 / sxx).sqrt() * z)
}

/// `IG(shape, rate)` as `rate / Gamma(shape, 1)`.
pub fn draw_inverse_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, rate: f64) -> Result<f64> {
    let g = Gamma::new(shape, 1.0).map_err(|_| Error::Domain("inverse-gamma shape must be positive"))?;
    Ok(rate / g.sample(rng))
}

/// `σ² ~ IG(n/2, RSS/2)`.
pub fn draw_sigma2<R: Rng + ?Sized>(rng: &mut R, rss: f64, n: usize) -> Result<f64> {
    draw_inverse_gamma(rng, n as f64 / 2.0, rss.max(RATE_FLOOR) / 2.0)
}

/// `τ² ~ IG(dim/2, ξᵀK⁻¹ξ/2)`.
pub fn draw_tau2<R: Rng + ?Sized>(rng: &mut R, quad: f64, dim: usize) -> Result<f64> {
    draw_inverse_gamma(rng, dim as f64 / 2.0, quad.max(RATE_FLOOR) / 2.0)
}
