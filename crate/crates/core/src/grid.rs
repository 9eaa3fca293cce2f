//! Regular knot grids on `[0, 1]` and the stationary Matérn correlation.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bessel::bessel_k;
use crate::error::{Error, Result};
use crate::toeplitz::ToeplitzSpd;

/// Knots `u_j = j/N`, `j = 0..=N`, with spacing `δ_N = 1/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularGrid {
    spacings: usize,
    knots: Vec<f64>,
}

impl RegularGrid {
    pub fn new(spacings: usize) -> Result<Self> {
        if spacings == 0 {
            return Err(Error::Domain("grid needs at least one spacing"));
        }
        let n = spacings as f64;
        let knots = (0..=spacings).map(|j| j as f64 / n).collect();
        Ok(Self { spacings, knots })
    }

    /// `N`, the number of spacings.
    pub fn spacings(&self) -> usize {
        self.spacings
    }

    /// `N + 1`, the number of knots (and of basis coefficients).
    pub fn len(&self) -> usize {
        self.spacings + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.spacings as f64
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn knot(&self, j: usize) -> f64 {
        self.knots[j]
    }
}

/// Matérn smoothness `ν` and length-scale `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaternParams {
    pub nu: f64,
    pub ell: f64,
}

impl MaternParams {
    pub fn new(nu: f64, ell: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::Domain("matern smoothness must be positive"));
        }
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::Domain("matern length-scale must be positive"));
        }
        Ok(Self { nu, ell })
    }
}

/// A Matérn correlation with its normalising constant precomputed, plus an
/// optional diagonal nugget.
///
/// With nugget `g` the correlation at lag `r` is `(k(r) + g·[r = 0]) / (1 + g)`,
/// so the value at zero lag stays exactly one.
#[derive(Debug, Clone, Copy)]
pub struct MaternKernel {
    params: MaternParams,
    scale: f64,
    log_norm: f64,
    nugget: f64,
}

impl MaternKernel {
    pub fn new(params: MaternParams) -> Self {
        Self::with_nugget(params, 0.0)
    }

    pub fn with_nugget(params: MaternParams, nugget: f64) -> Self {
        let nu = params.nu;
        Self {
            params,
            scale: (2.0 * nu).sqrt() / params.ell,
            log_norm: (1.0 - nu) * core::f64::consts::LN_2 - libm::lgamma(nu),
            nugget: nugget.max(0.0),
        }
    }

    pub fn params(&self) -> MaternParams {
        self.params
    }

    /// Unit-variance Matérn correlation at distance `r ≥ 0` (no nugget).
    pub fn raw(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 1.0;
        }
        let x = self.scale * r;
        if x > 700.0 {
            return 0.0;
        }
        let nu = self.params.nu;
        (self.log_norm + nu * x.ln()).exp() * bessel_k(nu, x)
    }

    /// Correlation at distance `r`, including the nugget.
    pub fn correlation(&self, r: f64) -> f64 {
        let k = self.raw(r);
        if self.nugget == 0.0 {
            k
        } else if r == 0.0 {
            1.0
        } else {
            k / (1.0 + self.nugget)
        }
    }
}

/// `k(r) = 2^{1−ν}/Γ(ν) (√(2ν) r/ℓ)^ν K_ν(√(2ν) r/ℓ)`.
pub fn matern(r: f64, params: MaternParams) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain("distance must be nonnegative"));
    }
    let params = MaternParams::new(params.nu, params.ell)?;
    Ok(MaternKernel::new(params).raw(r))
}

/// First row `(k(0), k(δ), …, k(Nδ))` of the knot correlation matrix `K`.
pub fn kernel_first_row(grid: &RegularGrid, params: MaternParams) -> Result<ToeplitzSpd> {
    kernel_first_row_with_nugget(grid, params, 0.0)
}

pub fn kernel_first_row_with_nugget(
    grid: &RegularGrid,
    params: MaternParams,
    nugget: f64,
) -> Result<ToeplitzSpd> {
    let params = MaternParams::new(params.nu, params.ell)?;
    if !(nugget >= 0.0) {
        return Err(Error::Domain("nugget must be nonnegative"));
    }
    let kernel = MaternKernel::with_nugget(params, nugget);
    let delta = grid.delta();
    let row = (0..grid.len())
        .map(|j| kernel.correlation(j as f64 * delta))
        .collect();
    ToeplitzSpd::new(row)
}

/// Target correlation at the maximal covariate separation.
pub const DEFAULT_FAR_CORRELATION: f64 = 0.05;

/// Length-scale for which the correlation at the largest covariate separation
/// equals 0.05, found by bisection (the correlation is increasing in `ℓ`).
pub fn default_lengthscale(x: &[f64], nu: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Degenerate("no covariates"));
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return Err(Error::Degenerate("all covariates are equal"));
    }
    lengthscale_for_correlation(span, nu, DEFAULT_FAR_CORRELATION)
}

/// Solve `k(span; ν, ℓ) = target` for `ℓ`.
pub fn lengthscale_for_correlation(span: f64, nu: f64, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Domain("target correlation must lie in (0, 1)"));
    }
    let at = |ell: f64| -> Result<f64> { matern(span, MaternParams::new(nu, ell)?) };
    let mut lo = span * 1e-3;
    let mut hi = span;
    while at(lo)? > target {
        lo *= 0.5;
    }
    while at(hi)? < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nu: f64, ell: f64) -> MaternParams {
        MaternParams::new(nu, ell).unwrap()
    }

    #[test]
    fn grid_knots() {
        let g = RegularGrid::new(7).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.knot(0), 0.0);
        assert_eq!(g.knot(7), 1.0);
        for w in g.knots().windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - g.delta()).abs() < 1e-15);
        }
        assert!(RegularGrid::new(0).is_err());
    }

    #[test]
    fn matern_zero_lag_is_one() {
        assert_eq!(matern(0.0, p(0.75, 0.3)).unwrap(), 1.0);
        assert_eq!(matern(0.0, p(0.5, 0.01)).unwrap(), 1.0);
    }

    #[test]
    fn matern_half_is_exponential() {
        let v = matern(0.3, p(0.5, 0.2)).unwrap();
        assert!((v - (-1.5f64).exp()).abs() < 1e-14);
        assert!((v - 0.22313).abs() < 1e-5);
    }

    #[test]
    fn matern_three_quarters_reference() {
        // high-precision reference (50-digit arithmetic)
        let v = matern(0.3, p(0.75, 0.2)).unwrap();
        assert!((v - 0.241_658_529_922_584_2).abs() < 1e-12, "{v}");
    }

    #[test]
    fn matern_rejects_bad_input() {
        assert!(matern(-0.1, p(0.5, 0.2)).is_err());
        assert!(matern(0.1, MaternParams { nu: 0.0, ell: 1.0 }).is_err());
        assert!(matern(0.1, MaternParams { nu: 1.0, ell: -1.0 }).is_err());
        assert!(MaternParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn first_rows_small() {
        let row = kernel_first_row(&RegularGrid::new(1).unwrap(), p(0.5, 1.0)).unwrap();
        assert_eq!(row.first_row()[0], 1.0);
        assert!((row.first_row()[1] - (-1.0f64).exp()).abs() < 1e-15);

        let row = kernel_first_row(&RegularGrid::new(2).unwrap(), p(0.5, 0.5)).unwrap();
        let want = [1.0, (-1.0f64).exp(), (-2.0f64).exp()];
        for (a, b) in row.first_row().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn nugget_keeps_unit_diagonal() {
        let g = RegularGrid::new(4).unwrap();
        let plain = kernel_first_row(&g, p(0.75, 0.3)).unwrap();
        let nug = kernel_first_row_with_nugget(&g, p(0.75, 0.3), 0.25).unwrap();
        assert_eq!(nug.first_row()[0], 1.0);
        for j in 1..5 {
            assert!((nug.first_row()[j] - plain.first_row()[j] / 1.25).abs() < 1e-15);
        }
    }

    #[test]
    fn default_lengthscale_exponential() {
        let ell = default_lengthscale(&[0.0, 0.4, 1.0], 0.5).unwrap();
        assert!((ell - (-1.0 / 0.05f64.ln())).abs() < 1e-10);
        assert!((ell - 0.33381).abs() < 1e-5);
        let ell = default_lengthscale(&[0.25, 0.75], 0.5).unwrap();
        assert!((ell - 0.16690).abs() < 1e-5);
    }

    #[test]
    fn default_lengthscale_three_quarters_hits_target() {
        let ell = default_lengthscale(&[0.0, 1.0], 0.75).unwrap();
        let v = matern(1.0, p(0.75, ell)).unwrap();
        assert!((v - 0.05).abs() < 1e-8);
    }

    #[test]
    fn default_lengthscale_degenerate() {
        assert!(matches!(default_lengthscale(&[0.3, 0.3, 0.3], 0.75), Err(Error::Degenerate(_))));
        assert!(default_lengthscale(&[], 0.75).is_err());
    }
}
