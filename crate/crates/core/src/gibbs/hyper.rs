//! Metropolis–Hastings moves for the Matérn hyperparameters `(ν, ℓ)`.
//!
//! The target is `p(ν, ℓ | ξ, τ²) ∝ |K|^{−1/2} exp(−ξᵀK⁻¹ξ / 2τ²)` on the
//! product of the uniform prior supports. Both terms come from the Durbin
//! inverse Cholesky factor, so a move costs `O(N²)`.

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::{kernel_first_row_with_nugget, MaternParams, RegularGrid};
use crate::toeplitz::{half_log_det_inv, inverse_cholesky, quad_form, InverseCholesky};

/// Closed interval `[lo, hi]` carrying a uniform prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Domain("support must satisfy 0 < lo < hi < ∞"));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    /// Fold `v` back into the interval by repeated reflection at the ends.
    pub fn reflect(&self, v: f64) -> f64 {
        let w = self.width();
        let period = 2.0 * w;
        let mut t = (v - self.lo) % period;
        if t < 0.0 {
            t += period;
        }
        if t > w {
            t = period - t;
        }
        self.lo + t
    }
}

/// Uniform priors on `ν` and `ℓ` plus the random-walk step sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperPrior {
    pub nu: Support,
    pub ell: Support,
    /// Proposal standard deviation as a fraction of each support width.
    pub step_fraction: f64,
}

impl Default for HyperPrior {
    fn default() -> Self {
        Self {
            nu: Support { lo: 0.5, hi: 1.0 },
            ell: Support { lo: 0.1, hi: 1.0 },
            step_fraction: 0.1,
        }
    }
}

impl HyperPrior {
    pub fn contains(&self, p: MaternParams) -> bool {
        self.nu.contains(p.nu) && self.ell.contains(p.ell)
    }

    pub fn midpoint(&self) -> MaternParams {
        MaternParams {
            nu: self.nu.midpoint(),
            ell: self.ell.midpoint(),
        }
    }

    /// Joint reflected Gaussian random-walk proposal (symmetric).
    pub fn propose<R: Rng + ?Sized>(&self, rng: &mut R, current: MaternParams) -> MaternParams {
        let znu: f64 = rng.sample(StandardNormal);
        let zell: f64 = rng.sample(StandardNormal);
        MaternParams {
            nu: self.nu.reflect(current.nu + self.step_fraction * self.nu.width() * znu),
            ell: self.ell.reflect(current.ell + self.step_fraction * self.ell.width() * zell),
        }
    }
}

/// Inverse Cholesky factor of the knot correlation matrix at `params`.
pub fn factor(grid: &RegularGrid, params: MaternParams, nugget: f64) -> Result<InverseCholesky> {
    inverse_cholesky(&kernel_first_row_with_nugget(grid, params, nugget)?)
}

/// `log|K|^{−1/2} − ξᵀK⁻¹ξ / (2τ²)` from a factor of `K`.
pub fn log_target_from_factor(s: &InverseCholesky, xi: &[f64], tau2: f64) -> Result<f64> {
    Ok(half_log_det_inv(s)? - quad_form(s, xi)? / (2.0 * tau2))
}

/// Unnormalised log posterior of `(ν, ℓ)`; `−∞` outside the supports.
pub fn hyper_log_target(
    grid: &RegularGrid,
    prior: &HyperPrior,
    params: MaternParams,
    xi: &[f64],
    tau2: f64,
    nugget: f64,
) -> Result<f64> {
    if !prior.contains(params) {
        return Ok(f64::NEG_INFINITY);
    }
    log_target_from_factor(&factor(grid, params, nugget)?, xi, tau2)
}

/// Log MH acceptance ratio for moving from `current` to `proposed`.
pub fn hyper_log_ratio(
    grid: &RegularGrid,
    prior: &HyperPrior,
    current: MaternParams,
    proposed: MaternParams,
    xi: &[f64],
    tau2: f64,
    nugget: f64,
) -> Result<f64> {
    let new = hyper_log_target(grid, prior, proposed, xi, tau2, nugget)?;
    if new == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(new - hyper_log_target(grid, prior, current, xi, tau2, nugget)?)
}

#[derive(Debug, Clone)]
pub struct HyperMove {
    pub params: MaternParams,
    pub accepted: bool,
    /// Factor at the new parameters when the move was accepted.
    pub factor: Option<InverseCholesky>,
}

/// One MH step. `current_factor` is the inverse Cholesky factor at `current`.
/// A proposal whose Toeplitz matrix breaks down is rejected with a warning.
#[allow(clippy::too_many_arguments)]
pub fn update_hypers<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &RegularGrid,
    prior: &HyperPrior,
    current: MaternParams,
    current_factor: &InverseCholesky,
    xi: &[f64],
    tau2: f64,
    nugget: f64,
) -> Result<HyperMove> {
    let proposed = prior.propose(rng, current);
    let rejected = HyperMove {
        params: current,
        accepted: false,
        factor: None,
    };
    let new_factor = match factor(grid, proposed, nugget) {
        Ok(s) => s,
        Err(e) if e.is_numerical() => {
            log::warn!("rejecting hyperparameter proposal {proposed:?}: {e}");
            return Ok(rejected);
        }
        Err(e) => return Err(e),
    };
    let log_ratio = log_target_from_factor(&new_factor, xi, tau2)?
        - log_target_from_factor(current_factor, xi, tau2)?;
    let u: f64 = rng.random();
    if u.ln() < log_ratio {
        Ok(HyperMove {
            params: proposed,
            accepted: true,
            factor: Some(new_factor),
        })
    } else {
        Ok(rejected)
    }
}
