//! Elliptical slice sampling against the sigmoid-relaxed likelihood.
//!
//! The orthant indicator is replaced by `∏ σ(η ξ_j)`, which is folded into
//! the likelihood so that the prior on `ξ` is an untruncated `N(0, τ²K)`.
//! Each update draws `ν ~ N(0, τ²K)` and searches the ellipse
//! `ξ cos θ + ν sin θ` with a shrinking angle bracket.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::basis::BasisDesign;
use crate::circulant::PriorSampler;
use crate::error::{Error, Result};

/// Default relaxation sharpness.
pub const DEFAULT_ETA: f64 = 50.0;
/// Default cap on bracket shrinks per update.
pub const DEFAULT_MAX_SHRINKS: usize = 100;

/// `log(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// A likelihood whose dependence on `ξ` goes through a linear projection,
/// so points on the ellipse can be scored without re-projecting.
pub trait EllipseLikelihood {
    type Projection;

    fn project(&self, v: &[f64]) -> Self::Projection;

    /// Projection of `xi cos θ + nu sin θ` given the projections of both.
    fn rotate(
        &self,
        xi: &Self::Projection,
        nu: &Self::Projection,
        sin: f64,
        cos: f64,
    ) -> Self::Projection;

    fn log_likelihood_projected(&self, xi: &[f64], projection: &Self::Projection) -> f64;

    fn log_likelihood(&self, xi: &[f64]) -> f64 {
        let p = self.project(xi);
        self.log_likelihood_projected(xi, &p)
    }
}

/// `ξ cos θ + ν sin θ`.
pub fn ellipse_point(xi: &[f64], nu: &[f64], theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    xi.iter().zip(nu).map(|(x, n)| x * c + n * s).collect()
}

#[derive(Debug, Clone)]
pub struct EssOutcome<P> {
    pub xi: Vec<f64>,
    pub projection: P,
    pub log_likelihood: f64,
    /// Accepted angle.
    pub theta: f64,
    /// Number of rejected proposals before acceptance.
    pub shrinks: usize,
}

/// One elliptical slice update of `xi` given a prior draw `nu`.
pub fn elliptical_slice<L, R>(
    target: &L,
    xi: &[f64],
    nu: &[f64],
    rng: &mut R,
    max_shrinks: usize,
) -> Result<EssOutcome<L::Projection>>
where
    L: EllipseLikelihood,
    R: Rng + ?Sized,
{
    elliptical_slice_observed(target, xi, nu, rng, max_shrinks, |_, _, _| {})
}

/// As [`elliptical_slice`], reporting `(θ_min, θ_max, θ)` for every proposal.
pub fn elliptical_slice_observed<L, R, F>(
    target: &L,
    xi: &[f64],
    nu: &[f64],
    rng: &mut R,
    max_shrinks: usize,
    mut observe: F,
) -> Result<EssOutcome<L::Projection>>
where
    L: EllipseLikelihood,
    R: Rng + ?Sized,
    F: FnMut(f64, f64, f64),
{
    if xi.len() != nu.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            found: nu.len(),
        });
    }
    let xi_proj = target.project(xi);
    let nu_proj = target.project(nu);
    let current = target.log_likelihood_projected(xi, &xi_proj);
    let u: f64 = rng.random();
    let threshold = current + u.ln();

    let mut theta = rng.random::<f64>() * 2.0 * PI;
    let mut lo = theta - 2.0 * PI;
    let mut hi = theta;
    let mut shrinks = 0;
    loop {
        observe(lo, hi, theta);
        let (s, c) = theta.sin_cos();
        let proposal: Vec<f64> = xi.iter().zip(nu).map(|(x, n)| x * c + n * s).collect();
        let projection = target.rotate(&xi_proj, &nu_proj, s, c);
        let ll = target.log_likelihood_projected(&proposal, &projection);
        if ll > threshold {
            return Ok(EssOutcome {
                xi: proposal,
                projection,
                log_likelihood: ll,
                theta,
                shrinks,
            });
        }
        if shrinks == max_shrinks {
            return Err(Error::ShrinkLimit(max_shrinks));
        }
        shrinks += 1;
        if theta < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        theta = lo + rng.random::<f64>() * (hi - lo);
    }
}

/// Relaxed conditional target for `ξ`: Gaussian likelihood of the working
/// response `residual ≈ Bξ` times `∏ σ(η ξ_j)`.
#[derive(Debug, Clone, Copy)]
pub struct RelaxedTarget<'a> {
    design: &'a BasisDesign,
    residual: &'a [f64],
    sigma2: f64,
    eta: f64,
}

impl<'a> RelaxedTarget<'a> {
    pub fn new(design: &'a BasisDesign, residual: &'a [f64], sigma2: f64, eta: f64) -> Result<Self> {
        if residual.len() != design.rows() {
            return Err(Error::DimensionMismatch {
                expected: design.rows(),
                found: residual.len(),
            });
        }
        if !(sigma2 > 0.0) {
            return Err(Error::Domain("noise variance must be positive"));
        }
        if !(eta > 0.0) {
            return Err(Error::Domain("relaxation sharpness must be positive"));
        }
        Ok(Self {
            design,
            residual,
            sigma2,
            eta,
        })
    }

    pub fn dim(&self) -> usize {
        self.design.cols()
    }

    /// `Σ_j log σ(η ξ_j)`.
    pub fn log_relaxation(&self, xi: &[f64]) -> f64 {
        -xi.iter().map(|&x| softplus(-self.eta * x)).sum::<f64>()
    }

    /// `−‖r − Bξ‖²/(2σ²) + Σ_j log σ(η ξ_j)`.
    pub fn log_relaxed_likelihood(&self, xi: &[f64]) -> Result<f64> {
        let fitted = self.design.apply(xi)?;
        Ok(self.log_likelihood_projected(xi, &fitted))
    }

    /// One ESS update with a fresh prior draw from `prior`.
    pub fn ess_step<R: Rng + ?Sized>(
        &self,
        xi: &[f64],
        prior: &mut PriorSampler,
        tau2: f64,
        rng: &mut R,
        max_shrinks: usize,
    ) -> Result<EssOutcome<Vec<f64>>> {
        if prior.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: prior.dim(),
            });
        }
        let nu = prior.draw(rng, tau2);
        elliptical_slice(self, xi, &nu, rng, max_shrinks)
    }
}

impl EllipseLikelihood for RelaxedTarget<'_> {
    type Projection = Vec<f64>;

    fn project(&self, v: &[f64]) -> Vec<f64> {
        self.design.apply(v).expect("coefficient length matches design")
    }

    fn rotate(&self, xi: &Vec<f64>, nu: &Vec<f64>, sin: f64, cos: f64) -> Vec<f64> {
        xi.iter().zip(nu).map(|(x, n)| x * cos + n * sin).collect()
    }

    fn log_likelihood_projected(&self, xi: &[f64], fitted: &Vec<f64>) -> f64 {
        let rss: f64 = self
            .residual
            .iter()
            .zip(fitted)
            .map(|(r, f)| (r - f) * (r - f))
            .sum();
        -rss / (2.0 * self.sigma2) + self.log_relaxation(xi)
    }
}
