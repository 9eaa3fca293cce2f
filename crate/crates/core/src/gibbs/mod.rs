//! Gibbs samplers for the monotone model `Y = ξ₀1 + Ψξ + ε` and the convex
//! model `Y = ξ₀1 + ξ*X + Φξ + ε`.
//!
//! One sweep updates `ξ` by elliptical slice sampling against the relaxed
//! target, then `ξ₀`, `ξ*` (convex only), `σ²` and `τ²` from their conjugate
//! conditionals, and finally (optionally) `(ν, ℓ)` by Metropolis–Hastings.
//! The circulant embedding is rebuilt only when `(ν, ℓ)` moves; `τ²` enters
//! prior draws as a scale factor.

pub mod conditionals;
pub mod hyper;
mod predict;

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{BasisDesign, BasisKind};
use crate::circulant::{CirculantEmbedding, PriorSampler, DEFAULT_MAX_EXPONENT};
use crate::error::{Error, Result};
use crate::ess::{RelaxedTarget, DEFAULT_ETA, DEFAULT_MAX_SHRINKS};
use crate::grid::{default_lengthscale, MaternKernel, MaternParams, RegularGrid};
use crate::toeplitz::{quad_form, InverseCholesky};

pub use conditionals::{draw_intercept, draw_inverse_gamma, draw_sigma2, draw_slope, draw_tau2};
pub use hyper::{HyperMove, HyperPrior, Support};
pub use predict::{quantile, Prediction};

/// Default fixed smoothness when `(ν, ℓ)` are not updated.
pub const DEFAULT_NU: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    MonotoneIncreasing,
    /// Fitted as an increasing function of `−Y`, then negated.
    MonotoneDecreasing,
    Convex,
}

impl Shape {
    pub fn basis_kind(self) -> BasisKind {
        match self {
            Shape::MonotoneIncreasing | Shape::MonotoneDecreasing => BasisKind::IntegratedOnce,
            Shape::Convex => BasisKind::IntegratedTwice,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Shape::MonotoneDecreasing => -1.0,
            _ => 1.0,
        }
    }
}

/// One MCMC state. For the decreasing shape the coefficients describe `−f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    pub intercept: f64,
    /// `ξ*`; stays zero for the monotone models.
    pub slope: f64,
    pub xi: Vec<f64>,
    pub sigma2: f64,
    pub tau2: f64,
    pub params: MaternParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub shape: Shape,
    pub n_iter: usize,
    pub burn_in: usize,
    pub eta: f64,
    /// Number of knot spacings `N`; `None` means `⌈n/2⌉`.
    pub knots: Option<usize>,
    pub update_hypers: bool,
    /// Smoothness used when hyperparameters are fixed.
    pub nu: f64,
    /// Length-scale used when hyperparameters are fixed; `None` picks the
    /// value with correlation 0.05 across the covariate range.
    pub ell: Option<f64>,
    pub prior: HyperPrior,
    pub seed: u64,
    /// ChaCha stream, so parallel chains can share a seed.
    pub stream: u64,
    pub max_shrinks: usize,
    pub max_exponent: u32,
    pub nugget: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            shape: Shape::MonotoneIncreasing,
            n_iter: 12_000,
            burn_in: 2_000,
            eta: DEFAULT_ETA,
            knots: None,
            update_hypers: false,
            nu: DEFAULT_NU,
            ell: None,
            prior: HyperPrior::default(),
            seed: 0,
            stream: 0,
            max_shrinks: DEFAULT_MAX_SHRINKS,
            max_exponent: DEFAULT_MAX_EXPONENT,
            nugget: 0.0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.n_iter {
            return Err(Error::Domain("burn-in must be shorter than the chain"));
        }
        if matches!(self.knots, Some(k) if k < 2) {
            return Err(Error::Domain("at least two knot spacings are required"));
        }
        if !(self.eta > 0.0) {
            return Err(Error::Domain("relaxation sharpness must be positive"));
        }
        if !(self.prior.step_fraction > 0.0) {
            return Err(Error::Domain("proposal step must be positive"));
        }
        Support::new(self.prior.nu.lo, self.prior.nu.hi)?;
        Support::new(self.prior.ell.lo, self.prior.ell.hi)?;
        if !(self.nugget >= 0.0) {
            return Err(Error::Domain("nugget must be nonnegative"));
        }
        Ok(())
    }

    /// `N` for `n` observations.
    pub fn spacings_for(&self, n: usize) -> usize {
        self.knots.unwrap_or_else(|| n.div_ceil(2).max(2))
    }
}

/// Source of wall-clock time in seconds.
pub trait Clock {
    fn now(&mut self) -> f64;
}

/// Records zero for every iteration.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&mut self) -> f64 {
        0.0
    }
}

/// Retained (post burn-in) states plus run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub shape: Shape,
    pub grid: RegularGrid,
    pub states: Vec<ModelState>,
    pub n_iter: usize,
    pub burn_in: usize,
    pub hyper_proposals: usize,
    pub hyper_accepts: usize,
    /// Wall time of every iteration, burn-in included.
    pub iter_seconds: Vec<f64>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Fraction of accepted `(ν, ℓ)` proposals, if any were made.
    pub fn acceptance_rate(&self) -> Option<f64> {
        (self.hyper_proposals > 0).then(|| self.hyper_accepts as f64 / self.hyper_proposals as f64)
    }

    /// Append the retained states of another chain on the same grid.
    pub fn merge(&mut self, other: Chain) -> Result<()> {
        if other.grid != self.grid || other.shape != self.shape {
            return Err(Error::Domain("chains disagree on shape or grid"));
        }
        self.states.extend(other.states);
        self.hyper_proposals += other.hyper_proposals;
        self.hyper_accepts += other.hyper_accepts;
        self.iter_seconds.extend(other.iter_seconds);
        Ok(())
    }
}

/// A single Gibbs chain.
#[derive(Debug, Clone)]
pub struct Sampler {
    config: FitConfig,
    /// Response on the fitting scale (negated for the decreasing shape).
    y: Vec<f64>,
    x: Vec<f64>,
    design: BasisDesign,
    state: ModelState,
    prior: PriorSampler,
    factor: InverseCholesky,
    /// `Bξ` for the current `ξ`.
    fitted: Vec<f64>,
    rng: ChaCha8Rng,
    hyper_proposals: usize,
    hyper_accepts: usize,
}

impl Sampler {
    /// `x` must already lie in `[0, 1]`.
    pub fn new(y: &[f64], x: &[f64], config: FitConfig) -> Result<Self> {
        config.validate()?;
        if y.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        if y.len() < 2 {
            return Err(Error::Degenerate("need at least two observations"));
        }
        if y.iter().chain(x).any(|v| !v.is_finite()) {
            return Err(Error::Domain("data contain non-finite values"));
        }
        let n = y.len();
        let sign = config.shape.sign();
        let y: Vec<f64> = y.iter().map(|v| sign * v).collect();
        let grid = RegularGrid::new(config.spacings_for(n))?;
        let design = BasisDesign::new(x, &grid, config.shape.basis_kind())?;

        let params = if config.update_hypers {
            config.prior.midpoint()
        } else {
            let ell = match config.ell {
                Some(ell) => ell,
                None => default_lengthscale(x, config.nu)?,
            };
            MaternParams::new(config.nu, ell)?
        };

        let mean = y.iter().sum::<f64>() / n as f64;
        let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
        let state = ModelState {
            intercept: mean,
            slope: 0.0,
            xi: vec![1.0; grid.len()],
            sigma2: if var > 0.0 { var / 2.0 } else { 1.0 },
            tau2: 1.0,
            params,
        };

        let (prior, factor) = Self::kernel_parts(&grid, &config, params)?;
        let fitted = design.apply(&state.xi)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(config.stream);
        Ok(Self {
            config,
            y,
            x: x.to_vec(),
            design,
            state,
            prior,
            factor,
            fitted,
            rng,
            hyper_proposals: 0,
            hyper_accepts: 0,
        })
    }

    fn kernel_parts(
        grid: &RegularGrid,
        config: &FitConfig,
        params: MaternParams,
    ) -> Result<(PriorSampler, InverseCholesky)> {
        let kernel = MaternKernel::with_nugget(params, config.nugget);
        let embedding = CirculantEmbedding::from_kernel(grid, &kernel, config.max_exponent)?;
        let factor = hyper::factor(grid, params, config.nugget)?;
        Ok((PriorSampler::new(embedding), factor))
    }

    /// Replace the current state (e.g. for randomised initialisation).
    pub fn with_state(mut self, state: ModelState) -> Result<Self> {
        if state.xi.len() != self.design.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.design.cols(),
                found: state.xi.len(),
            });
        }
        if !(state.sigma2 > 0.0 && state.tau2 > 0.0) {
            return Err(Error::Domain("variances must be positive"));
        }
        if state.params != self.state.params {
            let (prior, factor) = Self::kernel_parts(self.design.grid(), &self.config, state.params)?;
            self.prior = prior;
            self.factor = factor;
        }
        self.fitted = self.design.apply(&state.xi)?;
        self.state = state;
        Ok(self)
    }

    pub fn state(&self) -> &ModelState {
        &self.state
    }

    pub fn config(&self) -> &FitConfig {
        &self.config
    }

    pub fn design(&self) -> &BasisDesign {
        &self.design
    }

    pub fn grid(&self) -> &RegularGrid {
        self.design.grid()
    }

    /// One full Gibbs sweep.
    pub fn step(&mut self) -> Result<()> {
        let n = self.y.len();
        let convex = self.config.shape == Shape::Convex;

        // ξ | rest
        let working: Vec<f64> = self
            .y
            .iter()
            .zip(&self.x)
            .map(|(y, x)| y - self.state.intercept - self.state.slope * x)
            .collect();
        let target = RelaxedTarget::new(&self.design, &working, self.state.sigma2, self.config.eta)?;
        let out = target.ess_step(
            &self.state.xi,
            &mut self.prior,
            self.state.tau2,
            &mut self.rng,
            self.config.max_shrinks,
        )?;
        self.state.xi = out.xi;
        self.fitted = out.projection;

        // ξ₀ | rest
        let working: Vec<f64> = self
            .y
            .iter()
            .zip(&self.x)
            .zip(&self.fitted)
            .map(|((y, x), f)| y - self.state.slope * x - f)
            .collect();
        self.state.intercept = draw_intercept(&mut self.rng, &working, self.state.sigma2)?;

        // ξ* | rest
        if convex {
            let working: Vec<f64> = self
                .y
                .iter()
                .zip(&self.fitted)
                .map(|(y, f)| y - self.state.intercept - f)
                .collect();
            self.state.slope = draw_slope(&mut self.rng, &self.x, &working, self.state.sigma2)?;
        }

        // σ² | rest
        let rss: f64 = self
            .y
            .iter()
            .zip(&self.x)
            .zip(&self.fitted)
            .map(|((y, x), f)| {
                let e = y - self.state.intercept - self.state.slope * x - f;
                e * e
            })
            .sum();
        self.state.sigma2 = draw_sigma2(&mut self.rng, rss, n)?;

        // τ² | rest
        let quad = quad_form(&self.factor, &self.state.xi)?;
        self.state.tau2 = draw_tau2(&mut self.rng, quad, self.state.xi.len())?;

        // (ν, ℓ) | rest
        if self.config.update_hypers {
            self.hyper_proposals += 1;
            let mv = hyper::update_hypers(
                &mut self.rng,
                self.design.grid(),
                &self.config.prior,
                self.state.params,
                &self.factor,
                &self.state.xi,
                self.state.tau2,
                self.config.nugget,
            )?;
            if let Some(factor) = mv.factor {
                let kernel = MaternKernel::with_nugget(mv.params, self.config.nugget);
                match CirculantEmbedding::from_kernel(self.design.grid(), &kernel, self.config.max_exponent) {
                    Ok(embedding) => {
                        self.prior.set_embedding(embedding);
                        self.factor = factor;
                        self.state.params = mv.params;
                        self.hyper_accepts += 1;
                    }
                    Err(e) if e.is_numerical() => {
                        log::warn!("rejecting hyperparameters {:?}: {e}", mv.params);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    /// Run `n_iter` sweeps and keep the states after burn-in.
    pub fn run<C: Clock>(mut self, clock: &mut C) -> Result<Chain> {
        let keep = self.config.n_iter - self.config.burn_in;
        let mut states = Vec::with_capacity(keep);
        let mut iter_seconds = Vec::with_capacity(self.config.n_iter);
        for it in 0..self.config.n_iter {
            let start = clock.now();
            self.step()?;
            iter_seconds.push(clock.now() - start);
            if it >= self.config.burn_in {
                states.push(self.state.clone());
            }
        }
        Ok(Chain {
            shape: self.config.shape,
            grid: self.design.grid().clone(),
            states,
            n_iter: self.config.n_iter,
            burn_in: self.config.burn_in,
            hyper_proposals: self.hyper_proposals,
            hyper_accepts: self.hyper_accepts,
            iter_seconds,
        })
    }
}

/// Fit the model with covariates `x ∈ [0, 1]`; deterministic given the seed.
pub fn run_chain(y: &[f64], x: &[f64], config: &FitConfig) -> Result<Chain> {
    Sampler::new(y, x, config.clone())?.run(&mut NoClock)
}

/// As [`run_chain`], timing each iteration with `clock`.
pub fn run_chain_timed<C: Clock>(y: &[f64], x: &[f64], config: &FitConfig, clock: &mut C) -> Result<Chain> {
    Sampler::new(y, x, config.clone())?.run(clock)
}
