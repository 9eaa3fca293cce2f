//! Bayesian monotone and convex regression with a relaxed positive-orthant
//! constraint on Maatouk–Bay basis coefficients.
//!
//! The sampler stack is built from four pieces:
//!
//! * [`grid`]: regular knot grids and the Matérn correlation kernel,
//! * [`toeplitz`]: Durbin's recursion, inverse Cholesky factors, quadratic
//!   forms and log-determinants of SPD Toeplitz matrices in `O(M²)`,
//! * [`circulant`]: exact circulant-embedding draws from `N(0, τ²K)` via a
//!   radix-2 [`fft`],
//! * [`ess`]: elliptical slice sampling against the sigmoid-relaxed
//!   likelihood,
//!
//! which [`gibbs`] combines into full samplers for the monotone and convex
//! models. [`diagnostics`] holds effective sample size and prediction error.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, timing and the
//! command line live in the `shapereg` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod bessel;
pub mod circulant;
pub mod diagnostics;
pub mod error;
pub mod ess;
pub mod fft;
pub mod gibbs;
pub mod grid;
pub mod toeplitz;

pub use basis::{BasisDesign, BasisKind};
pub use circulant::{CirculantEmbedding, PriorSampler};
pub use error::{Error, Result};
pub use ess::RelaxedTarget;
pub use gibbs::{Chain, Clock, FitConfig, ModelState, Prediction, Shape};
pub use grid::{MaternParams, RegularGrid};
pub use toeplitz::{InverseCholesky, ToeplitzSpd};
