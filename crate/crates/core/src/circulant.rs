//! Exact circulant embedding of a stationary covariance on a regular grid and
//! FFT-based sampling from `N(0, τ²K)`.
//!
//! The `m × m` Toeplitz matrix is embedded in a symmetric circulant of order
//! `d = 2^g ≥ 2(m − 1)`. Lags up to `d/2` fill the first half of the circulant
//! row, the rest is its mirror image. Lags beyond the known Toeplitz row are
//! evaluated from the covariance function. The order is doubled until the
//! spectrum is nonnegative; there is no approximate fallback.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::grid::{MaternKernel, RegularGrid};
use crate::toeplitz::ToeplitzSpd;

/// Absolute slack below zero tolerated (and clamped) in the spectrum.
pub const EIGENVALUE_SLACK: f64 = 1e-9;

/// Default cap on the embedding exponent, `d ≤ 2^20`.
pub const DEFAULT_MAX_EXPONENT: u32 = 20;

#[derive(Debug, Clone)]
pub struct CirculantEmbedding {
    m: usize,
    base_row: Vec<f64>,
    eigenvalues: Vec<f64>,
    /// `√(λ_k / d)`
    amplitudes: Vec<f64>,
    plan: FftPlan,
}

impl CirculantEmbedding {
    /// Embed `t`; `extend(j)` supplies the covariance at lag index `j ≥ m`.
    pub fn embed<F>(t: &ToeplitzSpd, extend: F, max_exponent: u32) -> Result<Self>
    where
        F: Fn(usize) -> f64,
    {
        let m = t.dim();
        if m < 2 {
            return Err(Error::Domain("circulant embedding needs at least two grid points"));
        }
        let row = t.first_row();
        let lag = |j: usize| if j < m { row[j] } else { extend(j) };

        let mut d = (2 * (m - 1)).next_power_of_two();
        let mut min_eig = f64::NEG_INFINITY;
        while d <= 1usize << max_exponent {
            let mut base_row = vec![0.0; d];
            for j in 0..=d / 2 {
                base_row[j] = lag(j);
            }
            for j in d / 2 + 1..d {
                base_row[j] = base_row[d - j];
            }
            let plan = FftPlan::new(d)?;
            let mut buf: Vec<Complex64> = base_row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            plan.forward(&mut buf)?;
            let mut eigenvalues: Vec<f64> = buf.iter().map(|z| z.re).collect();
            min_eig = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            if min_eig >= -EIGENVALUE_SLACK {
                eigenvalues.iter_mut().for_each(|v| *v = v.max(0.0));
                let inv_d = 1.0 / d as f64;
                let amplitudes = eigenvalues.iter().map(|&v| (v * inv_d).sqrt()).collect();
                return Ok(Self {
                    m,
                    base_row,
                    eigenvalues,
                    amplitudes,
                    plan,
                });
            }
            log::debug!("circulant order {d} has eigenvalue {min_eig:e}; doubling");
            d *= 2;
        }
        Err(Error::Embedding {
            max_order: 1usize << max_exponent,
            min_eigenvalue: min_eig,
        })
    }

    /// Embedding of the Matérn correlation on `grid`'s knots.
    pub fn from_kernel(grid: &RegularGrid, kernel: &MaternKernel, max_exponent: u32) -> Result<Self> {
        let delta = grid.delta();
        let row = (0..grid.len()).map(|j| kernel.correlation(j as f64 * delta)).collect();
        let t = ToeplitzSpd::new(row)?;
        Self::embed(&t, |j| kernel.correlation(j as f64 * delta), max_exponent)
    }

    /// Number of grid points `m`.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Circulant order `d`.
    pub fn order(&self) -> usize {
        self.base_row.len()
    }

    pub fn base_row(&self) -> &[f64] {
        &self.base_row
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// First row of the circulant rebuilt from the (clamped) spectrum.
    pub fn reconstruct_first_row(&self) -> Result<Vec<f64>> {
        let mut buf: Vec<Complex64> = self.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.plan.inverse(&mut buf)?;
        Ok(buf.iter().map(|z| z.re).collect())
    }

    /// Two independent draws from `N_m(0, scale² K)`: the real and imaginary
    /// parts of one complex synthesis.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> (Vec<f64>, Vec<f64>) {
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&a| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(a * re, a * im)
            })
            .collect();
        self.plan
            .forward(&mut buf)
            .expect("buffer length equals plan length");
        let first = buf[..self.m].iter().map(|z| scale * z.re).collect();
        let second = buf[..self.m].iter().map(|z| scale * z.im).collect();
        (first, second)
    }
}

/// Draws from `N(0, τ²K)` with the unused half of each synthesis kept for the
/// next call.
#[derive(Debug, Clone)]
pub struct PriorSampler {
    embedding: CirculantEmbedding,
    /// Spare draw at unit scale.
    spare: Option<Vec<f64>>,
}

impl PriorSampler {
    pub fn new(embedding: CirculantEmbedding) -> Self {
        Self {
            embedding,
            spare: None,
        }
    }

    pub fn embedding(&self) -> &CirculantEmbedding {
        &self.embedding
    }

    /// Replace the embedding (e.g. after a kernel hyperparameter move); the
    /// spare draw belongs to the old covariance and is discarded.
    pub fn set_embedding(&mut self, embedding: CirculantEmbedding) {
        self.embedding = embedding;
        self.spare = None;
    }

    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }

    /// One draw from `N(0, τ² K)`.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R, tau2: f64) -> Vec<f64> {
        let tau = tau2.sqrt();
        let mut unit = match self.spare.take() {
            Some(v) => v,
            None => {
                let (a, b) = self.embedding.sample_pair(rng, 1.0);
                self.spare = Some(b);
                a
            }
        };
        unit.iter_mut().for_each(|v| *v *= tau);
        unit
    }
}
