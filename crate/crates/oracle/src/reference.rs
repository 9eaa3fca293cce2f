//! Dense Gibbs sampler for the monotone model with the exact orthant
//! constraint, drawing `ξ` from its truncated Gaussian conditional by
//! rejection.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::dense::{gaussian_posterior, DenseSpd};
use crate::sampling::rejection_tmvn;
use crate::{basis, special, OracleError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceState {
    pub intercept: f64,
    pub xi: Vec<f64>,
    pub sigma2: f64,
    pub tau2: f64,
}

#[derive(Debug, Clone)]
pub struct MonotoneReference {
    design: DMatrix<f64>,
    y: Vec<f64>,
    corr: DenseSpd,
    pub max_tries: usize,
}

fn inverse_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, rate: f64) -> f64 {
    1.0 / Gamma::new(shape, 1.0 / rate).expect("positive parameters").sample(rng)
}

impl MonotoneReference {
    /// `y = ξ₀ + Σ_j ξ_j ψ_j(x) + ε` on `n_spacings` equal spacings with a
    /// Matérn `(ν, ℓ)` prior correlation.
    pub fn new(x: &[f64], y: &[f64], n_spacings: usize, nu: f64, ell: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(OracleError::Dimension {
                expected: x.len(),
                found: y.len(),
            });
        }
        let design = basis::design(x, n_spacings, 1);
        let corr = DenseSpd::new(special::grid_kernel_matrix(n_spacings + 1, nu, ell))?;
        Ok(Self {
            design,
            y: y.to_vec(),
            corr,
            max_tries: 1_000_000,
        })
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    pub fn correlation(&self) -> &DenseSpd {
        &self.corr
    }

    pub fn initial_state(&self) -> ReferenceState {
        let n = self.y.len() as f64;
        let mean = self.y.iter().sum::<f64>() / n;
        let var = self.y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        ReferenceState {
            intercept: mean,
            xi: vec![1.0; self.design.ncols()],
            sigma2: var / 2.0,
            tau2: 1.0,
        }
    }

    fn fitted(&self, xi: &[f64]) -> Vec<f64> {
        (&self.design * DVector::from_column_slice(xi)).as_slice().to_vec()
    }

    pub fn step<R: Rng + ?Sized>(&self, s: &mut ReferenceState, rng: &mut R) -> Result<()> {
        let n = self.y.len();
        let p = self.design.ncols();

        let prior = DenseSpd::new(self.corr.matrix() * s.tau2)?;
        let working: Vec<f64> = self.y.iter().map(|v| v - s.intercept).collect();
        let (mean, cov) = gaussian_posterior(&prior, &self.design, &working, s.sigma2)?;
        s.xi = rejection_tmvn(&mean, &cov, self.max_tries, rng)?;

        let fitted = self.fitted(&s.xi);
        let ybar = self.y.iter().zip(&fitted).map(|(y, f)| y - f).sum::<f64>() / n as f64;
        s.intercept = Normal::new(ybar, (s.sigma2 / n as f64).sqrt())
            .expect("finite moments")
            .sample(rng);

        let rss: f64 = self
            .y
            .iter()
            .zip(&fitted)
            .map(|(y, f)| (y - s.intercept - f).powi(2))
            .sum();
        s.sigma2 = inverse_gamma(rng, n as f64 / 2.0, rss / 2.0);

        let quad = self.corr.inverse_quad_form(&s.xi)?;
        s.tau2 = inverse_gamma(rng, p as f64 / 2.0, quad / 2.0);
        Ok(())
    }

    /// States after `burn_in` of `n_iter` sweeps.
    pub fn run<R: Rng + ?Sized>(
        &self,
        mut state: ReferenceState,
        n_iter: usize,
        burn_in: usize,
        rng: &mut R,
    ) -> Result<Vec<ReferenceState>> {
        let mut out = Vec::with_capacity(n_iter.saturating_sub(burn_in));
        for it in 0..n_iter {
            self.step(&mut state, rng)?;
            if it >= burn_in {
                out.push(state.clone());
            }
        }
        Ok(out)
    }
}
