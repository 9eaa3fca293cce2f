//! Gaussian draws by dense factorisation and truncated draws by rejection.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::dense::DenseSpd;
use crate::{OracleError, Result};

/// `L z` with `z` standard normal and `cov = L Lᵀ`.
pub fn dense_mvn_sample<R: Rng + ?Sized>(cov: &DenseSpd, rng: &mut R) -> Vec<f64> {
    let m = cov.dim();
    let z: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
    let l = cov.lower();
    (0..m).map(|i| (0..=i).map(|j| l[(i, j)] * z[j]).sum()).collect()
}

pub fn mvn_sample<R: Rng + ?Sized>(mean: &[f64], cov: &DenseSpd, rng: &mut R) -> Result<Vec<f64>> {
    if mean.len() != cov.dim() {
        return Err(OracleError::Dimension {
            expected: cov.dim(),
            found: mean.len(),
        });
    }
    let mut x = dense_mvn_sample(cov, rng);
    x.iter_mut().zip(mean).for_each(|(v, m)| *v += m);
    Ok(x)
}

/// Draw from the density proportional to `N(mean, cov)(x) · accept(x)` with
/// `accept(x) ∈ [0, 1]`.
pub fn rejection_weighted<R, F>(
    mean: &[f64],
    cov: &DenseSpd,
    accept: F,
    max_tries: usize,
    rng: &mut R,
) -> Result<Vec<f64>>
where
    R: Rng + ?Sized,
    F: Fn(&[f64]) -> f64,
{
    for _ in 0..max_tries {
        let x = mvn_sample(mean, cov, rng)?;
        if rng.random::<f64>() < accept(&x) {
            return Ok(x);
        }
    }
    Err(OracleError::MaxTries(max_tries))
}

/// `N(mean, cov)` truncated to the open positive orthant.
pub fn rejection_tmvn<R: Rng + ?Sized>(
    mean: &[f64],
    cov: &DenseSpd,
    max_tries: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    for _ in 0..max_tries {
        let x = mvn_sample(mean, cov, rng)?;
        if x.iter().all(|&v| v > 0.0) {
            return Ok(x);
        }
    }
    Err(OracleError::MaxTries(max_tries))
}
