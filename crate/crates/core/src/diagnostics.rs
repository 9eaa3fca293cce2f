//! Effective sample size and prediction error.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::FftPlan;

/// Shortest series accepted by [`effective_sample_size`].
pub const MIN_ESS_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssEstimate {
    pub value: f64,
    /// The series was constant; `value` is the series length by convention.
    pub constant: bool,
}

/// Normalised autocorrelations `ρ̂_0..ρ̂_{n−1}` (biased autocovariance),
/// computed through a zero-padded FFT. Empty when the series is constant.
pub fn autocorrelation(series: &[f64]) -> Result<Vec<f64>> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let len = (2 * n).next_power_of_two();
    let plan = FftPlan::new(len)?;
    let mut buf: Vec<Complex64> = series
        .iter()
        .map(|&v| Complex64::new(v - mean, 0.0))
        .chain(core::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(len)
        .collect();
    plan.forward(&mut buf)?;
    buf.iter_mut().for_each(|z| *z = Complex64::new(z.norm_sqr(), 0.0));
    plan.inverse(&mut buf)?;
    let c0 = buf[0].re;
    let scale = series.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if !(c0 > 1e-28 * scale * scale * n as f64) {
        return Ok(Vec::new());
    }
    Ok(buf[..n].iter().map(|z| z.re / c0).collect())
}

/// `n / (1 + 2 Σ_k ρ̂_k)`, with the sum truncated at the first pair
/// `ρ̂_{2m} + ρ̂_{2m+1}` that is not positive (Geyer's initial positive
/// sequence). Clamped to `(0, n]`.
pub fn effective_sample_size(series: &[f64]) -> Result<EssEstimate> {
    let n = series.len();
    if n < MIN_ESS_LEN {
        return Err(Error::DimensionMismatch {
            expected: MIN_ESS_LEN,
            found: n,
        });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("series contains non-finite values"));
    }
    let rho = autocorrelation(series)?;
    if rho.is_empty() {
        log::warn!("effective sample size of a constant series; reporting its length");
        return Ok(EssEstimate {
            value: n as f64,
            constant: true,
        });
    }
    let mut pair_sum = 0.0;
    let mut m = 0;
    while 2 * m + 1 < n {
        let pair = rho[2 * m] + rho[2 * m + 1];
        if pair <= 0.0 {
            break;
        }
        pair_sum += pair;
        m += 1;
    }
    let tau = 2.0 * pair_sum - 1.0;
    let nf = n as f64;
    let value = if tau > 0.0 { (nf / tau).min(nf) } else { nf };
    Ok(EssEstimate {
        value,
        constant: false,
    })
}

/// Mean squared difference.
pub fn mspe(predicted: &[f64], observed: &[f64]) -> Result<f64> {
    if predicted.len() != observed.len() {
        return Err(Error::DimensionMismatch {
            expected: observed.len(),
            found: predicted.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::Degenerate("no predictions"));
    }
    Ok(predicted
        .iter()
        .zip(observed)
        .map(|(p, o)| (p - o) * (p - o))
        .sum::<f64>()
        / predicted.len() as f64)
}

/// Per-test-point effective sample sizes averaged over replicate chains.
#[derive(Debug, Clone, PartialEq)]
pub struct EssReport {
    pub per_point: Vec<f64>,
    pub chain_len: usize,
    pub replicates: usize,
}

impl EssReport {
    /// `replicates[r][p]` is the draw series of test point `p` in chain `r`.
    pub fn from_replicates(replicates: &[Vec<Vec<f64>>]) -> Result<Self> {
        let first = replicates
            .first()
            .ok_or(Error::Degenerate("no replicate chains"))?;
        let points = first.len();
        let chain_len = first.first().map_or(0, Vec::len);
        let mut per_point = alloc::vec![0.0; points];
        for rep in replicates {
            if rep.len() != points {
                return Err(Error::DimensionMismatch {
                    expected: points,
                    found: rep.len(),
                });
            }
            for (acc, series) in per_point.iter_mut().zip(rep) {
                if series.len() != chain_len {
                    return Err(Error::DimensionMismatch {
                        expected: chain_len,
                        found: series.len(),
                    });
                }
                *acc += effective_sample_size(series)?.value;
            }
        }
        let r = replicates.len() as f64;
        per_point.iter_mut().for_each(|v| *v /= r);
        Ok(Self {
            per_point,
            chain_len,
            replicates: replicates.len(),
        })
    }

    pub fn median(&self) -> f64 {
        let mut v = self.per_point.clone();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n == 0 {
            return f64::NAN;
        }
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }
}
