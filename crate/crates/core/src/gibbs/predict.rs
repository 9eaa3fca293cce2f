use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Chain, Shape};
use crate::basis::BasisDesign;
use crate::error::{Error, Result};

/// Posterior mean and pointwise 95% interval of `f` on a set of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub x: Vec<f64>,
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Linear-interpolation sample quantile (Hyndman–Fan type 7) of sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl Chain {
    /// Draws of `f(x_test)`, one row per test point and one column per state.
    pub fn function_draws(&self, x_test: &[f64]) -> Result<Vec<Vec<f64>>> {
        if self.states.is_empty() {
            return Err(Error::Degenerate("chain has no retained states"));
        }
        let design = BasisDesign::new(x_test, &self.grid, self.shape.basis_kind())?;
        let sign = self.shape.sign();
        let mut out: Vec<Vec<f64>> = (0..x_test.len())
            .map(|_| Vec::with_capacity(self.states.len()))
            .collect();
        for s in &self.states {
            let fitted = design.apply(&s.xi)?;
            for (i, (&x, f)) in x_test.iter().zip(fitted).enumerate() {
                let slope = if self.shape == Shape::Convex { s.slope * x } else { 0.0 };
                out[i].push(sign * (s.intercept + slope + f));
            }
        }
        Ok(out)
    }

    /// Posterior mean and 2.5%/97.5% quantiles of `f` at `x_test ⊂ [0, 1]`.
    pub fn predict(&self, x_test: &[f64]) -> Result<Prediction> {
        let draws = self.function_draws(x_test)?;
        let mut mean = Vec::with_capacity(x_test.len());
        let mut lower = Vec::with_capacity(x_test.len());
        let mut upper = Vec::with_capacity(x_test.len());
        for mut d in draws {
            mean.push(d.iter().sum::<f64>() / d.len() as f64);
            d.sort_by(f64::total_cmp);
            lower.push(quantile(&d, 0.025));
            upper.push(quantile(&d, 0.975));
        }
        Ok(Prediction {
            x: x_test.to_vec(),
            mean,
            lower,
            upper,
        })
    }
}
