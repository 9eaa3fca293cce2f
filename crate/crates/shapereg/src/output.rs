//! `samples.csv`, `predict.csv` and `summary.json`.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value reads back bit-for-bit and the files do not depend on locale.

use std::path::Path;

use serde::Serialize;
use shapereg_core::gibbs::quantile;
use shapereg_core::{Chain, FitConfig, Prediction, Shape};

use crate::data::Dataset;
use crate::run::RunConfig;

pub fn shape_name(shape: Shape) -> &'static str {
    match shape {
        Shape::MonotoneIncreasing => "monotone",
        Shape::MonotoneDecreasing => "monotone-decreasing",
        Shape::Convex => "convex",
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// One row per retained iteration of every chain. For the decreasing shape
/// the coefficients describe `−f`.
pub fn write_samples(path: &Path, chains: &[Chain], save_xi: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let dim = chains.first().map_or(0, |c| c.grid.len());
    let mut header: Vec<String> = ["chain", "iter", "intercept", "slope", "sigma2", "tau2", "nu", "ell"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if save_xi {
        header.extend((0..dim).map(|j| format!("xi_{j}")));
    }
    w.write_record(&header)?;
    for (c, chain) in chains.iter().enumerate() {
        for (k, s) in chain.states.iter().enumerate() {
            let mut row = vec![
                c.to_string(),
                (chain.burn_in + k).to_string(),
                fmt(s.intercept),
                fmt(s.slope),
                fmt(s.sigma2),
                fmt(s.tau2),
                fmt(s.params.nu),
                fmt(s.params.ell),
            ];
            if save_xi {
                row.extend(s.xi.iter().map(|&v| fmt(v)));
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Test grid on the original covariate scale with posterior mean and 95% band.
pub fn write_predictions(path: &Path, data: &Dataset, p: &Prediction) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "mean", "lower", "upper"])?;
    for i in 0..p.x.len() {
        w.write_record([
            fmt(data.to_original(p.x[i])),
            fmt(p.mean[i]),
            fmt(p.lower[i]),
            fmt(p.upper[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Interval {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn from_draws(mut draws: Vec<f64>) -> Self {
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        draws.sort_by(f64::total_cmp);
        Self {
            mean,
            lower: quantile(&draws, 0.025),
            upper: quantile(&draws, 0.975),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Posterior {
    pub intercept: Interval,
    pub slope: Interval,
    pub sigma2: Interval,
    pub tau2: Interval,
    pub nu: Interval,
    pub ell: Interval,
}

impl Posterior {
    pub fn from_chain(chain: &Chain) -> Self {
        let col = |f: fn(&shapereg_core::ModelState) -> f64| {
            Interval::from_draws(chain.states.iter().map(f).collect())
        };
        Self {
            intercept: col(|s| s.intercept),
            slope: col(|s| s.slope),
            sigma2: col(|s| s.sigma2),
            tau2: col(|s| s.tau2),
            nu: col(|s| s.params.nu),
            ell: col(|s| s.params.ell),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Timing {
    pub mean_seconds: f64,
    pub median_seconds: f64,
    pub iterations: usize,
}

impl Timing {
    pub fn from_seconds(seconds: &[f64]) -> Self {
        let mut s = seconds.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        let median = match n {
            0 => 0.0,
            _ if n % 2 == 1 => s[n / 2],
            _ => 0.5 * (s[n / 2 - 1] + s[n / 2]),
        };
        Self {
            mean_seconds: if n == 0 { 0.0 } else { s.iter().sum::<f64>() / n as f64 },
            median_seconds: median,
            iterations: n,
        }
    }
}

/// Everything needed to replay the run.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub data: String,
    pub shape: &'static str,
    pub iters: usize,
    pub burnin: usize,
    pub eta: f64,
    pub knots: usize,
    pub update_hypers: bool,
    /// Initial `(ν, ℓ)` when updating, fixed values otherwise.
    pub nu: f64,
    pub ell: f64,
    pub nu_range: [f64; 2],
    pub ell_range: [f64; 2],
    pub step_fraction: f64,
    pub nugget: f64,
    pub max_shrinks: usize,
    pub max_exponent: u32,
    pub chains: usize,
    pub test_grid: usize,
    pub holdout: Option<f64>,
    pub save_xi: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub retained_draws: usize,
    pub posterior: Posterior,
    /// `(ν, ℓ)` Metropolis–Hastings acceptance; `null` without updates.
    pub acceptance_rate: Option<f64>,
    pub iteration_time: Timing,
    pub mspe: Option<f64>,
    pub config: ConfigEcho,
}

impl Summary {
    pub fn new(
        run: &RunConfig,
        fit: &FitConfig,
        train: &Dataset,
        test: Option<&Dataset>,
        merged: &Chain,
        mspe: Option<f64>,
    ) -> Self {
        let (nu, ell) = if fit.update_hypers {
            let m = fit.prior.midpoint();
            (m.nu, m.ell)
        } else {
            (fit.nu, fit.ell.unwrap_or(f64::NAN))
        };
        Self {
            seed: fit.seed,
            n_train: train.len(),
            n_test: test.map_or(0, Dataset::len),
            retained_draws: merged.len(),
            posterior: Posterior::from_chain(merged),
            acceptance_rate: merged.acceptance_rate(),
            iteration_time: Timing::from_seconds(&merged.iter_seconds),
            mspe,
            config: ConfigEcho {
                data: run.data.display().to_string(),
                shape: shape_name(fit.shape),
                iters: fit.n_iter,
                burnin: fit.burn_in,
                eta: fit.eta,
                knots: merged.grid.spacings(),
                update_hypers: fit.update_hypers,
                nu,
                ell,
                nu_range: [fit.prior.nu.lo, fit.prior.nu.hi],
                ell_range: [fit.prior.ell.lo, fit.prior.ell.hi],
                step_fraction: fit.prior.step_fraction,
                nugget: fit.nugget,
                max_shrinks: fit.max_shrinks,
                max_exponent: fit.max_exponent,
                chains: run.chains,
                test_grid: run.test_grid,
                holdout: run.holdout,
                save_xi: run.save_xi,
            },
        }
    }
}

pub fn write_summary(path: &Path, summary: &Summary) -> Result<(), crate::run::RunError> {
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
