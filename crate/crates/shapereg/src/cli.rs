//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shapereg_core::gibbs::{HyperPrior, Support};
use shapereg_core::{FitConfig, Shape};

use crate::run::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "shapereg", version, about = "Bayesian monotone and convex regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a shape-constrained curve to an `x,y` CSV file.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Monotone,
    MonotoneDecreasing,
    Convex,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Monotone => Shape::MonotoneIncreasing,
            ShapeArg::MonotoneDecreasing => Shape::MonotoneDecreasing,
            ShapeArg::Convex => Shape::Convex,
        }
    }
}

/// Parse `lo:hi`.
pub fn parse_range(s: &str) -> Result<Support, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    Support::new(lo, hi).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// CSV file with a header naming columns `x` and `y`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = ShapeArg::Monotone)]
    pub shape: ShapeArg,
    /// Total MCMC iterations.
    #[arg(long, default_value_t = 12_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 2_000)]
    pub burnin: usize,
    /// Knot spacings N (default ⌈n/2⌉).
    #[arg(long)]
    pub knots: Option<usize>,
    /// Sharpness of the sigmoid relaxation.
    #[arg(long, default_value_t = 50.0)]
    pub eta: f64,
    /// Sample (ν, ℓ) by Metropolis–Hastings.
    #[arg(long)]
    pub update_hypers: bool,
    /// Fixed smoothness when hyperparameters are not updated.
    #[arg(long, default_value_t = 0.75)]
    pub nu: f64,
    /// Fixed length-scale (default: correlation 0.05 across the data range).
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(long, value_parser = parse_range, default_value = "0.5:1")]
    pub nu_range: Support,
    #[arg(long, value_parser = parse_range, default_value = "0.1:1")]
    pub ell_range: Support,
    /// Random-walk step as a fraction of each range's width.
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    /// Diagonal jitter added to the knot correlation matrix.
    #[arg(long, default_value_t = 0.0)]
    pub nugget: f64,
    /// Equispaced prediction points.
    #[arg(long, default_value_t = 200)]
    pub test_grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write the basis coefficients to samples.csv.
    #[arg(long)]
    pub save_xi: bool,
    /// Independent chains run in parallel and merged after burn-in.
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
    /// Hold out this fraction of rows and report their prediction error.
    #[arg(long)]
    pub holdout: Option<f64>,
}

impl FitArgs {
    pub fn to_run_config(&self) -> RunConfig {
        let fit = FitConfig {
            shape: self.shape.into(),
            n_iter: self.iters,
            burn_in: self.burnin,
            eta: self.eta,
            knots: self.knots,
            update_hypers: self.update_hypers,
            nu: self.nu,
            ell: self.ell,
            prior: HyperPrior {
                nu: self.nu_range,
                ell: self.ell_range,
                step_fraction: self.step,
            },
            seed: self.seed,
            ..FitConfig::default()
        };
        RunConfig {
            data: self.data.clone(),
            out_dir: self.out_dir.clone(),
            fit,
            test_grid: self.test_grid,
            chains: self.chains,
            save_xi: self.save_xi,
            holdout: self.holdout,
        }
    }
}
