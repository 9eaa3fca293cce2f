//! Fit orchestration: load, split, sample (possibly several chains), write.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shapereg_core::diagnostics::mspe;
use shapereg_core::gibbs::run_chain_timed;
use shapereg_core::grid::default_lengthscale;
use shapereg_core::{Chain, FitConfig};

use crate::clock::StdClock;
use crate::data::{load_csv, DataError, Dataset};
use crate::output::{self, Summary};

/// Exit status for success.
pub const EXIT_OK: u8 = 0;
/// Exit status for bad input (data, flags, files).
pub const EXIT_INPUT: u8 = 2;
/// Exit status for numerical breakdown (embedding, conditioning, slice shrinks).
pub const EXIT_NUMERICAL: u8 = 3;

/// ChaCha stream reserved for the holdout shuffle; chains use streams `0..chains`.
const HOLDOUT_STREAM: u64 = u64::MAX;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("{0}")]
    Model(#[from] shapereg_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("sampler thread panicked")]
    Thread,
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Model(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub data: PathBuf,
    pub out_dir: PathBuf,
    pub fit: FitConfig,
    pub test_grid: usize,
    pub chains: usize,
    pub save_xi: bool,
    /// Fraction of rows held out for prediction error.
    pub holdout: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: Summary,
    pub chains: Vec<Chain>,
    pub samples_path: PathBuf,
    pub summary_path: PathBuf,
    pub predict_path: PathBuf,
}

/// `count` equispaced points on `[0, 1]`.
pub fn test_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..count).map(|i| i as f64 / (count - 1) as f64).collect(),
    }
}

/// Run `chains` chains in parallel on ChaCha streams `0..chains` of the same seed.
pub fn sample_chains(train: &Dataset, fit: &FitConfig, chains: usize) -> Result<Vec<Chain>, RunError> {
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..chains)
            .map(|c| {
                let mut cfg = fit.clone();
                cfg.stream = c as u64;
                scope.spawn(move || run_chain_timed(&train.y, &train.x, &cfg, &mut StdClock::new()))
            })
            .collect();
        handles.into_iter().map(|h| h.join()).collect()
    });
    results
        .into_iter()
        .map(|r| r.map_err(|_| RunError::Thread)?.map_err(RunError::from))
        .collect()
}

/// Fill in the data-dependent defaults so the echoed config replays the run.
fn resolve(fit: &FitConfig, train: &Dataset) -> Result<FitConfig, RunError> {
    let mut fit = fit.clone();
    fit.knots = Some(fit.spacings_for(train.len()));
    if !fit.update_hypers && fit.ell.is_none() {
        fit.ell = Some(default_lengthscale(&train.x, fit.nu)?);
    }
    fit.validate()?;
    Ok(fit)
}

pub fn fit(config: &RunConfig) -> Result<RunOutcome, RunError> {
    if config.chains == 0 {
        return Err(RunError::Config("at least one chain is required".into()));
    }
    if matches!(config.holdout, Some(h) if !(h > 0.0 && h < 1.0)) {
        return Err(RunError::Config("holdout fraction must lie in (0, 1)".into()));
    }
    let data = load_csv(&config.data)?;
    log::info!("loaded {} rows from {}", data.len(), config.data.display());

    let (train, test) = match config.holdout {
        Some(fraction) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.fit.seed);
            rng.set_stream(HOLDOUT_STREAM);
            let (train, test) = data.split(fraction, &mut rng)?;
            (train, Some(test))
        }
        None => (data, None),
    };

    let fit = resolve(&config.fit, &train)?;
    log::info!(
        "fitting {:?} with N = {} over {} chain(s) of {} iterations",
        fit.shape,
        fit.knots.unwrap_or_default(),
        config.chains,
        fit.n_iter
    );
    let chains = sample_chains(&train, &fit, config.chains)?;

    let mut merged = chains[0].clone();
    for c in &chains[1..] {
        merged.merge(c.clone())?;
    }
    let grid = test_grid(config.test_grid);
    let prediction = merged.predict(&grid)?;
    let holdout_mspe = match &test {
        Some(test) => {
            let p = merged.predict(&test.x)?;
            Some(mspe(&p.mean, &test.y)?)
        }
        None => None,
    };

    std::fs::create_dir_all(&config.out_dir)?;
    let samples_path = config.out_dir.join("samples.csv");
    let summary_path = config.out_dir.join("summary.json");
    let predict_path = config.out_dir.join("predict.csv");

    output::write_samples(&samples_path, &chains, config.save_xi)?;
    output::write_predictions(&predict_path, &train, &prediction)?;
    let summary = Summary::new(config, &fit, &train, test.as_ref(), &merged, holdout_mspe);
    output::write_summary(&summary_path, &summary)?;
    log::info!("wrote {}", config.out_dir.display());

    Ok(RunOutcome {
        summary,
        chains,
        samples_path,
        summary_path,
        predict_path,
    })
}
