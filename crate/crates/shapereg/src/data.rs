//! Two-column `x,y` CSV input.

use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read data: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{0}` (header must name columns x and y)")]
    MissingColumn(&'static str),
    #[error("row {row}: column `{column}` is not a number: {value:?}")]
    NonNumeric {
        row: usize,
        column: &'static str,
        value: String,
    },
    #[error("row {row}: column `{column}` is not finite ({value})")]
    NonFinite {
        row: usize,
        column: &'static str,
        value: f64,
    },
    #[error("need at least 3 rows, found {0}")]
    TooFewRows(usize),
    #[error("covariate x is constant ({0}); nothing to regress on")]
    ConstantCovariate(f64),
}

/// Observations with `x` rescaled to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Rescaled covariates.
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
}

impl Dataset {
    /// Validate and rescale raw pairs.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, DataError> {
        assert_eq!(x.len(), y.len(), "x and y differ in length");
        if x.len() < 3 {
            return Err(DataError::TooFewRows(x.len()));
        }
        for (i, (&a, &b)) in x.iter().zip(&y).enumerate() {
            for (column, value) in [("x", a), ("y", b)] {
                if !value.is_finite() {
                    return Err(DataError::NonFinite {
                        row: i + 1,
                        column,
                        value,
                    });
                }
            }
        }
        let x_min = x.iter().copied().fold(f64::INFINITY, f64::min);
        let x_max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if x_min == x_max {
            return Err(DataError::ConstantCovariate(x_min));
        }
        let span = x_max - x_min;
        let x = x.iter().map(|v| ((v - x_min) / span).clamp(0.0, 1.0)).collect();
        Ok(Self { x, y, x_min, x_max })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Map a rescaled point back to the original covariate scale; exact at 0 and 1.
    pub fn to_original(&self, t: f64) -> f64 {
        self.x_min * (1.0 - t) + self.x_max * t
    }

    pub fn original_x(&self) -> Vec<f64> {
        self.x.iter().map(|&t| self.to_original(t)).collect()
    }

    /// Random split into `(train, test)` with `round(fraction · n)` test rows
    /// (at least one, leaving at least three for training). Both halves keep
    /// this dataset's rescaling.
    pub fn split<R: Rng + ?Sized>(&self, fraction: f64, rng: &mut R) -> Result<(Self, Self), DataError> {
        let n = self.len();
        let n_test = ((fraction * n as f64).round() as usize).max(1);
        if n < n_test + 3 {
            return Err(DataError::TooFewRows(n.saturating_sub(n_test)));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        let (test, train) = idx.split_at(n_test);
        let pick = |rows: &[usize]| {
            let mut rows = rows.to_vec();
            rows.sort_unstable();
            Self {
                x: rows.iter().map(|&i| self.x[i]).collect(),
                y: rows.iter().map(|&i| self.y[i]).collect(),
                x_min: self.x_min,
                x_max: self.x_max,
            }
        };
        Ok((pick(train), pick(test)))
    }
}

fn parse_cell(record: &csv::StringRecord, col: usize, name: &'static str, row: usize) -> Result<f64, DataError> {
    let raw = record.get(col).unwrap_or("").trim();
    let value: f64 = raw.parse().map_err(|_| DataError::NonNumeric {
        row,
        column: name,
        value: raw.to_string(),
    })?;
    if !value.is_finite() {
        return Err(DataError::NonFinite {
            row,
            column: name,
            value,
        });
    }
    Ok(value)
}

/// Read columns `x` and `y` (by header name) from CSV text.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &'static str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or(DataError::MissingColumn(name))
    };
    let (cx, cy) = (find("x")?, find("y")?);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        // data rows are numbered from 1, after the header
        x.push(parse_cell(&record, cx, "x", i + 1)?);
        y.push(parse_cell(&record, cy, "y", i + 1)?);
    }
    Dataset::new(x, y)
}

pub fn load_csv<P: AsRef<Path>>(path: P) -> Result<Dataset, DataError> {
    read_csv(std::fs::File::open(path)?)
}
