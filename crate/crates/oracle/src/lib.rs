//! Slow, obviously-correct reference implementations for testing
//! `shapereg-core`.
//!
//! Nothing here shares code with the production crate. Linear algebra is
//! dense (nalgebra), transforms are `O(n²)` sums, special functions and basis
//! integrals come from adaptive quadrature, and truncated Gaussians are drawn
//! by plain rejection.

pub mod basis;
pub mod dense;
pub mod dft;
pub mod quadrature;
pub mod reference;
pub mod sampling;
pub mod special;

pub use dense::DenseSpd;
pub use dft::naive_dft;
pub use quadrature::adaptive_quadrature;
pub use sampling::{dense_mvn_sample, rejection_tmvn, rejection_weighted};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Cholesky factorisation failed")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("no acceptance after {0} proposals")]
    MaxTries(usize),
}

pub type Result<T> = std::result::Result<T, OracleError>;
