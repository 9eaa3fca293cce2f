use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Input data cannot support the requested fit (e.g. all covariates equal).
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// A Durbin recursion denominator fell below the breakdown threshold,
    /// i.e. the Toeplitz matrix is not (numerically) positive definite.
    #[error("toeplitz matrix is not positive definite (breakdown at order {order}, denominator {denominator:e})")]
    Conditioning { order: usize, denominator: f64 },

    /// No circulant of order up to `2^g_max` had a nonnegative spectrum.
    #[error("circulant embedding failed: no nonnegative-definite embedding up to order {max_order} (min eigenvalue {min_eigenvalue:e})")]
    Embedding { max_order: usize, min_eigenvalue: f64 },

    #[error("elliptical slice sampler exceeded {0} bracket shrinks")]
    ShrinkLimit(usize),

    #[error("fft length {0} is not a power of two")]
    FftLength(usize),
}

impl Error {
    /// Numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Conditioning { .. } | Error::Embedding { .. } | Error::ShrinkLimit(_)
        )
    }
}
