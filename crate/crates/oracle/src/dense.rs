//! Dense symmetric positive-definite matrices.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::{OracleError, Result};

/// Symmetric tolerance used by [`DenseSpd::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DenseSpd {
    matrix: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl DenseSpd {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(OracleError::NotSquare { rows, cols });
        }
        for i in 0..rows {
            for j in 0..i {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
                if (a - b).abs() > SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                    return Err(OracleError::NotSymmetric(i, j));
                }
            }
        }
        let chol = matrix.clone().cholesky().ok_or(OracleError::NotPositiveDefinite)?;
        Ok(Self { matrix, chol })
    }

    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(DMatrix::from_fn(m, m, f))
    }

    /// `T = (r_{|i−j|})`.
    pub fn toeplitz(first_row: &[f64]) -> Result<Self> {
        Self::from_fn(first_row.len(), |i, j| first_row[i.abs_diff(j)])
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    /// Lower-triangular `L` with `A = L Lᵀ`.
    pub fn lower(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        let inv = self.chol.inverse();
        (&inv + inv.transpose()) * 0.5
    }

    pub fn log_det(&self) -> f64 {
        let l = self.chol.l_dirty();
        2.0 * (0..self.dim()).map(|i| l[(i, i)].ln()).sum::<f64>()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check(b.len())?;
        Ok(self.chol.solve(&DVector::from_column_slice(b)).as_slice().to_vec())
    }

    /// `xᵀ A⁻¹ x`.
    pub fn inverse_quad_form(&self, x: &[f64]) -> Result<f64> {
        let s = self.solve(x)?;
        Ok(x.iter().zip(&s).map(|(a, b)| a * b).sum())
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(OracleError::Dimension {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }
}

/// Posterior of `β ~ N(0, prior)` under `y ~ N(Bβ, σ² I)`.
pub fn gaussian_posterior(
    prior: &DenseSpd,
    design: &DMatrix<f64>,
    y: &[f64],
    sigma2: f64,
) -> Result<(Vec<f64>, DenseSpd)> {
    if design.ncols() != prior.dim() {
        return Err(OracleError::Dimension {
            expected: prior.dim(),
            found: design.ncols(),
        });
    }
    if design.nrows() != y.len() {
        return Err(OracleError::Dimension {
            expected: design.nrows(),
            found: y.len(),
        });
    }
    let precision = prior.inverse() + design.transpose() * design / sigma2;
    let precision = DenseSpd::new((&precision + precision.transpose()) * 0.5)?;
    let cov = DenseSpd::new(precision.inverse())?;
    let rhs = design.transpose() * DVector::from_column_slice(y) / sigma2;
    let mean = cov.matrix() * rhs;
    Ok((mean.as_slice().to_vec(), cov))
}
