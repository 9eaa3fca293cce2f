//! Symmetric positive-definite Toeplitz algebra in `O(M²)`.
//!
//! For `T = (r_{|i−j|})` with `r_0 = 1`, Durbin's recursion solves the
//! Yule–Walker systems `T_h y⁽ʰ⁾ = −(r_1, …, r_h)ᵀ` for every order `h` in a
//! single pass. Reversing `y⁽ʰ⁾` and appending a one gives a vector `a_h`
//! with `T_{h+1} a_h = β_h e_{h+1}`, so the upper-triangular matrix with
//! columns `a_h / √β_h` is an inverse Cholesky factor `S` with `T⁻¹ = S Sᵀ`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Recursion denominators at or below this value are treated as breakdown.
pub const BREAKDOWN_THRESHOLD: f64 = 1e-14;

/// Tolerance on the unit leading entry.
const UNIT_TOL: f64 = 1e-12;

/// SPD Toeplitz matrix in normalised correlation form, stored as its first row.
///
/// Positive definiteness is checked lazily: the recursions fail with
/// [`Error::Conditioning`] when it does not hold.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpd {
    row: Vec<f64>,
}

impl ToeplitzSpd {
    pub fn new(first_row: Vec<f64>) -> Result<Self> {
        match first_row.first() {
            None => Err(Error::Domain("toeplitz first row is empty")),
            Some(&r0) if (r0 - 1.0).abs() > UNIT_TOL => {
                Err(Error::Domain("toeplitz first row must start with 1"))
            }
            Some(_) if first_row.iter().any(|v| !v.is_finite()) => {
                Err(Error::Domain("toeplitz first row has non-finite entries"))
            }
            Some(_) => Ok(Self { row: first_row }),
        }
    }

    /// Divides a covariance first row through by its leading entry.
    pub fn normalized(mut first_row: Vec<f64>) -> Result<Self> {
        let r0 = *first_row
            .first()
            .ok_or(Error::Domain("toeplitz first row is empty"))?;
        if !(r0 > 0.0) {
            return Err(Error::Domain("leading covariance must be positive"));
        }
        first_row.iter_mut().for_each(|v| *v /= r0);
        Self::new(first_row)
    }

    pub fn first_row(&self) -> &[f64] {
        &self.row
    }

    pub fn dim(&self) -> usize {
        self.row.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row[i.abs_diff(j)]
    }
}

/// Incremental Durbin recursion: after `k` steps `y` solves the order-`k`
/// Yule–Walker system and `beta = 1 + (r_1..r_k)·y`.
struct Durbin<'a> {
    r: &'a [f64],
    y: Vec<f64>,
    beta: f64,
}

impl<'a> Durbin<'a> {
    fn new(r: &'a [f64], capacity: usize) -> Self {
        Self {
            r,
            y: Vec::with_capacity(capacity),
            beta: 1.0,
        }
    }

    /// Advance from order `k` to `k + 1`.
    fn step(&mut self) -> Result<()> {
        let k = self.y.len();
        if self.beta <= BREAKDOWN_THRESHOLD {
            return Err(Error::Conditioning {
                order: k,
                denominator: self.beta,
            });
        }
        let r = self.r;
        // α = −(r_{k+1} + Σ_i r_{k−i} y_i) / β   (0-based y, r[0] = r_0)
        let dot: f64 = self.y.iter().zip(r[1..=k].iter().rev()).map(|(y, r)| y * r).sum();
        let alpha = -(r[k + 1] + dot) / self.beta;
        for i in 0..k / 2 {
            let (a, b) = (self.y[i], self.y[k - 1 - i]);
            self.y[i] = a + alpha * b;
            self.y[k - 1 - i] = b + alpha * a;
        }
        if k % 2 == 1 {
            let mid = k / 2;
            self.y[mid] += alpha * self.y[mid];
        }
        self.y.push(alpha);
        self.beta *= 1.0 - alpha * alpha;
        Ok(())
    }
}

/// Solve `T_h u = −(r_1, …, r_h)ᵀ` for `1 ≤ h < M` (empty for `h = 0`).
pub fn durbin_solve(t: &ToeplitzSpd, h: usize) -> Result<Vec<f64>> {
    if h >= t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim() - 1,
            found: h,
        });
    }
    let mut d = Durbin::new(&t.row, h);
    for _ in 0..h {
        d.step()?;
    }
    Ok(d.y)
}

/// Upper-triangular `S` with strictly positive diagonal and `T⁻¹ = S Sᵀ`,
/// stored column-packed (column `h` holds rows `0..=h`).
#[derive(Debug, Clone, PartialEq)]
pub struct InverseCholesky {
    dim: usize,
    packed: Vec<f64>,
}

impl InverseCholesky {
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(col: usize) -> usize {
        col * (col + 1) / 2
    }

    /// Column `j` restricted to rows `0..=j`.
    pub fn column(&self, j: usize) -> &[f64] {
        let o = Self::offset(j);
        &self.packed[o..o + j + 1]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i > j {
            0.0
        } else {
            self.column(j)[i]
        }
    }

    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim).map(move |j| self.column(j)[j])
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let m = self.dim;
        let mut out = vec![0.0; m * m];
        for j in 0..m {
            for (i, v) in self.column(j).iter().enumerate() {
                out[i * m + j] = *v;
            }
        }
        out
    }

    /// `Sᵀ ξ`.
    pub fn apply_transpose(&self, xi: &[f64]) -> Result<Vec<f64>> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: xi.len(),
            });
        }
        Ok((0..self.dim)
            .map(|j| self.column(j).iter().zip(xi).map(|(s, x)| s * x).sum())
            .collect())
    }
}

/// Inverse Cholesky factor of `t` from one Durbin pass, `O(M²)`.
pub fn inverse_cholesky(t: &ToeplitzSpd) -> Result<InverseCholesky> {
    let m = t.dim();
    let mut packed = Vec::with_capacity(m * (m + 1) / 2);
    packed.push(1.0);
    let mut d = Durbin::new(&t.row, m);
    for _ in 1..m {
        d.step()?;
        if d.beta <= BREAKDOWN_THRESHOLD {
            return Err(Error::Conditioning {
                order: d.y.len(),
                denominator: d.beta,
            });
        }
        let scale = 1.0 / d.beta.sqrt();
        packed.extend(d.y.iter().rev().map(|v| v * scale));
        packed.push(scale);
    }
    Ok(InverseCholesky { dim: m, packed })
}

/// `ξᵀ K⁻¹ ξ = ‖Sᵀ ξ‖²`.
pub fn quad_form(s: &InverseCholesky, xi: &[f64]) -> Result<f64> {
    Ok(s.apply_transpose(xi)?.iter().map(|v| v * v).sum())
}

/// `log |K|^{−1/2} = Σ_j log S_jj`.
pub fn half_log_det_inv(s: &InverseCholesky) -> Result<f64> {
    let mut acc = 0.0;
    for (j, d) in s.diagonal().enumerate() {
        if !(d > 0.0) {
            return Err(Error::Conditioning {
                order: j,
                denominator: d,
            });
        }
        acc += d.ln();
    }
    Ok(acc)
}
