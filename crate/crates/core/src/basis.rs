//! Maatouk–Bay interpolation basis and its integrated variants.
//!
//! With `h(s) = (1 − |s|)₊` and `s = (x − u_j)/δ`, the integrals reduce to the
//! antiderivatives of the standard hat
//!
//! ```text
//! H(s) = ∫_{−∞}^s h   = (1+s)²/2 on [−1,0],  1 − (1−s)²/2 on [0,1]
//! G(s) = ∫_{−∞}^s H   = (1+s)³/6 on [−1,0],  s + (1−s)³/6 on [0,1],  s beyond
//! ```
//!
//! so `ψ_j(x) = δ (H(s_x) − H(s_0))` and
//! `φ_j(x) = δ² (G(s_x) − G(s_0)) − δ H(s_0) x`, where `s_0 = −u_j/δ`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::RegularGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `h_j`
    Interpolation,
    /// `ψ_j`, used by the monotone model.
    IntegratedOnce,
    /// `φ_j`, used by the convex model.
    IntegratedTwice,
}

fn hat_std(s: f64) -> f64 {
    let a = 1.0 - s.abs();
    if a > 0.0 {
        a
    } else {
        0.0
    }
}

fn hat_antiderivative(s: f64) -> f64 {
    if s <= -1.0 {
        0.0
    } else if s <= 0.0 {
        0.5 * (1.0 + s) * (1.0 + s)
    } else if s < 1.0 {
        1.0 - 0.5 * (1.0 - s) * (1.0 - s)
    } else {
        1.0
    }
}

fn hat_second_antiderivative(s: f64) -> f64 {
    if s <= -1.0 {
        0.0
    } else if s <= 0.0 {
        let t = 1.0 + s;
        t * t * t / 6.0
    } else if s < 1.0 {
        let t = 1.0 - s;
        s + t * t * t / 6.0
    } else {
        s
    }
}

fn check_index(j: usize, grid: &RegularGrid) -> Result<()> {
    if j > grid.spacings() {
        return Err(Error::DimensionMismatch {
            expected: grid.spacings(),
            found: j,
        });
    }
    Ok(())
}

/// `h_j(x)`.
pub fn hat(x: f64, j: usize, grid: &RegularGrid) -> Result<f64> {
    check_index(j, grid)?;
    Ok(hat_std(x * grid.spacings() as f64 - j as f64))
}

/// `ψ_j(x) = ∫₀ˣ h_j`.
pub fn psi(x: f64, j: usize, grid: &RegularGrid) -> Result<f64> {
    check_index(j, grid)?;
    Ok(psi_unchecked(x, j, grid))
}

/// `φ_j(x) = ∫₀ˣ ∫₀ᵗ h_j`.
pub fn phi(x: f64, j: usize, grid: &RegularGrid) -> Result<f64> {
    check_index(j, grid)?;
    Ok(phi_unchecked(x, j, grid))
}

fn psi_unchecked(x: f64, j: usize, grid: &RegularGrid) -> f64 {
    let n = grid.spacings() as f64;
    let delta = grid.delta();
    let s0 = -(j as f64);
    let sx = x * n - j as f64;
    delta * (hat_antiderivative(sx) - hat_antiderivative(s0))
}

fn phi_unchecked(x: f64, j: usize, grid: &RegularGrid) -> f64 {
    let n = grid.spacings() as f64;
    let delta = grid.delta();
    let s0 = -(j as f64);
    let sx = x * n - j as f64;
    delta * delta * (hat_second_antiderivative(sx) - hat_second_antiderivative(s0))
        - delta * hat_antiderivative(s0) * x
}

fn eval(kind: BasisKind, x: f64, j: usize, grid: &RegularGrid) -> f64 {
    match kind {
        BasisKind::Interpolation => hat_std(x * grid.spacings() as f64 - j as f64),
        BasisKind::IntegratedOnce => psi_unchecked(x, j, grid),
        BasisKind::IntegratedTwice => phi_unchecked(x, j, grid),
    }
}

/// Dense `n × (N+1)` design matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisDesign {
    grid: RegularGrid,
    kind: BasisKind,
    rows: usize,
    data: Vec<f64>,
}

impl BasisDesign {
    pub fn new(x: &[f64], grid: &RegularGrid, kind: BasisKind) -> Result<Self> {
        if x.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Domain("covariates must lie in [0, 1]"));
        }
        let cols = grid.len();
        let mut data = Vec::with_capacity(x.len() * cols);
        for &xi in x {
            data.extend((0..cols).map(|j| eval(kind, xi, j, grid)));
        }
        Ok(Self {
            grid: grid.clone(),
            kind,
            rows: x.len(),
            data,
        })
    }

    pub fn grid(&self) -> &RegularGrid {
        &self.grid
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.grid.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.cols();
        &self.data[i * c..(i + 1) * c]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols() + j]
    }

    /// `B ξ`.
    pub fn apply(&self, xi: &[f64]) -> Result<Vec<f64>> {
        if xi.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: xi.len(),
            });
        }
        Ok(self
            .data
            .chunks_exact(self.cols())
            .map(|row| row.iter().zip(xi).map(|(b, c)| b * c).sum())
            .collect())
    }
}

/// `design` as a free function.
pub fn design(x: &[f64], grid: &RegularGrid, kind: BasisKind) -> Result<BasisDesign> {
    BasisDesign::new(x, grid, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> RegularGrid {
        RegularGrid::new(n).unwrap()
    }

    #[test]
    fn hat_values() {
        let g = grid(5);
        for j in 0..=5 {
            assert_eq!(hat(g.knot(j), j, &g).unwrap(), 1.0);
        }
        assert_eq!(hat(g.knot(1), 2, &g).unwrap(), 0.0);
        assert_eq!(hat(g.knot(3), 2, &g).unwrap(), 0.0);
        assert!((hat(0.5 * (g.knot(2) + g.knot(3)), 2, &g).unwrap() - 0.5).abs() < 1e-15);
        assert!(hat(0.5, 6, &g).is_err());
    }

    #[test]
    fn psi_endpoints() {
        let g = grid(4);
        for j in 0..=4 {
            assert_eq!(psi(0.0, j, &g).unwrap(), 0.0);
        }
        assert!((psi(1.0, 2, &g).unwrap() - 0.25).abs() < 1e-15);
        assert!((psi(1.0, 0, &g).unwrap() - 0.125).abs() < 1e-15);
        assert!((psi(1.0, 4, &g).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn phi_support_and_origin() {
        let g = grid(4);
        for j in 0..=4 {
            assert_eq!(phi(0.0, j, &g).unwrap(), 0.0);
        }
        assert_eq!(phi(g.knot(1), 2, &g).unwrap(), 0.0);
        assert_eq!(phi(0.1, 3, &g).unwrap(), 0.0);
        // right derivative at zero vanishes: φ_0(ε) = O(ε²)
        let eps = 1e-6;
        assert!(phi(eps, 0, &g).unwrap() / eps < 1e-5);
    }

    #[test]
    fn design_rows() {
        let g = grid(4);
        let d = design(&[g.knot(3)], &g, BasisKind::Interpolation).unwrap();
        assert_eq!(d.row(0), &[0.0, 0.0, 0.0, 1.0, 0.0]);

        let d = design(&[1.0], &g, BasisKind::IntegratedOnce).unwrap();
        let want = [0.125, 0.25, 0.25, 0.25, 0.125];
        for (a, b) in d.row(0).iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }

        let d = design(&[0.0], &g, BasisKind::IntegratedTwice).unwrap();
        assert!(d.row(0).iter().all(|&v| v == 0.0));

        assert!(design(&[1.2], &g, BasisKind::Interpolation).is_err());
        assert!(design(&[-0.1], &g, BasisKind::IntegratedOnce).is_err());
    }

    #[test]
    fn apply_matches_rows() {
        let g = grid(3);
        let d = design(&[0.1, 0.5, 0.9], &g, BasisKind::IntegratedOnce).unwrap();
        let xi = [1.0, 2.0, 0.5, 0.0];
        let out = d.apply(&xi).unwrap();
        for (i, v) in out.iter().enumerate() {
            let direct: f64 = (0..4).map(|j| d.get(i, j) * xi[j]).sum();
            assert!((v - direct).abs() < 1e-15);
        }
        assert!(d.apply(&[1.0]).is_err());
    }
}
