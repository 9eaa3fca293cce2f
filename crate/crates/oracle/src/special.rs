//! Gamma, modified Bessel `K_ν` and the Matérn correlation by quadrature.

use nalgebra::DMatrix;

use crate::quadrature::adaptive_quadrature;

const TAIL: f64 = 50.0;

/// `∫ f` to a relative tolerance, using a coarse pass to size the target.
fn relative_integral<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    let coarse = adaptive_quadrature(f, a, b, 1e-6);
    adaptive_quadrature(f, a, b, rel * coarse.abs().max(f64::MIN_POSITIVE))
}

/// `ln Γ(ν)` for `ν > 0` from `Γ(1+ν) = ∫₀^∞ exp(−s^{1/ν}) ds`.
pub fn ln_gamma(nu: f64) -> f64 {
    assert!(nu > 0.0);
    let p = 1.0 / nu;
    let upper = TAIL.powf(nu);
    let g1 = relative_integral(|s: f64| (-s.powf(p)).exp(), 0.0, upper, 1e-14);
    g1.ln() - nu.ln()
}

/// `ln K_ν(x)` from `K_ν(x) = ∫₀^∞ exp(−x cosh t) cosh(νt) dt`, `x > 0`.
pub fn ln_bessel_k(nu: f64, x: f64) -> f64 {
    assert!(x > 0.0);
    // integrand scaled by e^x so large arguments do not underflow
    let g = move |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
    let mut upper: f64 = 0.5;
    while x * (upper.cosh() - 1.0) - nu.abs() * upper < TAIL {
        upper += 0.5;
    }
    relative_integral(g, 0.0, upper, 1e-14).ln() - x
}

pub fn bessel_k(nu: f64, x: f64) -> f64 {
    ln_bessel_k(nu, x).exp()
}

/// `k(r) = 2^{1−ν}/Γ(ν) (√(2ν) r/ℓ)^ν K_ν(√(2ν) r/ℓ)`.
pub fn matern(r: f64, nu: f64, ell: f64) -> f64 {
    assert!(r >= 0.0 && nu > 0.0 && ell > 0.0);
    if r == 0.0 {
        return 1.0;
    }
    let x = (2.0 * nu).sqrt() * r / ell;
    ((1.0 - nu) * std::f64::consts::LN_2 - ln_gamma(nu) + nu * x.ln() + ln_bessel_k(nu, x)).exp()
}

/// `K_ij = k(|p_i − p_j|)`, evaluated entry by entry.
pub fn kernel_matrix(points: &[f64], nu: f64, ell: f64) -> DMatrix<f64> {
    let m = points.len();
    let mut k = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = matern((points[i] - points[j]).abs(), nu, ell);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// Kernel matrix on `m` equispaced points `j/(m−1)`. Each distinct lag is
/// integrated once.
pub fn grid_kernel_matrix(m: usize, nu: f64, ell: f64) -> DMatrix<f64> {
    let step = 1.0 / (m - 1).max(1) as f64;
    let row: Vec<f64> = (0..m).map(|k| matern(k as f64 * step, nu, ell)).collect();
    DMatrix::from_fn(m, m, |i, j| row[i.abs_diff(j)])
}
