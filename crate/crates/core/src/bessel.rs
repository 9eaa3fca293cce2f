//! Modified Bessel function of the second kind, `K_ν(x)`, for real order.
//!
//! Temme's series for `x < 2` and Steed's continued fraction otherwise, both
//! evaluated at a reduced order `μ = ν − round(ν)` and carried up to `ν`
//! with the forward recurrence (stable for `K`).

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Taylor coefficients of `1/Γ(1+z)` around zero.
const RECIP_GAMMA: [f64; 17] = [
    1.0,
    EULER_GAMMA,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_34,
    -0.009_621_971_527_876_974,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065,
    -0.000_215_241_674_114_951,
    0.000_128_050_282_388_116_2,
    -2.013_485_478_078_824e-5,
    -1.250_493_482_142_671e-6,
    1.133_027_231_981_696e-6,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
];

/// Temme's auxiliary gamma functions for `|μ| ≤ 1/2`:
/// `(Γ₁(μ), Γ₂(μ), 1/Γ(1+μ), 1/Γ(1−μ))`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    if mu.abs() < 0.1 {
        // odd and even parts of the 1/Γ(1+z) series
        let mu2 = mu * mu;
        let mut g1 = 0.0;
        let mut g2 = 0.0;
        let mut p = 1.0;
        for k in 0..RECIP_GAMMA.len() / 2 {
            g2 += RECIP_GAMMA[2 * k] * p;
            g1 -= RECIP_GAMMA[2 * k + 1] * p;
            p *= mu2;
        }
        let plus = g2 - mu * g1;
        let minus = g2 + mu * g1;
        (g1, g2, plus, minus)
    } else {
        let plus = 1.0 / libm::tgamma(1.0 + mu);
        let minus = 1.0 / libm::tgamma(1.0 - mu);
        ((minus - plus) / (2.0 * mu), 0.5 * (minus + plus), plus, minus)
    }
}

/// `(K_μ(x), K_{μ+1}(x))` for `|μ| ≤ 1/2`, `0 < x < 2`.
fn temme_series(mu: f64, x: f64) -> (f64, f64) {
    let half_x = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -half_x.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);

    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = half_x * half_x;
    let mut sum1 = p;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

/// `(K_μ(x), K_{μ+1}(x))` for `|μ| ≤ 1/2`, `x ≥ 2`.
fn steed_fraction(mu: f64, x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    (k_mu, k_mu1)
}

/// `K_ν(x)` for `ν ≥ 0`, `x > 0`. Underflows to zero for `x ≳ 745`.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    debug_assert!(nu >= 0.0 && x > 0.0);
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut k_mu, mut k_mu1) = if x < 2.0 {
        temme_series(mu, x)
    } else {
        steed_fraction(mu, x)
    };
    let two_over_x = 2.0 / x;
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * two_over_x * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    k_mu
}
