use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapereg_core::circulant::DEFAULT_MAX_EXPONENT;
use shapereg_core::diagnostics::effective_sample_size;
use shapereg_core::ess::{
    elliptical_slice, elliptical_slice_observed, ellipse_point, EllipseLikelihood, DEFAULT_MAX_SHRINKS,
};
use shapereg_core::grid::MaternKernel;
use shapereg_core::{
    BasisDesign, BasisKind, CirculantEmbedding, Error, MaternParams, PriorSampler, RegularGrid, RelaxedTarget,
};
use shapereg_oracle::dense::gaussian_posterior;
use shapereg_oracle::{basis as quad, rejection_tmvn, rejection_weighted, special, DenseSpd};

fn prior(n_spacings: usize, nu: f64, ell: f64) -> PriorSampler {
    let grid = RegularGrid::new(n_spacings).unwrap();
    let kernel = MaternKernel::new(MaternParams::new(nu, ell).unwrap());
    PriorSampler::new(CirculantEmbedding::from_kernel(&grid, &kernel, DEFAULT_MAX_EXPONENT).unwrap())
}

/// Monte Carlo standard error of the mean of an autocorrelated series.
fn mc_se(series: &[f64]) -> f64 {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (var / effective_sample_size(series).unwrap().value).sqrt()
}

fn column(draws: &[Vec<f64>], k: usize) -> Vec<f64> {
    draws.iter().map(|d| d[k]).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sigmoid_weight(xi: &[f64], eta: f64) -> f64 {
    xi.iter().map(|&v| 1.0 / (1.0 + (-eta * v).exp())).product()
}

struct Flat;

impl EllipseLikelihood for Flat {
    type Projection = ();
    fn project(&self, _: &[f64]) {}
    fn rotate(&self, _: &(), _: &(), _: f64, _: f64) {}
    fn log_likelihood_projected(&self, _: &[f64], _: &()) -> f64 {
        0.0
    }
}

/// `N(y; Aξ, s² I)` up to a constant.
struct Gaussian {
    a: DMatrix<f64>,
    y: Vec<f64>,
    s2: f64,
}

impl EllipseLikelihood for Gaussian {
    type Projection = Vec<f64>;
    fn project(&self, v: &[f64]) -> Vec<f64> {
        (&self.a * DVector::from_column_slice(v)).as_slice().to_vec()
    }
    fn rotate(&self, xi: &Vec<f64>, nu: &Vec<f64>, s: f64, c: f64) -> Vec<f64> {
        xi.iter().zip(nu).map(|(x, n)| x * c + n * s).collect()
    }
    fn log_likelihood_projected(&self, _: &[f64], p: &Vec<f64>) -> f64 {
        -self.y.iter().zip(p).map(|(y, f)| (y - f).powi(2)).sum::<f64>() / (2.0 * self.s2)
    }
}

/// Pins the chain to its current point.
struct Spike(Vec<f64>);

impl EllipseLikelihood for Spike {
    type Projection = ();
    fn project(&self, _: &[f64]) {}
    fn rotate(&self, _: &(), _: &(), _: f64, _: f64) {}
    fn log_likelihood_projected(&self, xi: &[f64], _: &()) -> f64 {
        -1e12 * xi.iter().zip(&self.0).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
    }
}

#[test]
fn relaxed_likelihood_examples() {
    let g = RegularGrid::new(4).unwrap();
    let x = [0.1, 0.4, 0.5, 0.9];
    let d = BasisDesign::new(&x, &g, BasisKind::IntegratedOnce).unwrap();
    let zero = [0.0; 4];
    let t = RelaxedTarget::new(&d, &zero, 1.0, 50.0).unwrap();
    let ll = t.log_relaxed_likelihood(&[0.0; 5]).unwrap();
    assert!((ll + 5.0 * std::f64::consts::LN_2).abs() < 1e-14);

    let xi = [14.0; 5];
    let fitted = d.apply(&xi).unwrap();
    let t = RelaxedTarget::new(&d, &fitted, 0.3, 50.0).unwrap();
    assert!(t.log_relaxed_likelihood(&xi).unwrap().abs() < 1e-290);

    let wild = [1e4 / 50.0, -1e4 / 50.0, 0.0, 3.0, -7.0];
    assert!(t.log_relaxed_likelihood(&wild).unwrap().is_finite());
}

#[test]
fn relaxed_likelihood_direct_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = RegularGrid::new(2).unwrap();
    for _ in 0..20 {
        let x: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let r: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let xi: Vec<f64> = (0..3).map(|_| rng.random_range(-0.3..0.3)).collect();
        let (sigma2, eta) = (rng.random_range(0.1..2.0), rng.random_range(1.0..60.0));
        let d = BasisDesign::new(&x, &g, BasisKind::IntegratedOnce).unwrap();
        let got = RelaxedTarget::new(&d, &r, sigma2, eta).unwrap().log_relaxed_likelihood(&xi).unwrap();

        let b = quad::design(&x, 2, 1);
        let mut want = 0.0;
        for i in 0..4 {
            let f: f64 = (0..3).map(|j| b[(i, j)] * xi[j]).sum();
            want -= (r[i] - f).powi(2) / (2.0 * sigma2);
        }
        for &v in &xi {
            want += ((eta * v).exp() / (1.0 + (eta * v).exp())).ln();
        }
        assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "{got} vs {want}");
    }
}

#[test]
fn flat_likelihood_accepts_first_angle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xi = [0.3, -1.0, 2.0];
    let nu = [1.5, 0.2, -0.7];
    for _ in 0..100 {
        let out = elliptical_slice(&Flat, &xi, &nu, &mut rng, DEFAULT_MAX_SHRINKS).unwrap();
        assert_eq!(out.shrinks, 0);
        assert_eq!(out.xi, ellipse_point(&xi, &nu, out.theta));
        let (s, c) = out.theta.sin_cos();
        for k in 0..3 {
            assert_eq!(out.xi[k], xi[k] * c + nu[k] * s);
        }
    }
    assert_eq!(ellipse_point(&xi, &nu, 0.0), xi.to_vec());
}

#[test]
fn shrink_cap_is_an_error() {
    let xi = vec![0.5, 0.5];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let err = elliptical_slice(&Spike(xi.clone()), &xi, &[1.0, -1.0], &mut rng, 5).unwrap_err();
    assert_eq!(err, Error::ShrinkLimit(5));
    assert!(err.is_numerical());
}

#[test]
fn brackets_nest_and_accepted_points_lie_on_ellipse() {
    let g = RegularGrid::new(6).unwrap();
    let x: Vec<f64> = (0..30).map(|i| i as f64 / 29.0).collect();
    let y: Vec<f64> = x.iter().map(|v| (5.0 * v + 1.0f64).ln()).collect();
    let d = BasisDesign::new(&x, &g, BasisKind::IntegratedOnce).unwrap();
    let t = RelaxedTarget::new(&d, &y, 0.01, 50.0).unwrap();
    let mut p = prior(6, 0.75, 0.4);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut xi = vec![1.0; 7];
    let mut shrunk = 0;
    for _ in 0..500 {
        let nu = p.draw(&mut rng, 1.0);
        let mut seen = Vec::new();
        let out = elliptical_slice_observed(&t, &xi, &nu, &mut rng, DEFAULT_MAX_SHRINKS, |lo, hi, th| {
            seen.push((lo, hi, th))
        })
        .unwrap();
        for (k, w) in seen.windows(2).enumerate() {
            let ((lo_a, hi_a, th_a), (lo_b, hi_b, _)) = (w[0], w[1]);
            assert!(lo_b >= lo_a && hi_b <= hi_a);
            assert!(lo_b == th_a || hi_b == th_a);
            assert!(lo_b <= 0.0 && hi_b >= 0.0);
            if k > 0 {
                assert!(hi_b - lo_b < hi_a - lo_a);
            }
        }
        shrunk += out.shrinks;
        let on = ellipse_point(&xi, &nu, out.theta);
        for (a, b) in on.iter().zip(&out.xi) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
        assert!(out.log_likelihood.is_finite());
        xi = out.xi;
    }
    assert!(shrunk > 0, "likelihood never rejected a proposal");
}

#[test]
fn stationary_on_gaussian_posterior() {
    let (n_sp, nu, ell, tau2) = (2, 0.75, 0.5, 1.5);
    let a = DMatrix::from_row_slice(4, 3, &[1.0, 0.2, 0.0, 0.0, 1.0, 0.5, 0.3, 0.0, 1.0, 1.0, 1.0, 1.0]);
    let y = vec![0.4, -0.3, 1.1, 0.8];
    let s2 = 0.5;
    let lik = Gaussian { a: a.clone(), y: y.clone(), s2 };

    let k = special::grid_kernel_matrix(3, nu, ell) * tau2;
    let (post_mean, post_cov) = gaussian_posterior(&DenseSpd::new(k).unwrap(), &a, &y, s2).unwrap();

    let mut p = prior(n_sp, nu, ell);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut xi = vec![0.0; 3];
    let draws: Vec<Vec<f64>> = (0..100_000)
        .map(|_| {
            let v = p.draw(&mut rng, tau2);
            xi = elliptical_slice(&lik, &xi, &v, &mut rng, DEFAULT_MAX_SHRINKS).unwrap().xi;
            xi.clone()
        })
        .collect();
    for i in 0..3 {
        let ci = column(&draws, i);
        let m = mean(&ci);
        assert!((m - post_mean[i]).abs() <= 3.0 * mc_se(&ci), "mean {i}: {m} vs {}", post_mean[i]);
        for j in 0..=i {
            let cj = column(&draws, j);
            let prod: Vec<f64> = ci
                .iter()
                .zip(&cj)
                .map(|(a, b)| (a - post_mean[i]) * (b - post_mean[j]))
                .collect();
            let c = mean(&prod);
            let want = post_cov.get(i, j);
            assert!((c - want).abs() <= 3.0 * mc_se(&prod), "cov ({i},{j}): {c} vs {want}");
        }
    }
}

/// Data, design and prior for a small monotone problem.
struct Toy {
    design: BasisDesign,
    oracle_design: DMatrix<f64>,
    y: Vec<f64>,
    sigma2: f64,
    tau2: f64,
    nu: f64,
    ell: f64,
    n_spacings: usize,
}

fn toy(n_spacings: usize) -> Toy {
    let n = 12;
    let x: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    let noise = [0.03, -0.05, 0.02, 0.04, -0.01, -0.04, 0.05, 0.0, -0.02, 0.03, -0.03, 0.01];
    let y: Vec<f64> = x.iter().zip(noise).map(|(v, e)| (10.0 * v + 1.0f64).ln() + e).collect();
    let grid = RegularGrid::new(n_spacings).unwrap();
    Toy {
        design: BasisDesign::new(&x, &grid, BasisKind::IntegratedOnce).unwrap(),
        oracle_design: quad::design(&x, n_spacings, 1),
        y,
        sigma2: 0.05,
        tau2: 4.0,
        nu: 0.75,
        ell: 0.5,
        n_spacings,
    }
}

impl Toy {
    fn posterior(&self) -> (Vec<f64>, DenseSpd) {
        let k = special::grid_kernel_matrix(self.n_spacings + 1, self.nu, self.ell) * self.tau2;
        gaussian_posterior(&DenseSpd::new(k).unwrap(), &self.oracle_design, &self.y, self.sigma2).unwrap()
    }
}

#[test]
fn ess_matches_rejection_oracle_on_relaxed_target() {
    let toy = toy(2);
    let eta = 50.0;
    let target = RelaxedTarget::new(&toy.design, &toy.y, toy.sigma2, eta).unwrap();
    let mut p = prior(toy.n_spacings, toy.nu, toy.ell);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut xi = vec![1.0; 3];
    let chain: Vec<Vec<f64>> = (0..200_000)
        .map(|_| {
            xi = target.ess_step(&xi, &mut p, toy.tau2, &mut rng, DEFAULT_MAX_SHRINKS).unwrap().xi;
            xi.clone()
        })
        .collect();

    let (m, c) = toy.posterior();
    let mut orng = ChaCha8Rng::seed_from_u64(3);
    let exact: Vec<Vec<f64>> = (0..50_000)
        .map(|_| rejection_weighted(&m, &c, |v| sigmoid_weight(v, eta), 100_000, &mut orng).unwrap())
        .collect();
    for k in 0..3 {
        let (a, b) = (column(&chain, k), column(&exact, k));
        let sd_b = (b.iter().map(|v| (v - mean(&b)).powi(2)).sum::<f64>() / b.len() as f64).sqrt();
        let se = (mc_se(&a).powi(2) + sd_b * sd_b / b.len() as f64).sqrt();
        assert!((mean(&a) - mean(&b)).abs() <= 3.0 * se, "coord {k}: {} vs {} (se {se})", mean(&a), mean(&b));
    }
}

#[test]
fn relaxation_bias_is_small() {
    let toy = toy(3);
    let (m, c) = toy.posterior();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws = 100_000;
    let relaxed: Vec<Vec<f64>> = (0..draws)
        .map(|_| rejection_weighted(&m, &c, |v| sigmoid_weight(v, 50.0), 100_000, &mut rng).unwrap())
        .collect();
    let exact: Vec<Vec<f64>> = (0..draws).map(|_| rejection_tmvn(&m, &c, 100_000, &mut rng).unwrap()).collect();
    for k in 0..4 {
        let gap = (mean(&column(&relaxed, k)) - mean(&column(&exact, k))).abs();
        assert!(gap <= 0.02, "coord {k}: {gap}");
    }
}
