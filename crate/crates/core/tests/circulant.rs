use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapereg_core::circulant::DEFAULT_MAX_EXPONENT;
use shapereg_core::fft::{fft, Direction};
use shapereg_core::grid::{kernel_first_row, MaternKernel};
use shapereg_core::{CirculantEmbedding, Error, MaternParams, PriorSampler, RegularGrid, ToeplitzSpd};
use shapereg_oracle::{naive_dft, special};

fn random_signal(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn matern_embedding(m: usize, nu: f64, ell: f64) -> CirculantEmbedding {
    let grid = RegularGrid::new(m - 1).unwrap();
    let kernel = MaternKernel::new(MaternParams::new(nu, ell).unwrap());
    CirculantEmbedding::from_kernel(&grid, &kernel, DEFAULT_MAX_EXPONENT).unwrap()
}

/// Largest entrywise gap between the top-left `m × m` block of the circulant
/// rebuilt from the spectrum and the dense kernel matrix.
fn block_error(e: &CirculantEmbedding, nu: f64, ell: f64) -> f64 {
    let m = e.dim();
    let d = e.order();
    let c = e.reconstruct_first_row().unwrap();
    let dense = special::grid_kernel_matrix(m, nu, ell);
    let mut err: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let cij = c[(j + d - i) % d];
            err = err.max((cij - dense[(i, j)]).abs());
        }
    }
    err
}

#[test]
fn fft_matches_direct_transform() {
    for len in [1usize, 2, 4, 8, 64, 256, 1024] {
        let x = random_signal(len, len as u64);
        for (dir, inv) in [(Direction::Forward, false), (Direction::Inverse, true)] {
            let fast = fft(&x, dir).unwrap();
            let slow = naive_dft(&x, inv);
            let scale = slow.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() <= 1e-10 * scale, "len {len}");
            }
        }
    }
}

#[test]
fn fft_round_trip() {
    let x = random_signal(512, 1);
    let back = fft(&fft(&x, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (a, b) in x.iter().zip(&back) {
        assert!((a - b).norm() <= 1e-12 * scale);
    }
    assert!(matches!(fft(&x[..100], Direction::Forward), Err(Error::FftLength(100))));
}

#[test]
fn two_point_spectrum() {
    for g in [-1.0, -0.4, 0.0, 0.7, 1.0] {
        let e = CirculantEmbedding::embed(&ToeplitzSpd::new(vec![1.0, g]).unwrap(), |_| 0.0, 20).unwrap();
        assert_eq!(e.order(), 2);
        assert!((e.eigenvalues()[0] - (1.0 + g)).abs() < 1e-15);
        assert!((e.eigenvalues()[1] - (1.0 - g)).abs() < 1e-15);
    }
}

#[test]
fn three_point_base_row() {
    let grid = RegularGrid::new(2).unwrap();
    let params = MaternParams::new(0.75, 0.4).unwrap();
    let kernel = MaternKernel::new(params);
    let e = CirculantEmbedding::from_kernel(&grid, &kernel, 20).unwrap();
    let row = kernel_first_row(&grid, params).unwrap();
    let r = row.first_row();
    assert_eq!(e.order(), 4);
    assert_eq!(e.base_row(), &[r[0], r[1], r[2], r[1]]);
}

#[test]
fn base_row_is_symmetric() {
    let e = matern_embedding(50, 0.9, 0.7);
    let d = e.order();
    assert!(d >= 98 && d.is_power_of_two());
    for k in 1..d {
        assert_eq!(e.base_row()[k], e.base_row()[d - k]);
    }
    assert!(e.eigenvalues().iter().all(|&v| v >= 0.0));
}

#[test]
fn reconstructed_block_matches_dense_kernel() {
    assert!(block_error(&matern_embedding(64, 0.75, 0.3), 0.75, 0.3) <= 1e-12);
    for m in [16, 64, 256] {
        for &(nu, ell) in &[(0.5, 0.2), (0.75, 0.5), (1.0, 1.0)] {
            let err = block_error(&matern_embedding(m, nu, ell), nu, ell);
            assert!(err <= 1e-10, "m={m} nu={nu} ell={ell}: {err:e}");
        }
    }
}

#[test]
fn order_cap_is_an_error() {
    let grid = RegularGrid::new(63).unwrap();
    let kernel = MaternKernel::new(MaternParams::new(0.75, 0.3).unwrap());
    let err = CirculantEmbedding::from_kernel(&grid, &kernel, 6).unwrap_err();
    assert!(matches!(err, Error::Embedding { max_order: 64, .. }));
    assert!(err.is_numerical());
}

#[test]
fn white_noise_covariance() {
    let mut row = vec![0.0; 6];
    row[0] = 1.0;
    let e = CirculantEmbedding::embed(&ToeplitzSpd::new(row).unwrap(), |_| 0.0, 20).unwrap();
    let mut sampler = PriorSampler::new(e);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let draws = 50_000;
    let mut cov = [[0.0; 6]; 6];
    for _ in 0..draws {
        let x = sampler.draw(&mut rng, 1.0);
        for i in 0..6 {
            for j in 0..6 {
                cov[i][j] += x[i] * x[j] / draws as f64;
            }
        }
    }
    for i in 0..6 {
        for j in 0..6 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((cov[i][j] - want).abs() <= 0.05, "({i},{j}) {}", cov[i][j]);
        }
    }
}

#[test]
fn matern_prior_covariance_within_three_se() {
    let (m, nu, ell, tau2) = (32, 0.5, 0.2, 1.0);
    let mut sampler = PriorSampler::new(matern_embedding(m, nu, ell));
    let dense = special::grid_kernel_matrix(m, nu, ell);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draws = 100_000;
    let mut acc = vec![0.0; m * m];
    for _ in 0..draws {
        let x = sampler.draw(&mut rng, tau2);
        for i in 0..m {
            for j in 0..m {
                acc[i * m + j] += x[i] * x[j];
            }
        }
    }
    let n = draws as f64;
    for i in 0..m {
        for j in 0..m {
            let k = tau2 * dense[(i, j)];
            // Var(x_i x_j) for a zero-mean Gaussian pair
            let se = ((tau2 * dense[(i, i)] * tau2 * dense[(j, j)] + k * k) / n).sqrt();
            let got = acc[i * m + j] / n;
            assert!((got - k).abs() <= 3.0 * se, "({i},{j}) {got} vs {k} (se {se:e})");
        }
    }
}

#[test]
fn marginals_and_pair_independence() {
    let e = matern_embedding(16, 0.75, 0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let draws = 100_000;
    let m = e.dim();
    let (mut s1, mut s2, mut q1, mut cross) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let mut q2 = vec![0.0; m];
    for _ in 0..draws {
        let (a, b) = e.sample_pair(&mut rng, 1.0);
        for i in 0..m {
            s1[i] += a[i];
            s2[i] += b[i];
            q1[i] += a[i] * a[i];
            q2[i] += b[i] * b[i];
            cross[i] += a[i] * b[i];
        }
    }
    let n = draws as f64;
    for i in 0..m {
        let (m1, m2) = (s1[i] / n, s2[i] / n);
        let (v1, v2) = (q1[i] / n - m1 * m1, q2[i] / n - m2 * m2);
        assert!(m1.abs() <= 4.0 / n.sqrt() && m2.abs() <= 4.0 / n.sqrt());
        assert!((v1 - 1.0).abs() <= 0.05 && (v2 - 1.0).abs() <= 0.05);
        let corr = (cross[i] / n - m1 * m2) / (v1 * v2).sqrt();
        assert!(corr.abs() <= 0.02, "point {i}: {corr}");
    }
}

#[test]
fn seeded_draws_replay() {
    let run = || {
        let mut s = PriorSampler::new(matern_embedding(20, 0.75, 0.3));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        (0..7).flat_map(|_| s.draw(&mut rng, 2.0)).map(f64::to_bits).collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}
