//! Monte Carlo checks that simulated paths follow the fGN law.

use lrd_core::fgn::{seeded_rng, NormalStream};
use lrd_core::oracles::{exact_mean_variance, expected_block_variance, CovarianceFunction};
use lrd_core::{block_mean_variances, fgn_autocovariance, sample_mean, FgnParams, FgnSimulator};

fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let r = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / r;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

#[test]
fn standard_normal_stream() {
    let mut z = NormalStream::new(seeded_rng(2024));
    let xs: Vec<f64> = (0..10_000).map(|_| z.draw()).collect();
    let (mean, _) = mean_and_se(&xs);
    assert!(mean.abs() < 0.04, "mean {mean}");
    let var = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
    assert!((var - 1.0).abs() < 0.06, "variance {var}");
}

#[test]
fn sample_autocovariance_matches_law() {
    // 100 independent paths of 1000 = 10^5 samples; each path is one batch,
    // and the per-path lag products are unbiased for γ(k) since the mean is 0
    let (paths, n) = (100, 1000);
    for (hi, h) in [0.2, 0.5, 0.7, 0.9].into_iter().enumerate() {
        let params = FgnParams::new(h, 2.0, n).unwrap();
        let sim = FgnSimulator::new(params).unwrap();
        let mut per_lag = vec![Vec::new(); 21];
        for r in 0..paths {
            let x = sim.sample(1000 * hi as u64 + r as u64);
            let v = x.values();
            for (k, est) in per_lag.iter_mut().enumerate() {
                est.push(
                    v[..n - k]
                        .iter()
                        .zip(&v[k..])
                        .map(|(a, b)| a * b)
                        .sum::<f64>()
                        / (n - k) as f64,
                );
            }
        }
        for (k, est) in per_lag.iter().enumerate() {
            let (mean, se) = mean_and_se(est);
            let exact = fgn_autocovariance(&params, k);
            assert!(
                (mean - exact).abs() <= 5.0 * se,
                "H = {h}, lag {k}: {mean} vs {exact} (se {se})"
            );
        }
    }
}

#[test]
fn sample_mean_variance_matches_law() {
    let (reps, n) = (500, 1024);
    for h in [0.3, 0.5, 0.7, 0.9] {
        let sim = FgnSimulator::new(FgnParams::unit(h, n).unwrap()).unwrap();
        let means: Vec<f64> = (0..reps).map(|r| sample_mean(&sim.sample(r))).collect();
        let v_hat = means.iter().map(|m| m * m).sum::<f64>() / reps as f64;
        let exact =
            exact_mean_variance(&CovarianceFunction::fgn(FgnParams::unit(h, n).unwrap()), n);
        let se = exact * (2.0 / reps as f64).sqrt();
        assert!(
            (v_hat - exact).abs() <= 5.0 * se,
            "H = {h}: {v_hat} vs {exact}"
        );
    }
}

#[test]
fn expected_block_variance_matches_simulation() {
    let (reps, n) = (2000, 200);
    for h in [0.3, 0.7] {
        let params = FgnParams::unit(h, n).unwrap();
        let sim = FgnSimulator::new(params).unwrap();
        let gamma = CovarianceFunction::fgn(params);
        let lengths = [1, 2, 5, 10, 20, 50];
        let mut draws = vec![Vec::with_capacity(reps); lengths.len()];
        for r in 0..reps {
            let curve = block_mean_variances(&sim.sample(50_000 + r as u64), 1, 50).unwrap();
            for (d, &l) in draws.iter_mut().zip(&lengths) {
                d.push(curve.get(l).unwrap());
            }
        }
        for (d, &l) in draws.iter().zip(&lengths) {
            let (mean, se) = mean_and_se(d);
            let exact = expected_block_variance(&gamma, n, l);
            assert!(
                (mean - exact).abs() <= 5.0 * se,
                "H = {h}, l = {l}: {mean} vs {exact} (se {se})"
            );
        }
    }
}

#[test]
fn pooled_variance_close_to_sigma2() {
    let params = FgnParams::new(0.7, 3.0, 10_000).unwrap();
    let sim = FgnSimulator::new(params).unwrap();
    let pooled = (0..200)
        .map(|r| {
            let x = sim.sample(r);
            let m = sample_mean(&x);
            x.values().iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64
        })
        .sum::<f64>()
        / 200.0;
    assert!(
        (pooled / 3.0 - 1.0).abs() < 0.03,
        "pooled variance {pooled}"
    );
}
