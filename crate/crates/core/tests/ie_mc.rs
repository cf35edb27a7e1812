//! Excursion-set transform on the subordinated process.

use lrd_core::variance::BlockMeans;
use lrd_core::{
    ie_pipeline, subordinate, EstimatorChoice, FgnParams, FgnSimulator, Label, QuantileMeasure,
    SubordinationParams, VariancePlotConfig,
};
use statrs::distribution::{ContinuousCDF, Normal};

fn lrd_frequency(h: f64, n: usize, reps: u64) -> f64 {
    let sim = FgnSimulator::new(FgnParams::unit(h, n).unwrap()).unwrap();
    let levels = QuantileMeasure::random(100, 99).unwrap();
    let est = EstimatorChoice::Variance(VariancePlotConfig::window(1, 14));
    let sub = SubordinationParams::new(1.0).unwrap();
    let hits = (0..reps)
        .filter(|&r| {
            let z = subordinate(&sim.sample(r), &sub).unwrap();
            ie_pipeline(&z, &levels, &est).unwrap() == Label::Lrd
        })
        .count();
    hits as f64 / reps as f64
}

#[test]
fn pipeline_separates_memory_regimes() {
    let strong = lrd_frequency(0.85, 10_000, 200);
    assert!(strong > 0.8, "H = 0.85: LRD frequency {strong}");
    // short-memory side at the length of the classification study
    let weak = lrd_frequency(0.6, 200, 200);
    assert!(weak < 0.6, "H = 0.6: LRD frequency {weak}");
}

#[test]
fn pipeline_ignores_monotone_transforms_of_subordinated_paths() {
    let sim = FgnSimulator::new(FgnParams::unit(0.8, 500).unwrap()).unwrap();
    let levels = QuantileMeasure::random(100, 5).unwrap();
    let sub = SubordinationParams::new(1.0).unwrap();
    for est in [
        EstimatorChoice::Variance(VariancePlotConfig::window(1, 14)),
        EstimatorChoice::Gph(lrd_core::GphConfig::new(5, 88)),
    ] {
        for r in 0..30 {
            let z = subordinate(&sim.sample(r), &sub).unwrap();
            let label = ie_pipeline(&z, &levels, &est).unwrap();
            let log_z = z.map(f64::ln).unwrap();
            let cubed = z.map(|v| v.powi(3) - 4.0).unwrap();
            assert_eq!(label, ie_pipeline(&log_z, &levels, &est).unwrap());
            assert_eq!(label, ie_pipeline(&cubed, &levels, &est).unwrap());
        }
    }
}

#[test]
fn transformed_series_has_positive_block_variance() {
    let sim = FgnSimulator::new(FgnParams::unit(0.7, 200).unwrap()).unwrap();
    let levels = QuantileMeasure::random(100, 1).unwrap();
    let sub = SubordinationParams::new(1.0).unwrap();
    for r in 0..50 {
        let z = subordinate(&sim.sample(r), &sub).unwrap();
        let t = lrd_core::transform_series(&z, &lrd_core::resolve_quantiles(&z, &levels));
        assert!(t.values().iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
        assert!(BlockMeans::new(&t).s2(14) > 0.0);
    }
}

#[test]
fn indicator_covariances_are_nonnegative() {
    // exp(y²/2) > exp(c²/2) iff |y| > c, so thresholds are set on |Y| with
    // exact exceedance probabilities 2(1 − Φ(c))
    let cuts = [0.2, 0.5, 1.0, 1.5, 2.0];
    let thresholds: Vec<f64> = cuts.iter().map(|c: &f64| (c * c / 2.0).exp()).collect();
    let phi = Normal::standard();
    let probs: Vec<f64> = cuts.iter().map(|&c| 2.0 * (1.0 - phi.cdf(c))).collect();
    let (paths, n) = (100, 1000);
    let sub = SubordinationParams::new(1.0).unwrap();
    for (hi, h) in [0.3, 0.6, 0.9].into_iter().enumerate() {
        let sim = FgnSimulator::new(FgnParams::unit(h, n).unwrap()).unwrap();
        // estimates[lag][i][j] holds one value per path
        let mut estimates = vec![vec![vec![Vec::new(); 5]; 5]; 11];
        for r in 0..paths {
            let z = subordinate(&sim.sample(7_000 * hi as u64 + r as u64), &sub).unwrap();
            let ind: Vec<Vec<f64>> = thresholds
                .iter()
                .map(|&u| {
                    z.values()
                        .iter()
                        .map(|&v| f64::from(u8::from(v > u)))
                        .collect()
                })
                .collect();
            for (lag, per_lag) in estimates.iter_mut().enumerate().skip(1) {
                for i in 0..5 {
                    for j in 0..5 {
                        let joint = ind[i][..n - lag]
                            .iter()
                            .zip(&ind[j][lag..])
                            .map(|(a, b)| a * b)
                            .sum::<f64>()
                            / (n - lag) as f64;
                        per_lag[i][j].push(joint - probs[i] * probs[j]);
                    }
                }
            }
        }
        for (lag, per_lag) in estimates.iter().enumerate().skip(1) {
            for (i, row) in per_lag.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let r = e.len() as f64;
                    let mean = e.iter().sum::<f64>() / r;
                    let se =
                        (e.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0) / r)
                            .sqrt();
                    assert!(
                        mean >= -5.0 * se,
                        "H = {h}, lag {lag}, thresholds ({i}, {j}): {mean} (se {se})"
                    );
                }
            }
        }
    }
}
