//! Excursion-set transform for (possibly infinite-variance) series.
//!
//! For a discrete measure `ν = Σ_j w_j δ_{u_j}` the transformed series is
//! `Z_ν(k) = Σ_j w_j 1{x(k) > u_j}`: bounded, hence finite-variance. Long
//! memory of `Z_ν` in the classical covariance sense reflects long memory of
//! `x` in the sense of indicators of excursion sets, so the finite-variance
//! estimators can be run on `Z_ν`.
//!
//! Thresholds are taken as empirical quantiles of the series itself. Since
//! order statistics commute with strictly increasing maps, the whole
//! pipeline is exactly invariant under such maps of the input.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{LrdError, Result};
use crate::fgn::{open_uniform, seeded_rng};
use crate::gph::{classify_lrd_gph, gph_estimate, GphConfig};
use crate::label::Label;
use crate::timeseries::{KahanSum, TimeSeries};
use crate::variance::{classify_lrd_variance, variance_plot_slope, VariancePlotConfig};

/// `ν = (1/ψ) Σ_k δ_{a_k-quantile}`, given by probability levels in (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileMeasure {
    levels: Vec<f64>,
}

impl QuantileMeasure {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(LrdError::InvalidParameter(
                "quantile measure needs at least one level".into(),
            ));
        }
        if let Some(a) = levels.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(LrdError::InvalidParameter(format!(
                "level {a} outside (0, 1)"
            )));
        }
        Ok(Self { levels })
    }

    /// `psi` levels drawn uniformly from (0, 1) with a dedicated seed.
    pub fn random(psi: usize, seed: u64) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        Self::new((0..psi).map(|_| open_uniform(&mut rng)).collect())
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn psi(&self) -> usize {
        self.levels.len()
    }
}

/// `ν = Σ_j w_j δ_{u_j}` with positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdMeasure {
    thresholds: Vec<f64>,
    weights: Vec<f64>,
}

impl ThresholdMeasure {
    pub fn new(thresholds: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() || thresholds.len() != weights.len() {
            return Err(LrdError::InvalidParameter(
                "need equally many thresholds and weights, at least one".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(LrdError::InvalidParameter(format!(
                "weight {w} must be positive"
            )));
        }
        if let Some(u) = thresholds.iter().find(|u| u.is_nan()) {
            return Err(LrdError::InvalidParameter(format!("threshold {u} is NaN")));
        }
        Ok(Self {
            thresholds,
            weights,
        })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().copied().collect::<KahanSum>().value()
    }

    /// Two-column CSV `threshold,weight`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["threshold", "weight"])?;
        for (u, w) in self.thresholds.iter().zip(&self.weights) {
            wtr.write_record([format!("{u:e}"), format!("{w:e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `u_k = x_(⌈a_k·n⌉)`, the left-continuous empirical quantile; weights
/// `1/ψ` each.
pub fn resolve_quantiles(x: &TimeSeries, q: &QuantileMeasure) -> ThresholdMeasure {
    let mut sorted = x.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let thresholds = q
        .levels()
        .iter()
        .map(|&a| sorted[order_statistic_rank(a, n) - 1])
        .collect();
    let weight = 1.0 / q.psi() as f64;
    ThresholdMeasure {
        thresholds,
        weights: vec![weight; q.psi()],
    }
}

/// `⌈a·n⌉` clamped to `1..=n`.
pub fn order_statistic_rank(a: f64, n: usize) -> usize {
    ((a * n as f64).ceil() as usize).clamp(1, n)
}

/// `Z_ν(k) = Σ_j w_j 1{x(k) > u_j}`.
///
/// Thresholds are sorted once, so each point costs a binary search; the
/// result is a nondecreasing step function of `x(k)` with values in
/// `[0, Σ w_j]`.
pub fn transform_series(x: &TimeSeries, m: &ThresholdMeasure) -> TimeSeries {
    let mut pairs: Vec<(f64, f64)> = m
        .thresholds
        .iter()
        .copied()
        .zip(m.weights.iter().copied())
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // cumulative[i] = total weight of the i smallest thresholds
    let mut cumulative = Vec::with_capacity(pairs.len() + 1);
    let mut acc = KahanSum::new();
    cumulative.push(0.0);
    for &(_, w) in &pairs {
        acc.add(w);
        cumulative.push(acc.value());
    }
    let values = x
        .values()
        .iter()
        .map(|&v| cumulative[pairs.partition_point(|&(u, _)| u < v)])
        .collect();
    TimeSeries::new(values).expect("weights are finite")
}

/// Estimator used after the transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorChoice {
    Variance(VariancePlotConfig),
    Gph(GphConfig),
}

impl EstimatorChoice {
    /// Runs the estimator and its classifier on `x` directly.
    pub fn classify(&self, x: &TimeSeries) -> Result<Label> {
        match self {
            EstimatorChoice::Variance(cfg) => {
                Ok(classify_lrd_variance(&variance_plot_slope(x, cfg)?))
            }
            EstimatorChoice::Gph(cfg) => Ok(classify_lrd_gph(&gph_estimate(x, cfg)?)),
        }
    }
}

/// Resolves quantile thresholds from `x`, transforms, then classifies the
/// transformed series.
pub fn ie_pipeline(x: &TimeSeries, q: &QuantileMeasure, est: &EstimatorChoice) -> Result<Label> {
    let measure = resolve_quantiles(x, q);
    est.classify(&transform_series(x, &measure))
}
