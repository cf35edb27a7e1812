//! Ordinary least squares on a single regressor, shared by the variance-plot
//! and log-periodogram estimators.

use serde::Serialize;

use crate::error::{LrdError, Result};
use crate::timeseries::KahanSum;

/// A fitted line `y = intercept + slope * x` together with the design used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl RegressionFit {
    pub fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| y - (self.intercept + self.slope * x))
    }
}

/// Least-squares slope `Σ(x−x̄)(y−ȳ) / Σ(x−x̄)²` and intercept `ȳ − slope·x̄`.
///
/// Centred two-pass evaluation with compensated sums.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> Result<RegressionFit> {
    if xs.len() != ys.len() {
        return Err(LrdError::DegenerateDesign("xs and ys differ in length"));
    }
    let n = xs.len();
    if n < 2 {
        return Err(LrdError::DegenerateDesign("fewer than two points"));
    }
    let x_mean = xs.iter().copied().collect::<KahanSum>().value() / n as f64;
    let y_mean = ys.iter().copied().collect::<KahanSum>().value() / n as f64;

    let mut sxx = KahanSum::new();
    let mut sxy = KahanSum::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x_mean;
        sxx.add(dx * dx);
        sxy.add(dx * (y - y_mean));
    }
    let sxx = sxx.value();
    if sxx <= 0.0 || xs.iter().all(|&x| x == xs[0]) {
        return Err(LrdError::DegenerateDesign("all abscissae coincide"));
    }
    let slope = sxy.value() / sxx;
    Ok(RegressionFit {
        slope,
        intercept: y_mean - slope * x_mean,
        xs: xs.to_vec(),
        ys: ys.to_vec(),
    })
}
