//! Brute-force reference implementations for differential testing.
//!
//! Deliberately naive: literal transcriptions of the defining sums, with no
//! sharing of code paths with the fast implementations they check. Compiled
//! only for tests or with the `oracles` feature.

use std::f64::consts::PI;

use crate::error::Result;
use crate::fgn::{fgn_autocovariance, FgnParams};
use crate::gph::Periodogram;
use crate::timeseries::TimeSeries;
use crate::variance::{check_lengths, BlockVarianceCurve};

/// Autocovariance `k ↦ γ(k)` of a stationary process.
pub struct CovarianceFunction {
    gamma: Box<dyn Fn(usize) -> f64 + Send + Sync>,
}

impl CovarianceFunction {
    pub fn from_fn(gamma: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            gamma: Box::new(gamma),
        }
    }

    pub fn fgn(params: FgnParams) -> Self {
        Self::from_fn(move |k| fgn_autocovariance(&params, k))
    }

    pub fn white_noise(variance: f64) -> Self {
        Self::from_fn(move |k| if k == 0 { variance } else { 0.0 })
    }

    /// AR(1)-type `γ(k) = σ² ρ^k`.
    pub fn geometric(variance: f64, rho: f64) -> Self {
        Self::from_fn(move |k| variance * rho.powi(k as i32))
    }

    pub fn at(&self, lag: usize) -> f64 {
        (self.gamma)(lag)
    }

    /// Necessary condition for positive semi-definiteness on `0..=max_lag`.
    pub fn dominated_by_variance(&self, max_lag: usize) -> bool {
        let g0 = self.at(0);
        (1..=max_lag).all(|k| self.at(k).abs() <= g0 * (1.0 + 1e-12))
    }
}

/// `Var(X̄_n) = (1/n)[γ(0) + 2 Σ_{k=1}^{n−1} (1 − k/n) γ(k)]`.
pub fn exact_mean_variance(gamma: &CovarianceFunction, n: usize) -> f64 {
    assert!(n >= 1);
    let nf = n as f64;
    let mut sum = gamma.at(0);
    let mut comp = 0.0;
    for k in 1..n {
        let term = 2.0 * (1.0 - k as f64 / nf) * gamma.at(k);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    (sum + comp) / nf
}

/// `E[S_l²]` for a zero-mean stationary series of length `n`:
/// `Var(X̄_l) − Var(μ̂_{n,l})`, where `μ̂_{n,l}` is the mean of the
/// `n − l + 1` overlapping block means. O(n²).
pub fn expected_block_variance(gamma: &CovarianceFunction, n: usize, l: usize) -> f64 {
    assert!(l >= 1 && l <= n);
    let blocks = n - l + 1;
    // weight of x(i) in μ̂: number of blocks covering i, over (blocks · l)
    let weights: Vec<f64> = (0..n)
        .map(|i| {
            let first = i.saturating_sub(l - 1);
            let last = i.min(blocks - 1);
            (last + 1 - first) as f64 / (blocks as f64 * l as f64)
        })
        .collect();
    let gammas: Vec<f64> = (0..n).map(|k| gamma.at(k)).collect();
    let mut var_mu = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += weights[j] * gammas[i.abs_diff(j)];
        }
        var_mu += weights[i] * row;
    }
    exact_mean_variance(gamma, l) - var_mu
}

/// Literal O(n²) evaluation of `|Σ_{k=1}^n x(k) e^{−ikλ_j}|² / (2πn)` for
/// `j = 0..n`.
pub fn brute_force_dft_periodogram(x: &TimeSeries) -> Periodogram {
    let v = x.values();
    let n = v.len();
    assert!(n >= 2, "periodogram needs n >= 2");
    let full = (0..n)
        .map(|j| {
            let (mut re, mut im) = (0.0, 0.0);
            for (idx, &xk) in v.iter().enumerate() {
                let k = idx + 1;
                // reduce j·k mod n before scaling to keep the angle exact
                let angle = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                re += xk * angle.cos();
                im -= xk * angle.sin();
            }
            (re * re + im * im) / (2.0 * PI * n as f64)
        })
        .collect();
    Periodogram::from_full_grid(full)
}

/// Quadratic-time `S_l²`: every block mean summed from scratch.
pub fn naive_block_variances(x: &TimeSeries, n1: usize, n2: usize) -> Result<BlockVarianceCurve> {
    let v = x.values();
    let n = v.len();
    check_lengths(n1, n2, n)?;
    let lengths: Vec<usize> = (n1..=n2).collect();
    let s2 = lengths
        .iter()
        .map(|&l| {
            let means: Vec<f64> = (0..=n - l)
                .map(|k| v[k..k + l].iter().sum::<f64>() / l as f64)
                .collect();
            let mu = means.iter().sum::<f64>() / means.len() as f64;
            means.iter().map(|b| (b - mu) * (b - mu)).sum::<f64>() / means.len() as f64
        })
        .collect();
    Ok(BlockVarianceCurve { lengths, s2 })
}
