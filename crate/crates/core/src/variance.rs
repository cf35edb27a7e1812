//! Variance-plot estimator.
//!
//! `S_l²` estimates `Var(X̄_l)` from all `n − l + 1` overlapping blocks of
//! length `l`. For a series whose covariance decays like `k^{2d−1}`,
//! `Var(X̄_l) ≈ c·l^θ` with `θ = 2D − 1 ∈ (−2, 0)`, where `D = d` under long
//! memory and `D = 0` for short memory with positive long-run variance. The
//! slope of `log S_l²` on `log l` over `l = n1..=n2` estimates θ and the
//! series is classified LRD when it exceeds −1.
//!
//! Choosing `n1 = ⌊n^δ⌋` and `n2 = ⌈m·n^δ⌉` with `m > 1` and
//! `δ < admissible_delta_bound(θ)` makes the slope consistent. The bound
//! depends on θ itself, so in practice δ is picked from a grid.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{LrdError, Result};
use crate::label::Label;
use crate::regression::{ols_slope, RegressionFit};
use crate::timeseries::{KahanSum, TimeSeries};

// Guards floor/ceil against n^δ landing a rounding error below an integer.
const RESOLVE_EPS: f64 = 1e-9;

/// Regression window for the variance plot, either explicit or as the
/// growth rule `n1 = ⌊n^δ⌋`, `n2 = ⌈m·n^δ⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariancePlotConfig {
    Window { n1: usize, n2: usize },
    Exponent { delta: f64, m: f64 },
}

impl VariancePlotConfig {
    pub fn window(n1: usize, n2: usize) -> Self {
        VariancePlotConfig::Window { n1, n2 }
    }

    pub fn exponent(delta: f64, m: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(LrdError::InvalidParameter(format!(
                "delta {delta} outside (0, 1)"
            )));
        }
        if !(m > 1.0 && m.is_finite()) {
            return Err(LrdError::InvalidParameter(format!("m {m} must exceed 1")));
        }
        Ok(VariancePlotConfig::Exponent { delta, m })
    }

    /// Resolves against a series length, returning `(n1, n2)` with
    /// `1 ≤ n1 < n2 ≤ n`.
    ///
    /// For the exponent form `n2` is clamped to `n` (with a warning); an
    /// explicit window exceeding `n` is an error.
    pub fn resolve(&self, n: usize) -> Result<(usize, usize)> {
        let (n1, n2) = match *self {
            VariancePlotConfig::Window { n1, n2 } => {
                if n2 > n {
                    return Err(LrdError::WindowExceedsSeries { n2, n });
                }
                (n1, n2)
            }
            VariancePlotConfig::Exponent { delta, m } => {
                let base = (n as f64).powf(delta);
                let n1 = ((base + RESOLVE_EPS).floor() as usize).max(1);
                let mut n2 = (m * base - RESOLVE_EPS).ceil() as usize;
                if n2 > n {
                    log::warn!("n2 = {n2} exceeds series length {n}; clamped");
                    n2 = n;
                }
                (n1, n2)
            }
        };
        if n1 == 0 {
            return Err(LrdError::InvalidWindow {
                n1,
                n2,
                reason: "n1 must be at least 1",
            });
        }
        if n2 <= n1 {
            return Err(LrdError::InvalidWindow {
                n1,
                n2,
                reason: "window needs at least two block lengths",
            });
        }
        Ok((n1, n2))
    }
}

/// `S_l²` for consecutive block lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockVarianceCurve {
    pub lengths: Vec<usize>,
    pub s2: Vec<f64>,
}

impl BlockVarianceCurve {
    /// Block lengths whose `S_l²` is zero, where the log is undefined.
    pub fn zero_lengths(&self) -> Vec<usize> {
        self.lengths
            .iter()
            .zip(&self.s2)
            .filter(|(_, &s)| s == 0.0)
            .map(|(&l, _)| l)
            .collect()
    }

    pub fn get(&self, length: usize) -> Option<f64> {
        let first = *self.lengths.first()?;
        length
            .checked_sub(first)
            .and_then(|i| self.s2.get(i))
            .copied()
    }

    /// Two-column CSV `l,s2`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["l", "s2"])?;
        for (l, s) in self.lengths.iter().zip(&self.s2) {
            wtr.write_record([l.to_string(), format!("{s:e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Prefix sums of the centred series, shared across block lengths.
#[derive(Debug, Clone)]
pub struct BlockMeans {
    prefix: Vec<f64>,
    constant: bool,
    floor: f64,
}

impl BlockMeans {
    pub fn new(x: &TimeSeries) -> Self {
        let v = x.values();
        let mean = crate::timeseries::sample_mean(x);
        let mut prefix = Vec::with_capacity(v.len() + 1);
        prefix.push(0.0);
        let mut acc = KahanSum::new();
        let mut max_abs: f64 = 0.0;
        for &xi in v {
            let c = xi - mean;
            max_abs = max_abs.max(c.abs());
            acc.add(c);
            prefix.push(acc.value());
        }
        let constant = v.iter().all(|&xi| xi == v[0]);
        // block means of an exactly representable constant residual are not
        // exact, so anything at rounding level counts as zero
        let noise = 64.0 * f64::EPSILON * max_abs.max(mean.abs() * f64::EPSILON);
        Self {
            prefix,
            constant,
            floor: noise * noise,
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `S_l²` for one block length; O(n).
    pub fn s2(&self, l: usize) -> f64 {
        let n = self.len();
        assert!(l >= 1 && l <= n, "block length {l} outside 1..={n}");
        if self.constant {
            return 0.0;
        }
        let count = n - l + 1;
        let inv_l = 1.0 / l as f64;
        let block = |k: usize| (self.prefix[k + l] - self.prefix[k]) * inv_l;
        let mu = (0..count).map(block).collect::<KahanSum>().value() / count as f64;
        let s2 = (0..count)
            .map(|k| {
                let d = block(k) - mu;
                d * d
            })
            .collect::<KahanSum>()
            .value()
            / count as f64;
        if s2 <= self.floor {
            0.0
        } else {
            s2
        }
    }

    pub fn curve(&self, n1: usize, n2: usize) -> Result<BlockVarianceCurve> {
        check_lengths(n1, n2, self.len())?;
        let lengths: Vec<usize> = (n1..=n2).collect();
        let s2 = lengths.iter().map(|&l| self.s2(l)).collect();
        Ok(BlockVarianceCurve { lengths, s2 })
    }
}

pub(crate) fn check_lengths(n1: usize, n2: usize, n: usize) -> Result<()> {
    if n2 > n {
        return Err(LrdError::WindowExceedsSeries { n2, n });
    }
    if n1 == 0 || n1 > n2 {
        return Err(LrdError::InvalidWindow {
            n1,
            n2,
            reason: "need 1 <= n1 <= n2",
        });
    }
    Ok(())
}

/// `S_l² = (1/(n−l+1)) Σ_k (B̄_{k,l} − μ̂_{n,l})²` for `l = n1..=n2`, where
/// `B̄_{k,l}` is the mean of `x(k..k+l−1)` and `μ̂_{n,l}` the mean of all
/// block means. Sliding-window evaluation, O(n) per block length.
pub fn block_mean_variances(x: &TimeSeries, n1: usize, n2: usize) -> Result<BlockVarianceCurve> {
    check_lengths(n1, n2, x.len())?;
    BlockMeans::new(x).curve(n1, n2)
}

/// Least-squares slope of `log S_l²` on `log l` over a window of a
/// precomputed curve.
pub fn slope_from_curve(curve: &BlockVarianceCurve, n1: usize, n2: usize) -> Result<RegressionFit> {
    if n2 <= n1 {
        return Err(LrdError::InvalidWindow {
            n1,
            n2,
            reason: "window needs at least two block lengths",
        });
    }
    let mut xs = Vec::with_capacity(n2 - n1 + 1);
    let mut ys = Vec::with_capacity(n2 - n1 + 1);
    for l in n1..=n2 {
        let s = curve.get(l).ok_or(LrdError::InvalidWindow {
            n1,
            n2,
            reason: "window outside computed curve",
        })?;
        if s <= 0.0 {
            return Err(LrdError::DegenerateBlockVariance { length: l });
        }
        xs.push((l as f64).ln());
        ys.push(s.ln());
    }
    ols_slope(&xs, &ys)
}

/// Slope `θ̂` of the variance plot on the configured window.
pub fn variance_plot_slope(x: &TimeSeries, cfg: &VariancePlotConfig) -> Result<RegressionFit> {
    let (n1, n2) = cfg.resolve(x.len())?;
    let curve = block_mean_variances(x, n1, n2)?;
    slope_from_curve(&curve, n1, n2)
}

/// Upper bound on δ for which `n1 = n^δ`, `n2 = m·n1` gives a consistent
/// slope estimator:
/// `min{ 2|θ|/(4|θ|+1), |θ|/(|θ| + (|θ|−1)₊ + 1) }`.
pub fn admissible_delta_bound(theta: f64) -> Result<f64> {
    if !(theta > -2.0 && theta < 0.0) {
        return Err(LrdError::OutOfRangeTheta(theta));
    }
    let a = theta.abs();
    let first = 2.0 * a / (4.0 * a + 1.0);
    let second = a / (a + (a - 1.0).max(0.0) + 1.0);
    Ok(first.min(second))
}

/// LRD iff `θ̂ > −1`.
pub fn classify_lrd_variance(fit: &RegressionFit) -> Label {
    Label::from_positive(fit.slope > -1.0)
}

/// Memory parameter implied by a variance-plot slope, `d = (θ + 1)/2`;
/// positive exactly when the variance classifier says LRD.
pub fn slope_to_memory(theta: f64) -> f64 {
    (theta + 1.0) / 2.0
}
