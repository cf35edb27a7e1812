//! Periodogram and the (trimmed) log-periodogram regression estimator of
//! the memory parameter `d`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::io::Write;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{LrdError, Result};
use crate::label::Label;
use crate::regression::{ols_slope, RegressionFit};
use crate::timeseries::{kahan_sum, TimeSeries};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Periodogram `I(λ_j) = |Σ_k x(k) e^{−ikλ_j}|² / (2πn)` on the Fourier grid
/// `λ_j = 2πj/n`.
///
/// The primary ordinates are `j = 1..=⌊(n−1)/2⌋`. The whole grid
/// `j = 0..n−1` is kept as well: `j = 0` carries the sample mean and
/// `j > n/2` mirrors `n − j`, but some regression windows reach into it.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    n: usize,
    full: Vec<f64>,
}

impl Periodogram {
    pub(crate) fn from_full_grid(full: Vec<f64>) -> Self {
        Self {
            n: full.len(),
            full,
        }
    }

    /// Series length the periodogram was computed from.
    pub fn series_len(&self) -> usize {
        self.n
    }

    /// Number of non-aliased, nonzero Fourier frequencies `⌊(n−1)/2⌋`.
    pub fn len(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `λ_j` for `j = 1..=len()`.
    pub fn frequencies(&self) -> Vec<f64> {
        (1..=self.len())
            .map(|j| fourier_frequency(j, self.n))
            .collect()
    }

    /// `I(λ_j)` for `j = 1..=len()`.
    pub fn ordinates(&self) -> &[f64] {
        &self.full[1..=self.len()]
    }

    /// `I(λ_j)` for any `j` in `0..n`.
    pub fn ordinate(&self, j: usize) -> f64 {
        self.full[j]
    }

    /// Ordinates on the whole grid `j = 0..n`.
    pub fn full_grid(&self) -> &[f64] {
        &self.full
    }

    /// Two-column CSV `lambda,ordinate` over `j = 1..=len()`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["lambda", "ordinate"])?;
        for (lambda, ord) in self.frequencies().iter().zip(self.ordinates()) {
            wtr.write_record([format!("{lambda:e}"), format!("{ord:e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn fourier_frequency(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

/// FFT periodogram; any `n ≥ 2` (mixed-radix / Bluestein transforms).
pub fn periodogram(x: &TimeSeries) -> Result<Periodogram> {
    let n = x.len();
    if n < 2 {
        return Err(LrdError::SeriesTooShort {
            required: 2,
            actual: n,
        });
    }
    // Nonzero-frequency ordinates do not depend on the mean; transforming the
    // centred series keeps them accurate when the mean dominates.
    let total = kahan_sum(x.values());
    let mean = total / n as f64;
    let mut buf: Vec<Complex<f64>> = x
        .values()
        .iter()
        .map(|&v| Complex::new(v - mean, 0.0))
        .collect();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(&mut buf);
    let norm = 1.0 / (2.0 * PI * n as f64);
    let mut full: Vec<f64> = buf.iter().map(|c| c.norm_sqr() * norm).collect();
    full[0] = total * total * norm;
    // constant input: nonzero-frequency ordinates are exactly zero in
    // exact arithmetic, FFT rounding leaves ~ε² residue
    if x.values().iter().all(|&v| v == x.values()[0]) {
        full[1..].iter_mut().for_each(|o| *o = 0.0);
    }
    Ok(Periodogram::from_full_grid(full))
}

/// Trim `l` and bandwidth `w`: the regression uses the Fourier indices
/// `j = l, ..., w` (`N = w − l + 1` frequencies); `l = 1` means no trimming.
///
/// The estimator is consistent when `w → ∞` and `w/n → 0`. Bandwidths with
/// `w ≥ n/2` are accepted but reach into aliased frequencies, where
/// `I(λ_j) = I(λ_{n−j})` while the regressor keeps decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GphConfig {
    pub trim: usize,
    pub bandwidth: usize,
}

impl GphConfig {
    pub fn new(trim: usize, bandwidth: usize) -> Self {
        Self { trim, bandwidth }
    }

    /// `w = ⌊n^exponent⌋` without trimming.
    pub fn power_bandwidth(n: usize, exponent: f64) -> Self {
        Self {
            trim: 1,
            bandwidth: (n as f64).powf(exponent).floor() as usize,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let (l, w) = (self.trim, self.bandwidth);
        if l == 0 {
            return Err(LrdError::InvalidWindow {
                n1: l,
                n2: w,
                reason: "trim must be at least 1",
            });
        }
        if w <= l {
            return Err(LrdError::InvalidWindow {
                n1: l,
                n2: w,
                reason: "need at least two frequencies",
            });
        }
        if w >= n {
            return Err(LrdError::WindowExceedsSeries {
                n2: w,
                n: n.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// Whether the window stays below the Nyquist frequency.
    pub fn is_unaliased(&self, n: usize) -> bool {
        2 * self.bandwidth < n
    }
}

/// Regresses `log I(λ_{k,l})` on `b_{k,l} = −2 log λ_{k,l}` with
/// `λ_{k,l} = 2π(l+k−1)/n`, `k = 1..=N`; the slope is `d̂`.
pub fn gph_from_periodogram(p: &Periodogram, cfg: &GphConfig) -> Result<RegressionFit> {
    let n = p.series_len();
    cfg.validate(n)?;
    let count = cfg.bandwidth - cfg.trim + 1;
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for j in cfg.trim..=cfg.bandwidth {
        let ord = p.ordinate(j);
        if ord <= 0.0 {
            return Err(LrdError::ZeroPeriodogramOrdinate { index: j });
        }
        xs.push(-2.0 * fourier_frequency(j, n).ln());
        ys.push(ord.ln());
    }
    ols_slope(&xs, &ys)
}

pub fn gph_estimate(x: &TimeSeries, cfg: &GphConfig) -> Result<RegressionFit> {
    cfg.validate(x.len())?;
    gph_from_periodogram(&periodogram(x)?, cfg)
}

/// LRD iff `d̂ > 0`.
pub fn classify_lrd_gph(fit: &RegressionFit) -> Label {
    Label::from_positive(fit.slope > 0.0)
}
