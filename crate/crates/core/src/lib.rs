//! Detection of long-range dependence in stationary time series.
//!
//! Two classifiers are provided: the time-domain variance plot (slope of
//! `log S_l²` against `log l` over overlapping block means, LRD iff the
//! slope exceeds −1) and the log-periodogram regression of Geweke and
//! Porter-Hudak (LRD iff `d̂ > 0`). Around them sit an exact fractional
//! Gaussian noise simulator, the infinite-variance subordinated process
//! `exp(Y²/2α)`, and the excursion-set transform that lets the
//! finite-variance estimators assess long memory of such series.

pub mod error;
pub mod fgn;
pub mod gph;
pub mod ie;
pub mod label;
pub mod regression;
pub mod timeseries;
pub mod variance;

#[cfg(any(test, feature = "oracles"))]
pub mod oracles;

pub use error::{LrdError, Result};
pub use fgn::{
    fgn_autocovariance, fgn_spectral_density, simulate_fgn, subordinate, FgnParams, FgnSimulator,
    SubordinationParams,
};
pub use gph::{classify_lrd_gph, gph_estimate, periodogram, GphConfig, Periodogram};
pub use ie::{
    ie_pipeline, resolve_quantiles, transform_series, EstimatorChoice, QuantileMeasure,
    ThresholdMeasure,
};
pub use label::Label;
pub use regression::{ols_slope, RegressionFit};
pub use timeseries::{fbm_from_fgn, sample_mean, Provenance, TimeSeries};
pub use variance::{
    admissible_delta_bound, block_mean_variances, classify_lrd_variance, variance_plot_slope,
    BlockVarianceCurve, VariancePlotConfig,
};
