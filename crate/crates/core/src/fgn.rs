//! Fractional Gaussian noise: closed-form second-order structure, exact
//! simulation by circulant embedding, and the `exp(Y²/2α)` subordinated
//! process with infinite variance for `α ≤ 2σ²`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::gamma;

use crate::error::{LrdError, Result};
use crate::timeseries::{KahanSum, Provenance, TimeSeries};

/// Relative tolerance for negative circulant eigenvalues (rounding noise).
const EIGENVALUE_TOLERANCE: f64 = 1e-9;

/// Default truncation of the aliasing sum in [`fgn_spectral_density`].
pub const DEFAULT_SPECTRAL_TRUNCATION: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgnParams {
    pub hurst: f64,
    pub sigma2: f64,
    pub n: usize,
}

impl FgnParams {
    pub fn new(hurst: f64, sigma2: f64, n: usize) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(LrdError::InvalidParameter(format!(
                "Hurst index {hurst} outside (0, 1)"
            )));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(LrdError::InvalidParameter(format!(
                "variance {sigma2} must be positive"
            )));
        }
        if n == 0 {
            return Err(LrdError::InvalidParameter(
                "length must be at least 1".into(),
            ));
        }
        Ok(Self { hurst, sigma2, n })
    }

    /// Unit-variance fGN of length `n`.
    pub fn unit(hurst: f64, n: usize) -> Result<Self> {
        Self::new(hurst, 1.0, n)
    }

    /// Memory parameter `d = H − 1/2`.
    pub fn memory_parameter(&self) -> f64 {
        self.hurst - 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubordinationParams {
    pub alpha: f64,
}

impl SubordinationParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(LrdError::InvalidParameter(format!(
                "alpha {alpha} must be positive"
            )));
        }
        Ok(Self { alpha })
    }
}

/// `γ(k) = (σ²/2)(|k+1|^{2H} + |k−1|^{2H} − 2|k|^{2H})`.
pub fn fgn_autocovariance(params: &FgnParams, lag: usize) -> f64 {
    let two_h = 2.0 * params.hurst;
    let k = lag as f64;
    0.5 * params.sigma2
        * ((k + 1.0).powf(two_h) + (k - 1.0).abs().powf(two_h) - 2.0 * k.powf(two_h))
}

/// Spectral density of fGN,
///
/// ```text
/// f(λ) = σ² Γ(2H+1) sin(Hπ) / (2π) · |1 − e^{−iλ}|² · Σ_{|j| ≤ M} |λ + 2πj|^{−1−2H}
/// ```
///
/// with the aliasing sum truncated at `|j| ≤ truncation`. Truncation error
/// for `|λ| < π` is bounded by [`fgn_spectral_truncation_bound`], which
/// decays like `M^{−2H}`.
pub fn fgn_spectral_density(params: &FgnParams, lambda: f64, truncation: usize) -> f64 {
    let exponent = -1.0 - 2.0 * params.hurst;
    let m = truncation as i64;
    // smallest terms first
    let mut acc = KahanSum::new();
    for j in (1..=m).rev() {
        let shift = 2.0 * PI * j as f64;
        acc.add((lambda + shift).abs().powf(exponent));
        acc.add((lambda - shift).abs().powf(exponent));
    }
    acc.add(lambda.abs().powf(exponent));
    spectral_prefactor(params) * transfer_gain(lambda) * acc.value()
}

/// Upper bound on `|f(λ) − f_M(λ)|` for `|λ| < π`: the dropped terms satisfy
/// `|λ + 2πj| ≥ 2π(|j| − 1/2)`, and the tail is compared to an integral.
pub fn fgn_spectral_truncation_bound(params: &FgnParams, lambda: f64, truncation: usize) -> f64 {
    let two_h = 2.0 * params.hurst;
    let m = truncation as f64;
    let tail = 2.0 * (2.0 * PI).powf(-1.0 - two_h) * (m - 0.5).powf(-two_h) / two_h;
    spectral_prefactor(params) * transfer_gain(lambda) * tail
}

/// Low-frequency constant `c_f` in `f(λ) ~ c_f |λ|^{1−2H}`.
pub fn spectral_prefactor(params: &FgnParams) -> f64 {
    params.sigma2 * gamma(2.0 * params.hurst + 1.0) * (params.hurst * PI).sin() / (2.0 * PI)
}

// |1 − e^{−iλ}|² = 2 − 2cos λ = 4 sin²(λ/2)
fn transfer_gain(lambda: f64) -> f64 {
    let s = (0.5 * lambda).sin();
    4.0 * s * s
}

/// Standard normal variates by inverse-CDF transform of open-interval
/// uniforms: exactly one 64-bit draw per variate.
pub struct NormalStream<R> {
    rng: R,
    normal: Normal,
}

impl<R: RngCore> NormalStream<R> {
    pub fn new(rng: R) -> Self {
        Self {
            rng,
            normal: Normal::standard(),
        }
    }

    pub fn draw(&mut self) -> f64 {
        self.normal.inverse_cdf(open_uniform(&mut self.rng))
    }
}

/// Uniform on the open interval (0, 1) from the top 53 bits of one draw.
pub fn open_uniform<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Generator seeded for one simulation.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Davies–Harte sampler for one `FgnParams`, with the circulant eigenvalues
/// and FFT plan precomputed so that repeated draws cost one FFT each.
///
/// The covariance `γ(0..n−1)` is embedded in a symmetric circulant of size
/// `m = 2(n−1)`; its eigenvalues are nonnegative for every `H ∈ (0, 1)`,
/// which makes the sampler exact in distribution.
pub struct FgnSimulator {
    params: FgnParams,
    // sqrt(λ_k / m) for k = 0..=m/2
    scales: Vec<f64>,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for FgnSimulator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FgnSimulator")
            .field("params", &self.params)
            .field("embedding_size", &self.embedding_size())
            .finish()
    }
}

impl FgnSimulator {
    pub fn new(params: FgnParams) -> Result<Self> {
        if params.n == 1 {
            return Ok(Self {
                params,
                scales: vec![params.sigma2.sqrt()],
                fft: None,
            });
        }
        let eigenvalues = circulant_eigenvalues(&params);
        let m = eigenvalues.len();
        let max = eigenvalues.iter().copied().fold(0.0, f64::max);
        let scales = eigenvalues[..=m / 2]
            .iter()
            .map(|&ev| {
                if ev < -EIGENVALUE_TOLERANCE * max {
                    Err(LrdError::EmbeddingFailure { eigenvalue: ev })
                } else {
                    Ok((ev.max(0.0) / m as f64).sqrt())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let fft = FftPlanner::new().plan_fft_forward(m);
        Ok(Self {
            params,
            scales,
            fft: Some(fft),
        })
    }

    pub fn params(&self) -> &FgnParams {
        &self.params
    }

    pub fn embedding_size(&self) -> usize {
        if self.params.n == 1 {
            1
        } else {
            2 * (self.params.n - 1)
        }
    }

    /// Draws one path using normals from `normals`; consumes exactly
    /// `embedding_size()` variates.
    pub fn sample_with<R: RngCore>(&self, normals: &mut NormalStream<R>) -> Vec<f64> {
        let n = self.params.n;
        let Some(fft) = &self.fft else {
            return vec![self.scales[0] * normals.draw()];
        };
        let m = 2 * (n - 1);
        let half = m / 2;
        let mut w = vec![Complex::new(0.0, 0.0); m];
        w[0] = Complex::new(self.scales[0] * normals.draw(), 0.0);
        for k in 1..half {
            let s = self.scales[k] * std::f64::consts::FRAC_1_SQRT_2;
            let re = normals.draw();
            let im = normals.draw();
            w[k] = Complex::new(s * re, s * im);
            w[m - k] = w[k].conj();
        }
        w[half] = Complex::new(self.scales[half] * normals.draw(), 0.0);
        fft.process(&mut w);
        w[..n].iter().map(|c| c.re).collect()
    }

    pub fn sample(&self, seed: u64) -> TimeSeries {
        let mut normals = NormalStream::new(seeded_rng(seed));
        let values = self.sample_with(&mut normals);
        TimeSeries::new(values)
            .expect("circulant embedding produces finite values")
            .with_provenance(fgn_provenance(&self.params, seed))
    }
}

/// Eigenvalues of the minimal circulant embedding, i.e. the DFT of
/// `[γ(0), γ(1), ..., γ(n−1), γ(n−2), ..., γ(1)]`.
pub fn circulant_eigenvalues(params: &FgnParams) -> Vec<f64> {
    let n = params.n;
    assert!(n >= 2, "embedding needs n >= 2");
    let m = 2 * (n - 1);
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let lag = if j < n { j } else { m - j };
            Complex::new(fgn_autocovariance(params, lag), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    row.into_iter().map(|c| c.re).collect()
}

fn fgn_provenance(params: &FgnParams, seed: u64) -> Provenance {
    Provenance::new("fgn")
        .with_param("H", params.hurst)
        .with_param("sigma2", params.sigma2)
        .with_param("n", params.n as f64)
        .with_seed(seed)
}

/// Exact fGN path: jointly Gaussian, mean zero, covariance
/// [`fgn_autocovariance`]. Identical `(params, seed)` reproduce identical
/// output.
pub fn simulate_fgn(params: &FgnParams, seed: u64) -> Result<TimeSeries> {
    Ok(FgnSimulator::new(*params)?.sample(seed))
}

/// Pointwise `Z(k) = exp(y(k)² / (2α))`.
pub fn subordinate(y: &TimeSeries, p: &SubordinationParams) -> Result<TimeSeries> {
    let limit = f64::MAX.ln();
    let values = y
        .values()
        .iter()
        .enumerate()
        .map(|(index, &v)| {
            let argument = v * v / (2.0 * p.alpha);
            if argument > limit {
                Err(LrdError::OverflowValue { index, argument })
            } else {
                Ok(argument.exp())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut provenance = y
        .provenance()
        .cloned()
        .unwrap_or_else(|| Provenance::new("fgn"));
    provenance.model = format!("subordinated-{}", provenance.model);
    provenance.params.insert("alpha".into(), p.alpha);
    Ok(TimeSeries::new(values)?.with_provenance(provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(h: f64, n: usize) -> FgnParams {
        FgnParams::unit(h, n).unwrap()
    }

    #[test]
    fn autocovariance_values() {
        assert_eq!(fgn_autocovariance(&params(0.5, 10), 0), 1.0);
        assert_eq!(fgn_autocovariance(&params(0.5, 10), 1), 0.0);
        let expected = 0.5 * (2f64.powf(1.5) - 2.0);
        assert!((fgn_autocovariance(&params(0.75, 10), 1) - expected).abs() < 1e-15);
        assert!((expected - 0.414_213_5).abs() < 1e-7);
        let p = FgnParams::new(0.3, 2.5, 10).unwrap();
        assert_eq!(fgn_autocovariance(&p, 0), 2.5);
    }

    #[test]
    fn white_noise_spectrum_is_flat() {
        let p = params(0.5, 10);
        for &lambda in &[0.01, 0.3, 1.0, 2.5, -1.7] {
            let f = fgn_spectral_density(&p, lambda, 100_000);
            assert!((f - 1.0 / (2.0 * PI)).abs() < 1e-6, "{lambda}: {f}");
        }
    }

    #[test]
    fn spectral_truncation_bound_holds() {
        let p = params(0.6, 10);
        let reference = fgn_spectral_density(&p, 0.7, 100_000);
        for &m in &[10, 100, 1000] {
            let err = (reference - fgn_spectral_density(&p, 0.7, m)).abs();
            assert!(err <= fgn_spectral_truncation_bound(&p, 0.7, m), "M = {m}");
        }
    }

    #[test]
    fn spectral_low_frequency_asymptote() {
        let p = params(0.75, 10);
        let lambda = 1e-4;
        let scaled = fgn_spectral_density(&p, lambda, DEFAULT_SPECTRAL_TRUNCATION)
            * lambda.powf(2.0 * p.hurst - 1.0);
        let c = spectral_prefactor(&p);
        assert!((scaled / c - 1.0).abs() < 1e-6, "{scaled} vs {c}");
    }

    #[test]
    fn spectral_density_is_even() {
        let p = params(0.6, 10);
        let a = fgn_spectral_density(&p, 0.3, 1000);
        let b = fgn_spectral_density(&p, -0.3, 1000);
        assert!((a - b).abs() <= 1e-14 * a);
    }

    #[test]
    fn eigenvalues_nonnegative_over_hurst_grid() {
        for i in 1..100 {
            let h = i as f64 / 100.0;
            for &n in &[2, 3, 10, 200, 1025] {
                let ev = circulant_eigenvalues(&params(h, n));
                let max = ev.iter().copied().fold(0.0, f64::max);
                let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
                assert!(min >= -1e-9 * max, "H = {h}, n = {n}: {min}");
            }
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let p = params(0.7, 257);
        let a = simulate_fgn(&p, 99).unwrap();
        let b = simulate_fgn(&p, 99).unwrap();
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), simulate_fgn(&p, 100).unwrap().values());
        let prov = a.provenance().unwrap();
        assert_eq!(prov.model, "fgn");
        assert_eq!(prov.seed, Some(99));
        assert_eq!(prov.params["H"], 0.7);
    }

    #[test]
    fn tiny_lengths() {
        assert_eq!(simulate_fgn(&params(0.3, 1), 1).unwrap().len(), 1);
        assert_eq!(simulate_fgn(&params(0.9, 2), 1).unwrap().len(), 2);
        assert_eq!(simulate_fgn(&params(0.9, 3), 1).unwrap().len(), 3);
    }

    #[test]
    fn two_point_law_is_exact() {
        // n = 2: X0 = w0 + w1, X1 = w0 − w1 with Var w0 = (γ0+γ1)/2, Var w1 = (γ0−γ1)/2.
        let p = params(0.8, 2);
        let sim = FgnSimulator::new(p).unwrap();
        let g0 = fgn_autocovariance(&p, 0);
        let g1 = fgn_autocovariance(&p, 1);
        assert!((sim.scales[0].powi(2) - (g0 + g1) / 2.0).abs() < 1e-14);
        assert!((sim.scales[1].powi(2) - (g0 - g1) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn white_noise_lag_one() {
        let x = simulate_fgn(&params(0.5, 100_000), 3).unwrap();
        let v = x.values();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let c1 = v
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / v.len() as f64;
        assert!(c1.abs() < 0.02, "lag-1 autocovariance {c1}");
    }

    #[test]
    fn subordinate_values() {
        let a = SubordinationParams::new(1.0).unwrap();
        let y = TimeSeries::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(subordinate(&y, &a).unwrap().values(), &[1.0, 1.0]);
        let y = TimeSeries::new(vec![2f64.sqrt()]).unwrap();
        assert!((subordinate(&y, &a).unwrap().values()[0] - std::f64::consts::E).abs() < 1e-15);
        let y = TimeSeries::new(vec![2.0]).unwrap();
        let a2 = SubordinationParams::new(2.0).unwrap();
        assert!((subordinate(&y, &a2).unwrap().values()[0] - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn subordinate_overflow() {
        let y = TimeSeries::new(vec![0.0, 40.0]).unwrap();
        let a = SubordinationParams::new(1.0).unwrap();
        assert!(matches!(
            subordinate(&y, &a),
            Err(LrdError::OverflowValue { index: 1, .. })
        ));
        assert!(SubordinationParams::new(0.0).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(FgnParams::new(0.0, 1.0, 10).is_err());
        assert!(FgnParams::new(1.0, 1.0, 10).is_err());
        assert!(FgnParams::new(0.5, 0.0, 10).is_err());
        assert!(FgnParams::new(0.5, 1.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn subordinate_monotone_in_magnitude(pairs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..50), alpha in 0.1f64..3.0) {
            let (small, large): (Vec<f64>, Vec<f64>) = pairs
                .into_iter()
                .map(|(a, b)| if a.abs() <= b.abs() { (a, b) } else { (b, a) })
                .unzip();
            let p = SubordinationParams::new(alpha).unwrap();
            let zs = subordinate(&TimeSeries::new(small).unwrap(), &p).unwrap();
            let zl = subordinate(&TimeSeries::new(large).unwrap(), &p).unwrap();
            for (s, l) in zs.values().iter().zip(zl.values()) {
                prop_assert!(s <= l);
                prop_assert!(*s >= 1.0);
            }
        }
    }
}
