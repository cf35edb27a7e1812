//! Monte Carlo classification study.
//!
//! For every series length, Hurst value and replication one path is
//! simulated (and, in the subordinated scenario, pushed through the
//! excursion-set transform), both estimators are evaluated on every cutoff
//! pair, and the labels are tallied against the true class.

use std::collections::HashMap;

use lrd_core::fgn::FgnSimulator;
use lrd_core::gph::gph_from_periodogram;
use lrd_core::variance::{slope_from_curve, BlockMeans};
use lrd_core::{
    classify_lrd_gph, classify_lrd_variance, periodogram, resolve_quantiles, subordinate,
    transform_series, FgnParams, GphConfig, Label, QuantileMeasure, SubordinationParams,
    TimeSeries,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ground_truth_label, Scenario, StudyConfig};
use crate::error::Result;
use crate::metrics::{Confusion, EstimatorKind, MetricsReport};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one replication. A pure function of its coordinates, so
/// enlarging a grid never reshuffles existing draws.
pub fn replication_seed(
    master: u64,
    scenario: Scenario,
    n: usize,
    hurst_index: usize,
    replication: usize,
) -> u64 {
    [
        scenario.tag(),
        n as u64,
        hurst_index as u64,
        replication as u64,
    ]
    .iter()
    .fold(splitmix64(master), |acc, &v| {
        splitmix64(acc ^ v.wrapping_mul(GOLDEN))
    })
}

/// Labels of both estimators over their cutoff grids for one series;
/// `None` where the estimator failed (e.g. a zero block variance).
#[derive(Debug, Clone, PartialEq)]
pub struct GridLabels {
    pub variance: Vec<Option<Label>>,
    pub gph: Vec<Option<Label>>,
}

/// Evaluates both estimators on all windows, sharing one block-mean pass and
/// one periodogram across the grid.
pub fn classify_grid(
    x: &TimeSeries,
    variance_pairs: &[(usize, usize)],
    gph_pairs: &[(usize, usize)],
) -> GridLabels {
    let variance = if variance_pairs.is_empty() {
        Vec::new()
    } else {
        let lo = variance_pairs.iter().map(|p| p.0).min().unwrap_or(1);
        let hi = variance_pairs.iter().map(|p| p.1).max().unwrap_or(1);
        let curve = BlockMeans::new(x).curve(lo, hi);
        variance_pairs
            .iter()
            .map(|&(n1, n2)| {
                let curve = curve.as_ref().ok()?;
                slope_from_curve(curve, n1, n2)
                    .ok()
                    .map(|fit| classify_lrd_variance(&fit))
            })
            .collect()
    };
    let gph = if gph_pairs.is_empty() {
        Vec::new()
    } else {
        let pgram = periodogram(x);
        gph_pairs
            .iter()
            .map(|&(l, w)| {
                let p = pgram.as_ref().ok()?;
                gph_from_periodogram(p, &GphConfig::new(l, w))
                    .ok()
                    .map(|fit| classify_lrd_gph(&fit))
            })
            .collect()
    };
    GridLabels { variance, gph }
}

/// Result of [`run_study`]: the resolved configuration and one report per
/// (length, estimator, cutoff pair), ordered by length, estimator, then grid
/// order.
#[derive(Debug, Clone, Serialize)]
pub struct StudyOutcome {
    pub config: StudyConfig,
    pub reports: Vec<MetricsReport>,
}

impl StudyOutcome {
    pub fn for_length(&self, n: usize) -> impl Iterator<Item = &MetricsReport> {
        self.reports.iter().filter(move |r| r.n == n)
    }

    pub fn find(
        &self,
        estimator: EstimatorKind,
        n: usize,
        n1: usize,
        n2: usize,
    ) -> Option<&MetricsReport> {
        self.reports
            .iter()
            .find(|r| r.estimator == estimator && r.n == n && r.n1 == n1 && r.n2 == n2)
    }
}

/// Simulates one study series: fGN, or the excursion-set transform of the
/// subordinated fGN with quantile thresholds resolved from the path itself.
pub fn study_series(
    sim: &FgnSimulator,
    scenario: Scenario,
    seed: u64,
    subordination: &SubordinationParams,
    levels: Option<&QuantileMeasure>,
) -> lrd_core::Result<TimeSeries> {
    let y = sim.sample(seed);
    match scenario {
        Scenario::Fgn => Ok(y),
        Scenario::SubordinatedFgn => {
            let z = subordinate(&y, subordination)?;
            let levels = levels.expect("levels are drawn for the subordinated scenario");
            Ok(transform_series(&z, &resolve_quantiles(&z, levels)))
        }
    }
}

/// Runs the whole study on a pool of `workers` threads.
///
/// Output is a deterministic function of `cfg`: each replication has its own
/// seed, and tallies are integer counts merged by an associative reduction,
/// so the worker count cannot affect the result.
pub fn run_study(cfg: &StudyConfig, workers: usize) -> Result<StudyOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    let subordination = SubordinationParams::new(cfg.alpha)?;
    let levels = match cfg.scenario {
        Scenario::Fgn => None,
        Scenario::SubordinatedFgn => Some(QuantileMeasure::random(cfg.psi, cfg.level_seed)?),
    };

    let mut reports = Vec::new();
    for &n in &cfg.lengths {
        let variance_pairs = cfg.variance_pairs(n);
        let gph_pairs = cfg.gph_pairs(n);
        let simulators = cfg
            .hurst_grid
            .iter()
            .map(|&h| FgnSimulator::new(FgnParams::unit(h, n)?))
            .collect::<lrd_core::Result<Vec<_>>>()?;
        let truths: Vec<Label> = cfg
            .hurst_grid
            .iter()
            .map(|&h| ground_truth_label(cfg.scenario, h))
            .collect();
        let items = cfg.total_series_per_length();
        let width = variance_pairs.len() + gph_pairs.len();
        log::info!(
            "{}: n = {n}, {items} series, {} variance + {} GPH windows",
            cfg.scenario,
            variance_pairs.len(),
            gph_pairs.len()
        );

        let tallies = pool.install(|| {
            (0..items)
                .into_par_iter()
                .map(|item| {
                    let (h_idx, rep) = (item / cfg.replications, item % cfg.replications);
                    let seed = replication_seed(cfg.master_seed, cfg.scenario, n, h_idx, rep);
                    let truth = truths[h_idx];
                    let mut counts = vec![Confusion::default(); width];
                    match study_series(
                        &simulators[h_idx],
                        cfg.scenario,
                        seed,
                        &subordination,
                        levels.as_ref(),
                    ) {
                        Ok(series) => {
                            let labels = classify_grid(&series, &variance_pairs, &gph_pairs);
                            for (c, l) in counts
                                .iter_mut()
                                .zip(labels.variance.into_iter().chain(labels.gph))
                            {
                                c.record(truth, l);
                            }
                        }
                        Err(e) => {
                            log::warn!("replication {rep} at H index {h_idx} failed: {e}");
                            counts.iter_mut().for_each(|c| c.record(truth, None));
                        }
                    }
                    counts
                })
                .reduce(
                    || vec![Confusion::default(); width],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                )
        });

        let kinds = std::iter::repeat(EstimatorKind::Variance)
            .zip(&variance_pairs)
            .chain(std::iter::repeat(EstimatorKind::Gph).zip(&gph_pairs));
        for ((estimator, &(n1, n2)), counts) in kinds.zip(tallies) {
            reports.push(MetricsReport {
                estimator,
                n,
                n1,
                n2,
                counts,
            });
        }
    }
    Ok(StudyOutcome {
        config: cfg.clone(),
        reports,
    })
}

/// Best report per (estimator, length) under the ranking order.
pub fn best_by_estimator(outcome: &StudyOutcome) -> HashMap<(EstimatorKind, usize), MetricsReport> {
    let mut best: HashMap<(EstimatorKind, usize), MetricsReport> = HashMap::new();
    for r in &outcome.reports {
        best.entry((r.estimator, r.n))
            .and_modify(|b| {
                if crate::metrics::ranking_order(r, b).is_lt() {
                    *b = r.clone();
                }
            })
            .or_insert_with(|| r.clone());
    }
    best
}
