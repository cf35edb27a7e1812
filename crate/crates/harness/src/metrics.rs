//! Confusion counts, classification metrics and cutoff ranking.

use std::cmp::Ordering;
use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use lrd_core::Label;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Variance,
    Gph,
}

impl EstimatorKind {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Variance => "variance",
            EstimatorKind::Gph => "gph",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "variance" => Ok(EstimatorKind::Variance),
            "gph" => Ok(EstimatorKind::Gph),
            other => Err(HarnessError::Config(format!("unknown estimator {other:?}"))),
        }
    }
}

/// Confusion counts with LRD as the positive class, plus failed evaluations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub skips: u64,
}

impl Confusion {
    pub fn record(&mut self, truth: Label, predicted: Option<Label>) {
        match (truth, predicted) {
            (_, None) => self.skips += 1,
            (Label::Lrd, Some(Label::Lrd)) => self.tp += 1,
            (Label::Lrd, Some(Label::NonLrd)) => self.fn_ += 1,
            (Label::NonLrd, Some(Label::Lrd)) => self.fp += 1,
            (Label::NonLrd, Some(Label::NonLrd)) => self.tn += 1,
        }
    }

    /// Classified series (skips excluded).
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> Option<f64> {
        ratio(self.tp + self.tn, self.total())
    }

    pub fn sensitivity(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn specificity(&self) -> Option<f64> {
        ratio(self.tn, self.tn + self.fp)
    }
}

impl AddAssign for Confusion {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.fp += rhs.fp;
        self.tn += rhs.tn;
        self.fn_ += rhs.fn_;
        self.skips += rhs.skips;
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Metrics for one (estimator, cutoff pair, series length).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub estimator: EstimatorKind,
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub counts: Confusion,
}

impl MetricsReport {
    pub fn accuracy(&self) -> Option<f64> {
        self.counts.accuracy()
    }

    pub fn sensitivity(&self) -> Option<f64> {
        self.counts.sensitivity()
    }

    pub fn specificity(&self) -> Option<f64> {
        self.counts.specificity()
    }
}

// Missing metrics rank below any value.
fn desc(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Ranking order: accuracy descending, then sensitivity descending, then
/// narrower window `n2 − n1`, then smaller `n1`.
pub fn ranking_order(a: &MetricsReport, b: &MetricsReport) -> Ordering {
    desc(a.accuracy(), b.accuracy())
        .then_with(|| desc(a.sensitivity(), b.sensitivity()))
        .then_with(|| (a.n2 - a.n1).cmp(&(b.n2 - b.n1)))
        .then_with(|| a.n1.cmp(&b.n1))
}

/// Top `k` reports under [`ranking_order`]; all of them when fewer exist.
pub fn rank_cutoffs(reports: &[MetricsReport], k: usize) -> Vec<MetricsReport> {
    let mut sorted = reports.to_vec();
    sorted.sort_by(ranking_order);
    sorted.truncate(k);
    sorted
}
