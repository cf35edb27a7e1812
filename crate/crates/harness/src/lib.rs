//! Monte Carlo harness for the long-range dependence classifiers: study
//! configuration, parallel replication, confusion metrics and result files.

pub mod cli;
pub mod config;
pub mod error;
pub mod metrics;
pub mod output;
pub mod study;

pub use config::{default_hurst_grid, ground_truth_label, CutoffGrid, Scenario, StudyConfig};
pub use error::{HarnessError, Result};
pub use metrics::{rank_cutoffs, Confusion, EstimatorKind, MetricsReport};
pub use study::{run_study, StudyOutcome};
