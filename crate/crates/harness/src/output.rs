//! Study result files: one metrics CSV per (scenario, length) plus a JSON
//! manifest holding the resolved configuration.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{Scenario, StudyConfig};
use crate::error::{HarnessError, Result};
use crate::metrics::{Confusion, EstimatorKind, MetricsReport};
use crate::study::StudyOutcome;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    estimator: EstimatorKind,
    n1: usize,
    n2: usize,
    tp: u64,
    fp: u64,
    tn: u64,
    #[serde(rename = "fn")]
    fn_: u64,
    skips: u64,
    accuracy: String,
    sensitivity: String,
    specificity: String,
}

fn fmt_metric(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |v| format!("{v:.6}"))
}

pub fn metrics_file_name(scenario: Scenario, n: usize) -> String {
    format!("{scenario}_n{n}.csv")
}

/// Writes metrics for one length as CSV.
pub fn write_metrics<'a, W: Write>(
    writer: W,
    reports: impl IntoIterator<Item = &'a MetricsReport>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in reports {
        let c = r.counts;
        w.serialize(Row {
            estimator: r.estimator,
            n1: r.n1,
            n2: r.n2,
            tp: c.tp,
            fp: c.fp,
            tn: c.tn,
            fn_: c.fn_,
            skips: c.skips,
            accuracy: fmt_metric(r.accuracy()),
            sensitivity: fmt_metric(r.sensitivity()),
            specificity: fmt_metric(r.specificity()),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a metrics CSV written by [`write_metrics`]. Metric columns are
/// recomputed from the counts.
pub fn read_metrics(path: &Path, n: usize) -> Result<Vec<MetricsReport>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize::<Row>()
        .map(|row| {
            let row = row?;
            Ok(MetricsReport {
                estimator: row.estimator,
                n,
                n1: row.n1,
                n2: row.n2,
                counts: Confusion {
                    tp: row.tp,
                    fp: row.fp,
                    tn: row.tn,
                    fn_: row.fn_,
                    skips: row.skips,
                },
            })
        })
        .collect()
}

/// Writes every metrics file and the manifest into `dir`, returning the
/// paths written.
pub fn write_study(outcome: &StudyOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let cfg = &outcome.config;
    let mut written = Vec::new();
    for &n in &cfg.lengths {
        let path = dir.join(metrics_file_name(cfg.scenario, n));
        write_metrics(BufWriter::new(File::create(&path)?), outcome.for_length(n))?;
        written.push(path);
    }
    let path = dir.join(MANIFEST_FILE);
    let mut f = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut f, cfg)?;
    writeln!(f)?;
    f.flush()?;
    written.push(path);
    Ok(written)
}

/// Loads a study directory back: the manifest and all metrics files it names.
pub fn read_study(dir: &Path) -> Result<StudyOutcome> {
    let manifest = dir.join(MANIFEST_FILE);
    let file = File::open(&manifest)
        .map_err(|e| HarnessError::Config(format!("cannot open {}: {e}", manifest.display())))?;
    let config: StudyConfig = serde_json::from_reader(file)?;
    let mut reports = Vec::new();
    for &n in &config.lengths {
        reports.extend(read_metrics(
            &dir.join(metrics_file_name(config.scenario, n)),
            n,
        )?);
    }
    Ok(StudyOutcome { config, reports })
}
