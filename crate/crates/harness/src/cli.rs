//! Command-line verbs.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lrd_core::variance::slope_to_memory;
use lrd_core::{
    classify_lrd_gph, classify_lrd_variance, gph_estimate, resolve_quantiles, simulate_fgn,
    subordinate, transform_series, variance_plot_slope, FgnParams, GphConfig, QuantileMeasure,
    SubordinationParams, TimeSeries, VariancePlotConfig,
};
use serde::Deserialize;

use crate::config::{
    default_hurst_grid, CutoffGrid, Scenario, StudyConfig, DEFAULT_LENGTHS, DEFAULT_PSI,
    DEFAULT_SCALE, FULL_SCALE_REPLICATIONS,
};
use crate::error::{HarnessError, Result};
use crate::metrics::{rank_cutoffs, EstimatorKind, MetricsReport};
use crate::output::{read_study, write_study};
use crate::study::run_study;

#[derive(Debug, Parser)]
#[command(
    name = "lrd",
    version,
    about = "Long-range dependence detection: simulation, estimation and Monte Carlo studies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate fGN or subordinated fGN paths and write them as CSV.
    Simulate(SimulateArgs),
    /// Run one estimator on a single-column CSV series.
    Estimate(EstimateArgs),
    /// Run the Monte Carlo classification study.
    Study(StudyArgs),
    /// Print the top cutoffs from a study output directory.
    Rank(RankArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value = "fgn")]
    pub scenario: Scenario,
    #[arg(long)]
    pub hurst: f64,
    #[arg(short, long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Number of paths; path i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Single-column CSV, optionally headed `value`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub estimator: EstimatorKind,
    /// Variance-plot window `n1,n2`.
    #[arg(long, value_parser = parse_pair, conflicts_with_all = ["delta", "m"])]
    pub window: Option<(usize, usize)>,
    /// Variance-plot window exponent: n1 = ⌊n^δ⌋, n2 = ⌈m n^δ⌉.
    #[arg(long, requires = "m")]
    pub delta: Option<f64>,
    #[arg(long, requires = "delta")]
    pub m: Option<f64>,
    /// GPH frequencies `l..=w`.
    #[arg(long, value_parser = parse_pair, conflicts_with = "bandwidth_exponent")]
    pub frequencies: Option<(usize, usize)>,
    /// GPH bandwidth w = ⌊n^e⌋ with l = 1.
    #[arg(long)]
    pub bandwidth_exponent: Option<f64>,
    /// Apply the excursion-set transform with `psi` random quantile levels first.
    #[arg(long)]
    pub ie: bool,
    #[arg(long, default_value_t = DEFAULT_PSI)]
    pub psi: usize,
    #[arg(long, default_value_t = 0)]
    pub level_seed: u64,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// JSON file with any StudyConfig keys plus `workers`, `scale`, `out_dir`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenario: Option<Scenario>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fraction of the full 1000 replications per Hurst value.
    #[arg(long, conflicts_with = "full_scale")]
    pub scale: Option<f64>,
    #[arg(long)]
    pub full_scale: bool,
    #[arg(long, value_delimiter = ',')]
    pub lengths: Option<Vec<usize>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Rows printed per (estimator, length) after the run.
    #[arg(long, default_value_t = 5)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Directory written by `lrd study`.
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(short, long, default_value_t = 5)]
    pub k: usize,
    #[arg(long)]
    pub estimator: Option<EstimatorKind>,
    #[arg(short, long)]
    pub n: Option<usize>,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Estimate(a) => estimate(a),
        Command::Study(a) => study(a),
        Command::Rank(a) => rank(a),
    }
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let params = FgnParams::new(a.hurst, a.sigma2, a.n)?;
    let sub = SubordinationParams::new(a.alpha)?;
    fs::create_dir_all(&a.out_dir)?;
    for i in 0..a.count {
        let seed = a.seed.wrapping_add(i as u64);
        let mut x = simulate_fgn(&params, seed)?;
        if a.scenario == Scenario::SubordinatedFgn {
            x = subordinate(&x, &sub)?;
        }
        let path = a.out_dir.join(format!(
            "{}_H{}_n{}_seed{seed}.csv",
            a.scenario, a.hurst, a.n
        ));
        x.save(&path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn estimate(a: EstimateArgs) -> Result<()> {
    let mut x = TimeSeries::load(&a.input)?;
    if a.ie {
        let levels = QuantileMeasure::random(a.psi, a.level_seed)?;
        x = transform_series(&x, &resolve_quantiles(&x, &levels));
    }
    let n = x.len();
    match a.estimator {
        EstimatorKind::Variance => {
            let cfg = match (a.window, a.delta, a.m) {
                (Some((n1, n2)), _, _) => VariancePlotConfig::window(n1, n2),
                (None, Some(delta), Some(m)) => VariancePlotConfig::exponent(delta, m)?,
                _ => {
                    return Err(HarnessError::Config(
                        "variance estimator needs --window or --delta/--m".into(),
                    ))
                }
            };
            let (n1, n2) = cfg.resolve(n)?;
            let fit = variance_plot_slope(&x, &cfg)?;
            println!(
                "variance n={n} n1={n1} n2={n2} slope={:.6} d={:.6} label={}",
                fit.slope,
                slope_to_memory(fit.slope),
                classify_lrd_variance(&fit)
            );
        }
        EstimatorKind::Gph => {
            let cfg = match (a.frequencies, a.bandwidth_exponent) {
                (Some((l, w)), _) => GphConfig::new(l, w),
                (None, Some(e)) => GphConfig::power_bandwidth(n, e),
                _ => {
                    return Err(HarnessError::Config(
                        "GPH estimator needs --frequencies or --bandwidth-exponent".into(),
                    ))
                }
            };
            let fit = gph_estimate(&x, &cfg)?;
            println!(
                "gph n={n} l={} w={} d={:.6} label={}",
                cfg.trim,
                cfg.bandwidth,
                fit.slope,
                classify_lrd_gph(&fit)
            );
        }
    }
    Ok(())
}

/// Contents of a `--config` file. Every key is optional; flags override.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyFile {
    pub scenario: Option<Scenario>,
    #[serde(alias = "seed")]
    pub master_seed: Option<u64>,
    pub scale: Option<f64>,
    pub replications: Option<usize>,
    pub lengths: Option<Vec<usize>>,
    pub hurst_grid: Option<Vec<f64>>,
    pub variance_grid: Option<CutoffGrid>,
    pub gph_grid: Option<CutoffGrid>,
    pub psi: Option<usize>,
    pub level_seed: Option<u64>,
    pub alpha: Option<f64>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

/// A fully resolved `study` invocation.
#[derive(Debug)]
pub struct StudyPlan {
    pub config: StudyConfig,
    pub workers: usize,
    pub out_dir: PathBuf,
}

fn missing(what: &str) -> HarnessError {
    HarnessError::Config(format!("{what} must be given as a flag or config key"))
}

fn replications_for_scale(scale: f64) -> Result<usize> {
    let reps = (FULL_SCALE_REPLICATIONS as f64 * scale).round();
    if !(scale > 0.0 && reps >= 1.0) {
        return Err(HarnessError::Config(format!(
            "scale {scale} gives no replications"
        )));
    }
    Ok(reps as usize)
}

/// Merges flags over the config file over defaults and validates.
pub fn resolve_study(a: &StudyArgs) -> Result<StudyPlan> {
    let file = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str::<StudyFile>(&text)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", p.display())))?
        }
        None => StudyFile::default(),
    };
    let scenario = a
        .scenario
        .or(file.scenario)
        .ok_or_else(|| missing("scenario"))?;
    let seed = a.seed.or(file.master_seed).ok_or_else(|| missing("seed"))?;
    let workers = a
        .workers
        .or(file.workers)
        .ok_or_else(|| missing("workers"))?;
    if workers == 0 {
        return Err(HarnessError::Config("workers must be positive".into()));
    }
    let out_dir = a
        .out_dir
        .clone()
        .or(file.out_dir)
        .ok_or_else(|| missing("out-dir"))?;

    let replications = if a.full_scale {
        FULL_SCALE_REPLICATIONS
    } else if let Some(s) = a.scale {
        replications_for_scale(s)?
    } else if let Some(r) = file.replications {
        r
    } else {
        replications_for_scale(file.scale.unwrap_or(DEFAULT_SCALE))?
    };
    let lengths = a
        .lengths
        .clone()
        .or(file.lengths)
        .unwrap_or_else(|| DEFAULT_LENGTHS.to_vec());

    let mut cfg = StudyConfig::new(scenario, lengths, replications, seed);
    cfg.hurst_grid = file
        .hurst_grid
        .unwrap_or_else(|| default_hurst_grid(scenario));
    if let Some(g) = file.variance_grid {
        cfg.variance_grid = g;
    }
    if let Some(g) = file.gph_grid {
        cfg.gph_grid = g;
    }
    if let Some(psi) = file.psi {
        cfg.psi = psi;
    }
    if let Some(s) = file.level_seed {
        cfg.level_seed = s;
    }
    if let Some(alpha) = a.alpha.or(file.alpha) {
        cfg.alpha = alpha;
    }
    cfg.validate()?;
    Ok(StudyPlan {
        config: cfg,
        workers,
        out_dir,
    })
}

fn study(a: StudyArgs) -> Result<()> {
    let plan = resolve_study(&a)?;
    let outcome = run_study(&plan.config, plan.workers)?;
    for path in write_study(&outcome, &plan.out_dir)? {
        log::info!("wrote {}", path.display());
    }
    print_rankings(&outcome.reports, a.top, None, None);
    Ok(())
}

fn rank(a: RankArgs) -> Result<()> {
    let outcome = read_study(&a.dir)?;
    if outcome.reports.is_empty() {
        return Err(HarnessError::Config(format!(
            "no metrics rows in {}",
            a.dir.display()
        )));
    }
    print_rankings(&outcome.reports, a.k, a.estimator, a.n);
    Ok(())
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| format!("{:.2}%", 100.0 * v))
}

/// Prints a top-`k` table for each (estimator, length) present.
pub fn print_rankings(
    reports: &[MetricsReport],
    k: usize,
    estimator: Option<EstimatorKind>,
    n: Option<usize>,
) {
    let mut groups: Vec<(EstimatorKind, usize)> =
        reports.iter().map(|r| (r.estimator, r.n)).collect();
    groups.sort();
    groups.dedup();
    for (est, len) in groups {
        if estimator.is_some_and(|e| e != est) || n.is_some_and(|m| m != len) {
            continue;
        }
        let rows: Vec<MetricsReport> = reports
            .iter()
            .filter(|r| r.estimator == est && r.n == len)
            .cloned()
            .collect();
        let (lo, hi) = if est == EstimatorKind::Variance {
            ("n1", "n2")
        } else {
            ("l", "w")
        };
        println!("{est}, n = {len}");
        println!(
            "{:>4} {lo:>5} {hi:>5} {:>9} {:>11} {:>11} {:>6}",
            "rank", "accuracy", "sensitivity", "specificity", "skips"
        );
        for (i, r) in rank_cutoffs(&rows, k).iter().enumerate() {
            println!(
                "{:>4} {:>5} {:>5} {:>9} {:>11} {:>11} {:>6}",
                i + 1,
                r.n1,
                r.n2,
                pct(r.accuracy()),
                pct(r.sensitivity()),
                pct(r.specificity()),
                r.counts.skips
            );
        }
        println!();
    }
}
