//! Study configuration: scenarios, Hurst grids, cutoff grids.

use std::fmt;
use std::str::FromStr;

use lrd_core::{GphConfig, Label};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Replications per Hurst value in a full-scale study.
pub const FULL_SCALE_REPLICATIONS: usize = 1000;

/// Series lengths studied when none are configured.
pub const DEFAULT_LENGTHS: [usize; 4] = [50, 100, 200, 500];

/// Default study scale (100 replications per Hurst value).
pub const DEFAULT_SCALE: f64 = 0.1;

/// Default number of quantile levels in the excursion-set measure.
pub const DEFAULT_PSI: usize = 100;

/// Variance-plot block lengths beyond this are left out of default grids.
pub const DEFAULT_MAX_BLOCK_LENGTH: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "fgn")]
    Fgn,
    #[serde(rename = "subordinated-fgn")]
    SubordinatedFgn,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fgn => "fgn",
            Scenario::SubordinatedFgn => "subordinated-fgn",
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            Scenario::Fgn => 1,
            Scenario::SubordinatedFgn => 2,
        }
    }

    /// Hurst index separating the two classes.
    pub fn threshold(self) -> f64 {
        match self {
            Scenario::Fgn => 0.5,
            Scenario::SubordinatedFgn => 0.75,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fgn" => Ok(Scenario::Fgn),
            "subordinated-fgn" | "subordinated" => Ok(Scenario::SubordinatedFgn),
            other => Err(HarnessError::Config(format!("unknown scenario {other:?}"))),
        }
    }
}

/// True class of a simulated path.
///
/// fGN has long memory iff `H > 1/2`; the subordinated process
/// `exp(Y²/2α)` is long-range dependent in the excursion-set sense iff
/// `H ≥ 3/4`.
pub fn ground_truth_label(scenario: Scenario, hurst: f64) -> Label {
    match scenario {
        Scenario::Fgn => Label::from_positive(hurst > 0.5),
        Scenario::SubordinatedFgn => Label::from_positive(hurst >= 0.75),
    }
}

/// Twelve equidistant Hurst values placed symmetrically around the class
/// threshold: `0.3..=0.7` for fGN, `0.6..=0.9` for the subordinated process.
pub fn default_hurst_grid(scenario: Scenario) -> Vec<f64> {
    let (lo, hi) = match scenario {
        Scenario::Fgn => (0.3, 0.7),
        Scenario::SubordinatedFgn => (0.6, 0.9),
    };
    (0..12).map(|i| lo + (hi - lo) * i as f64 / 11.0).collect()
}

/// All `1 ≤ n1 < n2 ≤ min(60, n)`.
pub fn default_variance_grid(n: usize) -> Vec<(usize, usize)> {
    let top = n.min(DEFAULT_MAX_BLOCK_LENGTH);
    (1..top)
        .flat_map(|n1| (n1 + 1..=top).map(move |n2| (n1, n2)))
        .collect()
}

/// Stride used by the default GPH grid, `⌈n/100⌉`.
pub fn default_gph_stride(n: usize) -> usize {
    n.div_ceil(100).max(1)
}

/// `l ∈ {1, 1+s, 1+2s, ...}`, `w ∈ {l+1, l+1+s, ...}` up to `n − 1`.
pub fn default_gph_grid(n: usize, stride: usize) -> Vec<(usize, usize)> {
    let stride = stride.max(1);
    (1..n.saturating_sub(1))
        .step_by(stride)
        .flat_map(|l| (l + 1..n).step_by(stride).map(move |w| (l, w)))
        .collect()
}

/// A cutoff grid: explicit pairs or the default grid for each length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutoffGrid {
    Pairs(Vec<(usize, usize)>),
    Default(DefaultGrid),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefaultGrid {
    Default,
}

impl Default for CutoffGrid {
    fn default() -> Self {
        CutoffGrid::Default(DefaultGrid::Default)
    }
}

impl CutoffGrid {
    pub fn pairs(pairs: Vec<(usize, usize)>) -> Self {
        CutoffGrid::Pairs(pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub scenario: Scenario,
    pub lengths: Vec<usize>,
    pub hurst_grid: Vec<f64>,
    pub replications: usize,
    pub master_seed: u64,
    pub variance_grid: CutoffGrid,
    pub gph_grid: CutoffGrid,
    /// Quantile levels in the excursion-set measure (subordinated scenario).
    pub psi: usize,
    pub level_seed: u64,
    pub alpha: f64,
}

impl StudyConfig {
    /// Defaults for a scenario at the given scale and seed.
    pub fn new(
        scenario: Scenario,
        lengths: Vec<usize>,
        replications: usize,
        master_seed: u64,
    ) -> Self {
        Self {
            scenario,
            lengths,
            hurst_grid: default_hurst_grid(scenario),
            replications,
            master_seed,
            variance_grid: CutoffGrid::default(),
            gph_grid: CutoffGrid::default(),
            psi: DEFAULT_PSI,
            level_seed: master_seed ^ 0x5EED_1E7E_15EE_D000,
            alpha: 1.0,
        }
    }

    pub fn variance_pairs(&self, n: usize) -> Vec<(usize, usize)> {
        match &self.variance_grid {
            CutoffGrid::Pairs(p) => p.clone(),
            CutoffGrid::Default(_) => default_variance_grid(n),
        }
    }

    pub fn gph_pairs(&self, n: usize) -> Vec<(usize, usize)> {
        match &self.gph_grid {
            CutoffGrid::Pairs(p) => p.clone(),
            CutoffGrid::Default(_) => default_gph_grid(n, default_gph_stride(n)),
        }
    }

    pub fn total_series_per_length(&self) -> usize {
        self.replications * self.hurst_grid.len()
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(HarnessError::Config(m));
        if self.lengths.is_empty() {
            return err("no series lengths".into());
        }
        if self.hurst_grid.is_empty() {
            return err("empty Hurst grid".into());
        }
        if let Some(h) = self.hurst_grid.iter().find(|h| !(**h > 0.0 && **h < 1.0)) {
            return err(format!("Hurst value {h} outside (0, 1)"));
        }
        if self.replications == 0 {
            return err("replications must be positive".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return err(format!("alpha {} must be positive", self.alpha));
        }
        if self.scenario == Scenario::SubordinatedFgn && self.psi == 0 {
            return err("psi must be positive".into());
        }
        for &n in &self.lengths {
            if n < 4 {
                return err(format!("series length {n} too short"));
            }
            let var = self.variance_pairs(n);
            let gph = self.gph_pairs(n);
            if var.is_empty() && gph.is_empty() {
                return err(format!("both cutoff grids are empty for n = {n}"));
            }
            for &(n1, n2) in &var {
                if !(n1 >= 1 && n1 < n2 && n2 <= n) {
                    return err(format!("variance window ({n1}, {n2}) invalid for n = {n}"));
                }
            }
            for &(l, w) in &gph {
                GphConfig::new(l, w).validate(n).map_err(|e| {
                    HarnessError::Config(format!("GPH window ({l}, {w}) invalid for n = {n}: {e}"))
                })?;
            }
        }
        Ok(())
    }
}
