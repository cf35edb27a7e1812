//! Series container, compensated summation and single-column CSV I/O.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LrdError, Result};

/// Kahan–Babuška (Neumaier) compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn kahan_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<KahanSum>().value()
}

/// Generation record attached to simulated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(model: impl Into<String>) -> Self {
        Self {
            model: model.into(),
            params: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// A finite, non-empty, real-valued sample path `x(1), ..., x(n)`.
///
/// Values are validated on construction: NaN and infinities are rejected
/// rather than propagated into estimator output.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    provenance: Option<Provenance>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(LrdError::EmptySeries);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(LrdError::NonFiniteValue { index, value });
        }
        Ok(Self {
            values,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Applies `f` pointwise, re-validating finiteness. Provenance is dropped.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Reads a single-column CSV; a header row `value` is optional.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut values = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let field = record.get(0).unwrap_or("");
            if row == 0 && field.eq_ignore_ascii_case("value") {
                continue;
            }
            if field.is_empty() {
                continue;
            }
            let v: f64 = field.parse().map_err(|_| {
                LrdError::InvalidParameter(format!("row {}: cannot parse {field:?}", row + 1))
            })?;
            values.push(v);
        }
        Self::new(values)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["value"])?;
        for v in &self.values {
            wtr.write_record([format!("{v:e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(File::open(path)?)
    }

    /// Writes `path` as CSV and, when provenance is present, a JSON sidecar
    /// next to it (`<path>.json`).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.write_csv(File::create(path)?)?;
        if let Some(p) = &self.provenance {
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".json");
            let f = File::create(sidecar)?;
            serde_json::to_writer_pretty(f, p)?;
        }
        Ok(())
    }
}

/// Arithmetic mean `(1/n) Σ x_k`, compensated.
pub fn sample_mean(x: &TimeSeries) -> f64 {
    kahan_sum(x.values()) / x.len() as f64
}

/// Cumulative sums: turns fractional Gaussian noise into fractional Brownian
/// motion sampled at integer times.
pub fn fbm_from_fgn(noise: &TimeSeries) -> TimeSeries {
    let mut acc = 0.0;
    let values = noise
        .values()
        .iter()
        .map(|&v| {
            acc += v;
            acc
        })
        .collect();
    TimeSeries {
        values,
        provenance: None,
    }
}

/// First differences with `x(0) = 0`; inverse of [`fbm_from_fgn`].
pub fn difference(path: &TimeSeries) -> TimeSeries {
    let v = path.values();
    let values = std::iter::once(v[0])
        .chain(v.windows(2).map(|w| w[1] - w[0]))
        .collect();
    TimeSeries {
        values,
        provenance: None,
    }
}
