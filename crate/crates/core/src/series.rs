use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What the samples of an [`XtSeries`] measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// Linear power ratio, always `>= 0`.
    LinearPower,
    /// Power level in decibels (`10 log10`).
    #[serde(rename = "dB")]
    Db,
    /// Differences of consecutive dB levels.
    #[serde(rename = "dB-step")]
    DbStep,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::LinearPower => "linear-power",
            Domain::Db => "dB",
            Domain::DbStep => "dB-step",
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear-power" | "linear" => Ok(Domain::LinearPower),
            "dB" | "db" => Ok(Domain::Db),
            "dB-step" | "db-step" | "step" => Ok(Domain::DbStep),
            other => Err(Error::invalid(format!("unknown domain tag `{other}`"))),
        }
    }
}

/// A uniformly sampled crosstalk time series.
#[derive(Debug, Clone, PartialEq)]
pub struct XtSeries {
    dt: f64,
    values: Vec<f64>,
    domain: Domain,
    /// Free-form source label (e.g. the modulation format).
    pub label: Option<String>,
    /// Number of samples clamped to the power floor by [`crate::steps::to_db`].
    pub floored: usize,
}

impl XtSeries {
    pub fn new(dt: f64, values: Vec<f64>, domain: Domain) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("sampling interval must be > 0, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::invalid("series must hold at least one sample"));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!("sample {i} is not finite ({v})")));
        }
        if domain == Domain::LinearPower {
            if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
                return Err(Error::invalid(format!(
                    "linear-power sample {i} is negative ({v})"
                )));
            }
        }
        Ok(Self {
            dt,
            values,
            domain,
            label: None,
            floored: 0,
        })
    }

    /// Builds a series from values already known to satisfy the invariants.
    pub(crate) fn from_parts(dt: f64, values: Vec<f64>, domain: Domain) -> Self {
        debug_assert!(dt > 0.0 && !values.is_empty());
        Self {
            dt,
            values,
            domain,
            label: None,
            floored: 0,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("sampling interval must be > 0, got {dt}")));
        }
        self.dt = dt;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total time spanned by the samples, `len * dt`.
    pub fn duration(&self) -> f64 {
        self.values.len() as f64 * self.dt
    }

    /// Contiguous sub-series `[start, start + len)`.
    pub fn window(&self, start: usize, len: usize) -> Result<Self> {
        if len == 0 || start + len > self.values.len() {
            return Err(Error::invalid(format!(
                "window [{start}, {}) outside series of length {}",
                start + len,
                self.values.len()
            )));
        }
        let mut out = Self::from_parts(self.dt, self.values[start..start + len].to_vec(), self.domain);
        out.label = self.label.clone();
        Ok(out)
    }
}

/// Complex field amplitude samples of one polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    pub dt: f64,
    pub values: Vec<Complex64>,
}
