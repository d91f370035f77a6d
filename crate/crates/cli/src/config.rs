//! Experiment description for `xtwalk classify`.
//!
//! ```json
//! {
//!   "windows": [{ "file": "a1.csv", "label": "16QAM" }],
//!   "resample_factor": 10
//! }
//! ```
//!
//! or, instead of `windows`, a `synthetic` block generating random-walk windows
//! per class. Relative file paths resolve against the config's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use xtwalk::simulate::ModelParams;
use xtwalk::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    #[serde(default)]
    pub windows: Vec<WindowEntry>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSpec>,
    /// Averaging factor applied to every window before feature extraction.
    #[serde(default)]
    pub resample_factor: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowEntry {
    pub file: PathBuf,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub classes: Vec<SyntheticClass>,
    pub windows_per_class: usize,
    pub window_samples: usize,
    #[serde(default = "default_n_pm")]
    pub n_pm: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_chi")]
    pub chi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticClass {
    pub label: String,
    pub sigma_gamma: f64,
    #[serde(default)]
    pub mu_gamma: f64,
}

fn default_n_pm() -> usize {
    16
}

fn default_dt() -> f64 {
    0.1
}

fn default_chi() -> f64 {
    1.0
}

impl ClassifyConfig {
    /// Checks everything that can be checked without reading window files.
    pub fn validate(&self) -> Result<()> {
        match (&self.synthetic, self.windows.is_empty()) {
            (Some(_), false) => {
                return Err(Error::InvalidArgument(
                    "config holds both `windows` and `synthetic`".into(),
                ))
            }
            (None, true) => {
                return Err(Error::InvalidArgument(
                    "config needs a `windows` list or a `synthetic` block".into(),
                ))
            }
            _ => {}
        }
        if self.resample_factor == Some(0) {
            return Err(Error::InvalidArgument("resample_factor must be >= 1".into()));
        }
        if let Some(s) = &self.synthetic {
            if s.classes.len() < 2 {
                return Err(Error::InvalidArgument("synthetic config needs at least 2 classes".into()));
            }
            if s.windows_per_class < xtwalk::classify::MIN_PER_CLASS {
                return Err(Error::InvalidArgument(format!(
                    "windows_per_class must be >= {}",
                    xtwalk::classify::MIN_PER_CLASS
                )));
            }
            if s.window_samples < 2 {
                return Err(Error::InvalidArgument("window_samples must be >= 2".into()));
            }
            if !(s.dt > 0.0 && s.dt.is_finite()) {
                return Err(Error::InvalidArgument(format!("dt must be > 0, got {}", s.dt)));
            }
            let factor = self.resample_factor.unwrap_or(1);
            if s.window_samples / factor < 2 {
                return Err(Error::InvalidArgument(
                    "resample_factor leaves fewer than 2 samples per window".into(),
                ));
            }
            for class in &s.classes {
                ModelParams::new(s.n_pm, s.chi, 0)?
                    .with_sigma_gamma(class.sigma_gamma)
                    .with_mu_gamma(class.mu_gamma)
                    .validate()?;
            }
        }
        Ok(())
    }

    pub fn resolve(&mut self, base: &Path) {
        for w in &mut self.windows {
            if w.file.is_relative() {
                w.file = base.join(&w.file);
            }
        }
    }
}
