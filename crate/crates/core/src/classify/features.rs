use serde::{Deserialize, Serialize};

use crate::distfit::{fit_pvp, moments, Binning};
use crate::error::{Error, Result};
use crate::series::{Domain, XtSeries};
use crate::steps::{step_sequence, to_db, DEFAULT_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    /// Mean, variance, skewness, excess kurtosis of the dB steps.
    Moments,
    /// Fitted pseudo-Voigt `(mu, sigma, alpha)` of the dB steps.
    Pvp,
    /// Moments followed by the pseudo-Voigt coefficients.
    Both,
}

impl FeatureMode {
    pub fn len(self) -> usize {
        match self {
            FeatureMode::Moments => 4,
            FeatureMode::Pvp => 3,
            FeatureMode::Both => 7,
        }
    }

    /// Columns of the `Both` vector that make up this mode.
    pub fn columns(self) -> &'static [usize] {
        match self {
            FeatureMode::Moments => &[0, 1, 2, 3],
            FeatureMode::Pvp => &[4, 5, 6],
            FeatureMode::Both => &[0, 1, 2, 3, 4, 5, 6],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMode::Moments => "moments",
            FeatureMode::Pvp => "pvp",
            FeatureMode::Both => "both",
        }
    }
}

impl std::str::FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moments" => Ok(FeatureMode::Moments),
            "pvp" => Ok(FeatureMode::Pvp),
            "both" => Ok(FeatureMode::Both),
            other => Err(Error::invalid(format!("unknown feature mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub mode: FeatureMode,
}

fn window_steps(window: &XtSeries) -> Result<Vec<f64>> {
    Ok(match window.domain() {
        Domain::LinearPower => step_sequence(&to_db(window, DEFAULT_FLOOR)?)?.steps,
        Domain::Db => step_sequence(window)?.steps,
        Domain::DbStep => window.values().to_vec(),
    })
}

/// Feature vector of one window. Linear windows are converted to dB with the
/// default floor; step series are used as they are.
pub fn build_features(window: &XtSeries, mode: FeatureMode) -> Result<FeatureVector> {
    let steps = window_steps(window)?;
    let mut values = Vec::with_capacity(mode.len());
    if matches!(mode, FeatureMode::Moments | FeatureMode::Both) {
        values.extend(moments(&steps)?.to_array());
    }
    if matches!(mode, FeatureMode::Pvp | FeatureMode::Both) {
        let (fit, _) = fit_pvp(&steps, Binning::default())?;
        values.extend([fit.mu, fit.sigma, fit.alpha]);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::degenerate("window produced non-finite features"));
    }
    Ok(FeatureVector { values, mode })
}
