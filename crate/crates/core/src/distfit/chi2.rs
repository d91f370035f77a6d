use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{check_finite, make_histogram, r2_score, Binning, Histogram};

/// Density of the sum of four squared `N(0, sigma^2)` variables:
/// `x / (4 sigma^4) * exp(-x / (2 sigma^2))`.
pub fn chi2_4df_pdf(x: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !(x >= 0.0) {
        return Err(Error::invalid(format!(
            "chi2 density needs x >= 0 and sigma > 0, got x={x}, sigma={sigma}"
        )));
    }
    Ok(pdf(x, sigma))
}

fn pdf(x: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    x / (4.0 * s2 * s2) * (-x / (2.0 * s2)).exp()
}

/// Closed-form distribution function `1 - exp(-u) (1 + u)`, `u = x / (2 sigma^2)`.
pub fn chi2_4df_cdf(x: f64, sigma: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let u = x / (2.0 * sigma * sigma);
    // -expm1(-u) - u exp(-u) keeps precision for small u
    -(-u).exp_m1() - u * (-u).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chi2Fit {
    pub sigma: f64,
    pub r2: f64,
    pub n_samples: usize,
}

impl Chi2Fit {
    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            pdf(x, self.sigma)
        }
    }

    /// Fitted density at the histogram's bin centers.
    pub fn curve(&self, hist: &Histogram) -> Vec<f64> {
        hist.centers().iter().map(|&c| self.density(c)).collect()
    }
}

/// Scale fit `sigma = sqrt(mean(x) / 4)`, scored by R^2 of the histogram
/// densities against the fitted density at the bin centers.
///
/// Also returns the histogram the score was computed on.
pub fn fit_chi2(samples: &[f64], binning: Binning) -> Result<(Chi2Fit, Histogram)> {
    if samples.len() < 100 {
        return Err(Error::invalid(format!(
            "chi2 fit needs at least 100 samples, got {}",
            samples.len()
        )));
    }
    check_finite(samples)?;
    if samples.iter().any(|&x| x < 0.0) {
        return Err(Error::invalid("chi2 fit needs nonnegative samples"));
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    if mean <= 0.0 {
        return Err(Error::degenerate("chi2 fit of an all-zero sample"));
    }
    let sigma = (mean / 4.0).sqrt();
    let hist = make_histogram(samples, binning)?;
    let predicted: Vec<f64> = hist.centers().iter().map(|&c| pdf(c, sigma)).collect();
    let r2 = r2_score(&hist.density, &predicted)?;
    Ok((
        Chi2Fit {
            sigma,
            r2,
            n_samples: samples.len(),
        },
        hist,
    ))
}
