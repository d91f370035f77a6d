//! Empirical distributions and model fitting.
//!
//! Everything here works on plain `f64` slices: histograms, the four-degree
//! chi-squared intensity law, the pseudo-Voigt step profile, goodness-of-fit
//! scores and sample moments.

mod chi2;
mod convergence;
mod histogram;
mod ks;
mod moments;
mod pvp;
pub mod simplex;

pub use chi2::{chi2_4df_cdf, chi2_4df_pdf, fit_chi2, Chi2Fit};
pub use convergence::phase_uniformity_check;
pub use histogram::{make_histogram, Binning, Histogram};
pub use ks::{ks_statistic, ks_two_sample};
pub use moments::{mean_variance, moments, Moments};
pub use pvp::{fit_pvp, fit_pvp_histogram, pvp, step_histogram, PvpFit};

use crate::error::{Error, Result};

/// Coefficient of determination `1 - SS_res / SS_tot`.
///
/// Unbounded below: a prediction worse than the mean of `observed` scores
/// negative.
pub fn r2_score(observed: &[f64], predicted: &[f64]) -> Result<f64> {
    if observed.len() != predicted.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} observed vs {} predicted",
            observed.len(),
            predicted.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::invalid("r2 needs at least 2 points"));
    }
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    let ss_tot: f64 = observed.iter().map(|o| (o - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(Error::degenerate("observed values have zero variance"));
    }
    let ss_res: f64 = observed
        .iter()
        .zip(predicted)
        .map(|(o, p)| (o - p).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Linear-interpolation quantile of already sorted data (`numpy` default).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Same as [`quantile_sorted`] on unsorted data, in expected linear time.
pub(crate) fn quantile_select(data: &mut [f64], p: f64) -> f64 {
    assert!(!data.is_empty());
    let h = (data.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let (_, &mut at_lo, right) = data.select_nth_unstable_by(lo, f64::total_cmp);
    let frac = h - lo as f64;
    if frac == 0.0 || right.is_empty() {
        return at_lo;
    }
    let next = right.iter().cloned().fold(f64::INFINITY, f64::min);
    at_lo + frac * (next - at_lo)
}

pub(crate) fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::invalid(format!("sample {i} is not finite"))),
        None => Ok(()),
    }
}
