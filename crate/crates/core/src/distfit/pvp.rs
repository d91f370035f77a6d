//! Pseudo-Voigt profile: a Gaussian and a Cauchy-Lorentz density sharing a
//! location, mixed with weight `alpha` on the Cauchy part.
//!
//! The Cauchy scale is `sigma`; the Gaussian uses `sigma_g = sigma / sqrt(2 ln 2)`
//! so both components have the same half width at half maximum.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::simplex::{self, SimplexOptions};
use super::{check_finite, quantile_select, r2_score, Binning, Histogram};

/// Minimum number of step samples accepted by [`fit_pvp`].
pub const MIN_FIT_SAMPLES: usize = 500;

/// Half-width of the fitting window, in interquartile ranges around the median.
const WINDOW_IQRS: f64 = 5.0;

/// Restarts from the current optimum until the objective stops improving.
const MAX_RESTARTS: usize = 4;

pub(crate) fn gaussian_sigma(sigma: f64) -> f64 {
    sigma / (2.0 * LN_2).sqrt()
}

#[inline]
fn pvp_unchecked(x: f64, mu: f64, sigma: f64, alpha: f64) -> f64 {
    let d = x - mu;
    let sg = gaussian_sigma(sigma);
    (1.0 - alpha) / (sg * (2.0 * PI).sqrt()) * (-d * d / (2.0 * sg * sg)).exp()
        + alpha / PI * (sigma / (d * d + sigma * sigma))
}

/// Pseudo-Voigt density at `x`.
pub fn pvp(x: f64, mu: f64, sigma: f64, alpha: f64) -> Result<f64> {
    if !(sigma > 0.0) || !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "pseudo-Voigt needs sigma > 0 and 0 <= alpha <= 1, got sigma={sigma}, alpha={alpha}"
        )));
    }
    Ok(pvp_unchecked(x, mu, sigma, alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvpFit {
    pub mu: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub r2: f64,
    pub n_samples: usize,
    pub evaluations: usize,
}

impl PvpFit {
    pub fn gaussian_sigma(&self) -> f64 {
        gaussian_sigma(self.sigma)
    }

    pub fn density(&self, x: f64) -> f64 {
        pvp_unchecked(x, self.mu, self.sigma, self.alpha)
    }

    pub fn curve(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.density(x)).collect()
    }
}

/// Folds any real onto `[0, 1]` by reflection at the bounds.
fn reflect_unit(a: f64) -> f64 {
    let r = a.rem_euclid(2.0);
    if r > 1.0 {
        2.0 - r
    } else {
        r
    }
}

/// Histogram used for step fitting.
///
/// Heavy-tailed step samples make a `[min, max]` span useless, so the bins
/// cover `median +- 5 IQR` (clipped to the data range) and keep the
/// normalization by the total sample count: densities estimate the full
/// distribution's density inside the window.
pub fn step_histogram(samples: &[f64], binning: Binning) -> Result<Histogram> {
    check_finite(samples)?;
    if samples.len() < 2 {
        return Err(Error::degenerate("step histogram needs at least 2 samples"));
    }
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(min < max) {
        return Err(Error::degenerate("all steps are identical"));
    }
    let mut scratch = samples.to_vec();
    let median = quantile_select(&mut scratch, 0.5);
    let iqr = quantile_select(&mut scratch, 0.75) - quantile_select(&mut scratch, 0.25);
    let (lo, hi) = if iqr > 0.0 {
        (
            (median - WINDOW_IQRS * iqr).max(min),
            (median + WINDOW_IQRS * iqr).min(max),
        )
    } else {
        (min, max)
    };
    Histogram::with_range(samples, lo, hi, binning)
}

/// Fits the pseudo-Voigt profile to step samples.
///
/// See [`step_histogram`] for the binning and [`fit_pvp_histogram`] for the
/// optimizer.
pub fn fit_pvp(samples: &[f64], binning: Binning) -> Result<(PvpFit, Histogram)> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::invalid(format!(
            "pseudo-Voigt fit needs at least {MIN_FIT_SAMPLES} steps, got {}",
            samples.len()
        )));
    }
    let hist = step_histogram(samples, binning)?;
    let fit = fit_pvp_histogram(&hist)?;
    Ok((fit, hist))
}

/// Least-squares fit of `(mu, sigma, alpha)` to histogram densities at the
/// bin centers.
///
/// Nelder-Mead over raw `(mu, sigma, alpha)`, with `|sigma|` and `alpha`
/// reflected onto `[0, 1]` inside the objective. Starts at the histogram's
/// median, half its interquartile range and `alpha = 0.5`, and restarts from
/// the optimum until the residual stops decreasing.
pub fn fit_pvp_histogram(hist: &Histogram) -> Result<PvpFit> {
    if hist.n_bins() < 4 {
        return Err(Error::degenerate("pseudo-Voigt fit needs at least 4 bins"));
    }
    let centers = hist.centers();
    let observed = &hist.density;
    if observed.iter().all(|&d| d == observed[0]) {
        return Err(Error::degenerate("flat histogram"));
    }

    let objective = |p: &[f64]| -> f64 {
        let sigma = p[1].abs();
        if sigma == 0.0 {
            return f64::INFINITY;
        }
        let alpha = reflect_unit(p[2]);
        centers
            .iter()
            .zip(observed)
            .map(|(&x, &d)| (d - pvp_unchecked(x, p[0], sigma, alpha)).powi(2))
            .sum()
    };

    let median = hist.quantile(0.5);
    let mut scale = 0.5 * (hist.quantile(0.75) - hist.quantile(0.25));
    if !(scale > 0.0) {
        scale = hist.widths()[0];
    }
    let steps = [0.5 * scale, 0.5 * scale, 0.25];
    let opts = SimplexOptions::default();

    let mut x = vec![median, scale, 0.5];
    let mut best = f64::INFINITY;
    let mut evaluations = 0;
    let mut converged = false;
    for _ in 0..=MAX_RESTARTS {
        let budget = opts.max_evaluations.saturating_sub(evaluations);
        if budget == 0 {
            converged = false;
            break;
        }
        let run = simplex::minimize(
            objective,
            &x,
            &steps,
            SimplexOptions {
                max_evaluations: budget,
                ..opts
            },
        );
        evaluations += run.evaluations;
        converged = run.converged;
        let improved = run.value < best * (1.0 - 1e-12);
        if run.value <= best {
            x = run.x;
            best = run.value;
        }
        if !converged || !improved || best == 0.0 {
            break;
        }
    }

    let mu = x[0];
    let sigma = x[1].abs();
    let alpha = reflect_unit(x[2]);
    let predicted: Vec<f64> = centers.iter().map(|&c| pvp_unchecked(c, mu, sigma, alpha)).collect();
    let fit = PvpFit {
        mu,
        sigma,
        alpha,
        r2: r2_score(observed, &predicted)?,
        n_samples: hist.n_samples,
        evaluations,
    };
    if !converged {
        return Err(Error::NonConvergence {
            evaluations,
            last: fit,
        });
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_peaks() {
        let (mu, sigma) = (0.3, 0.7);
        let g = pvp(mu, mu, sigma, 0.0).unwrap();
        assert!((g - 1.0 / (gaussian_sigma(sigma) * (2.0 * PI).sqrt())).abs() < 1e-15);
        let c = pvp(mu, mu, sigma, 1.0).unwrap();
        assert!((c - 1.0 / (PI * sigma)).abs() < 1e-15);
    }

    #[test]
    fn equal_half_widths() {
        // both components fall to half their peak at mu +- sigma
        let s = 0.4;
        let g0 = pvp(0.0, 0.0, s, 0.0).unwrap();
        let c0 = pvp(0.0, 0.0, s, 1.0).unwrap();
        assert!((pvp(s, 0.0, s, 0.0).unwrap() - 0.5 * g0).abs() < 1e-12);
        assert!((pvp(s, 0.0, s, 1.0).unwrap() - 0.5 * c0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(pvp(0.0, 0.0, 0.0, 0.5).is_err());
        assert!(pvp(0.0, 0.0, 1.0, 1.5).is_err());
        assert!(pvp(0.0, 0.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn reflection() {
        assert_eq!(reflect_unit(0.25), 0.25);
        assert_eq!(reflect_unit(1.25), 0.75);
        assert_eq!(reflect_unit(-0.25), 0.25);
        assert_eq!(reflect_unit(2.5), 0.5);
    }

    #[test]
    fn too_few_samples() {
        let x: Vec<f64> = (0..499).map(|i| (i as f64).sin()).collect();
        assert!(matches!(fit_pvp(&x, Binning::default()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn identical_steps_are_degenerate() {
        assert!(matches!(fit_pvp(&[0.0; 600], Binning::default()), Err(Error::Degenerate(_))));
    }

    #[test]
    fn exact_profile_is_recovered() {
        let (mu, sigma, alpha) = (-0.05, 0.2, 0.35);
        let n = 120;
        let edges: Vec<f64> = (0..=n).map(|i| -1.5 + 3.0 * i as f64 / n as f64).collect();
        let density = edges
            .windows(2)
            .map(|e| pvp(0.5 * (e[0] + e[1]), mu, sigma, alpha).unwrap())
            .collect();
        let hist = Histogram {
            edges,
            density,
            n_samples: 0,
            n_outside: 0,
        };
        let fit = fit_pvp_histogram(&hist).unwrap();
        assert!((fit.mu - mu).abs() < 1e-6, "{fit:?}");
        assert!((fit.sigma - sigma).abs() < 1e-6, "{fit:?}");
        assert!((fit.alpha - alpha).abs() < 1e-6, "{fit:?}");
        assert!(fit.r2 >= 1.0 - 1e-10);
    }
}
