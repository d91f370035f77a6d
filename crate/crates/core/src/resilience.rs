//! How much of a long observation's step distribution a short window recovers.
//!
//! A pseudo-Voigt profile fitted on the whole benchmark window is the
//! reference. For each scheduled window length, randomly placed contiguous
//! subsets are fitted too, and each subset's fitted curve is scored against the
//! benchmark curve at the benchmark's bin centers with R^2.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::distfit::{fit_pvp, quantile_sorted, r2_score, Binning, PvpFit};
use crate::error::{Error, Result};
use crate::rng::{self, stream};
use crate::series::{Domain, XtSeries};
use crate::steps::{step_sequence, to_db, DEFAULT_FLOOR};

/// Window lengths `start, start + step, ...` up to and including `end`, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSchedule {
    pub start_s: f64,
    pub step_s: f64,
    pub end_s: f64,
}

impl WindowSchedule {
    pub fn lengths(&self) -> Result<Vec<f64>> {
        if !(self.start_s > 0.0 && self.step_s > 0.0 && self.end_s >= self.start_s) {
            return Err(Error::invalid(format!("invalid window schedule {self:?}")));
        }
        let n = ((self.end_s - self.start_s) / self.step_s + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| self.start_s + i as f64 * self.step_s).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResilienceRow {
    pub window_s: f64,
    pub r2_mean: f64,
    /// Empirical 5th percentile over repeats.
    pub r2_ci90_lo: f64,
    /// Empirical 95th percentile over repeats.
    pub r2_ci90_hi: f64,
    pub repeats: usize,
    /// Subset fits that hit the evaluation budget; their last iterate is used.
    pub nonconverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResilienceTable {
    pub benchmark: PvpFit,
    pub rows: Vec<ResilienceRow>,
}

fn fit_or_last(steps: &[f64], binning: Binning) -> Result<(PvpFit, bool)> {
    match fit_pvp(steps, binning) {
        Ok((fit, _)) => Ok((fit, true)),
        Err(Error::NonConvergence { last, .. }) => Ok((last, false)),
        Err(e) => Err(e),
    }
}

/// Runs the sweep on the first `benchmark_s` seconds of `series`.
///
/// Linear series are converted to dB with the default floor.
pub fn run_window_resilience(
    series: &XtSeries,
    benchmark_s: f64,
    schedule: &WindowSchedule,
    repeats: usize,
    seed: u64,
    binning: Binning,
) -> Result<ResilienceTable> {
    if repeats == 0 {
        return Err(Error::invalid("repeats must be >= 1"));
    }
    let dt = series.dt();
    let n_bench = (benchmark_s / dt).round() as usize;
    if !(benchmark_s > 0.0) || n_bench > series.len() {
        return Err(Error::invalid(format!(
            "benchmark window of {benchmark_s} s needs {n_bench} samples, series has {}",
            series.len()
        )));
    }
    let levels = match series.domain() {
        Domain::LinearPower => to_db(&series.window(0, n_bench)?, DEFAULT_FLOOR)?,
        Domain::Db => series.window(0, n_bench)?,
        Domain::DbStep => return Err(Error::invalid("resilience needs a level series, not steps")),
    };
    let steps = step_sequence(&levels)?.steps;

    let lengths = schedule.lengths()?;
    let windows: Vec<usize> = lengths.iter().map(|l| (l / dt).round() as usize).collect();
    if let Some(&too_long) = windows.iter().find(|&&n| n > n_bench) {
        return Err(Error::invalid(format!(
            "scheduled window of {too_long} samples exceeds the benchmark window ({n_bench})"
        )));
    }

    let (bench_fit, hist) = fit_pvp(&steps, binning)?;
    let centers = hist.centers();
    let reference = bench_fit.curve(&centers);

    let mut rng = rng::seeded(seed, stream::SUBSETS);
    let mut rows = Vec::with_capacity(windows.len());
    for (&window_s, &n_w) in lengths.iter().zip(&windows) {
        // a window of n_w levels holds n_w - 1 steps
        let n_steps = n_w.saturating_sub(1);
        let mut scores = Vec::with_capacity(repeats);
        let mut nonconverged = 0;
        for _ in 0..repeats {
            let start = rng.random_range(0..=steps.len() - n_steps);
            let (fit, ok) = fit_or_last(&steps[start..start + n_steps], binning)?;
            nonconverged += usize::from(!ok);
            scores.push(r2_score(&reference, &fit.curve(&centers))?);
        }
        let mean = scores.iter().sum::<f64>() / repeats as f64;
        scores.sort_by(f64::total_cmp);
        rows.push(ResilienceRow {
            window_s,
            r2_mean: mean,
            r2_ci90_lo: quantile_sorted(&scores, 0.05),
            r2_ci90_hi: quantile_sorted(&scores, 0.95),
            repeats,
            nonconverged,
        });
    }
    Ok(ResilienceTable {
        benchmark: bench_fit,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_lengths() {
        let s = WindowSchedule {
            start_s: 360.0,
            step_s: 1080.0,
            end_s: 43_200.0,
        };
        let l = s.lengths().unwrap();
        assert_eq!(l.first(), Some(&360.0));
        assert_eq!(l.len(), 40);
        assert!(*l.last().unwrap() <= 43_200.0);
        assert!(WindowSchedule { start_s: 0.0, step_s: 1.0, end_s: 2.0 }.lengths().is_err());
    }
}
