use std::str::FromStr;

use crate::error::{Error, Result};

use super::{check_finite, quantile_select};

/// Upper bound on the Freedman-Diaconis bin count.
const MAX_FD_BINS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binning {
    Fixed(usize),
    FreedmanDiaconis,
}

impl Default for Binning {
    fn default() -> Self {
        Binning::Fixed(100)
    }
}

impl FromStr for Binning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("fd") {
            return Ok(Binning::FreedmanDiaconis);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Binning::Fixed(n)),
            _ => Err(Error::invalid(format!("binning must be a positive bin count or `fd`, got `{s}`"))),
        }
    }
}

impl std::fmt::Display for Binning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Binning::Fixed(n) => write!(f, "{n}"),
            Binning::FreedmanDiaconis => f.write_str("fd"),
        }
    }
}

/// Density-normalized histogram.
///
/// Densities are `count / (n_samples * width)`, so for a histogram spanning
/// all samples `sum(density * width) == 1`. A histogram restricted to a range
/// (see [`Histogram::with_range`]) keeps the same normalization and its total
/// mass is the in-range fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub n_samples: usize,
    /// Samples that fell outside `[edges[0], edges[last]]`.
    pub n_outside: usize,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| e[1] - e[0]).collect()
    }

    /// `sum(density * width)`.
    pub fn mass(&self) -> f64 {
        self.density
            .iter()
            .zip(self.widths())
            .map(|(d, w)| d * w)
            .sum()
    }

    pub fn n_bins(&self) -> usize {
        self.density.len()
    }

    /// Counts samples in `[lo, hi]`, normalizing by the total sample count.
    pub fn with_range(samples: &[f64], lo: f64, hi: f64, binning: Binning) -> Result<Self> {
        check_finite(samples)?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!("invalid histogram range [{lo}, {hi}]")));
        }
        if samples.is_empty() {
            return Err(Error::invalid("histogram of an empty sample"));
        }
        let n_bins = match binning {
            Binning::Fixed(0) => return Err(Error::invalid("bin count must be >= 1")),
            Binning::Fixed(n) => n,
            Binning::FreedmanDiaconis => fd_bins(samples, hi - lo),
        };
        let width = (hi - lo) / n_bins as f64;
        let mut edges: Vec<f64> = (0..=n_bins).map(|i| lo + i as f64 * width).collect();
        edges[n_bins] = hi;
        let mut counts = vec![0u64; n_bins];
        let mut outside = 0;
        for &x in samples {
            if x < lo || x > hi {
                outside += 1;
                continue;
            }
            let mut bin = (((x - lo) / width) as usize).min(n_bins - 1);
            // guard against rounding placing x one bin off its edges
            while bin > 0 && x < edges[bin] {
                bin -= 1;
            }
            while bin + 1 < n_bins && x >= edges[bin + 1] {
                bin += 1;
            }
            counts[bin] += 1;
        }
        let n = samples.len() as f64;
        let density = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, e)| c as f64 / (n * (e[1] - e[0])))
            .collect();
        Ok(Self {
            edges,
            density,
            n_samples: samples.len(),
            n_outside: outside,
        })
    }

    /// Quantile of the binned distribution, interpolating linearly inside bins.
    pub fn quantile(&self, p: f64) -> f64 {
        let mass = self.mass();
        let widths = self.widths();
        let target = p.clamp(0.0, 1.0) * mass;
        let mut acc = 0.0;
        for (i, (d, w)) in self.density.iter().zip(&widths).enumerate() {
            let m = d * w;
            if m > 0.0 && acc + m >= target {
                return self.edges[i] + w * ((target - acc) / m).clamp(0.0, 1.0);
            }
            acc += m;
        }
        *self.edges.last().unwrap()
    }
}

fn fd_bins(samples: &[f64], span: f64) -> usize {
    let mut scratch = samples.to_vec();
    let q1 = quantile_select(&mut scratch, 0.25);
    let q3 = quantile_select(&mut scratch, 0.75);
    let iqr = q3 - q1;
    if iqr <= 0.0 {
        // Sturges
        return ((samples.len() as f64).log2().ceil() as usize + 1).max(1);
    }
    let width = 2.0 * iqr / (samples.len() as f64).cbrt();
    ((span / width).ceil() as usize).clamp(1, MAX_FD_BINS)
}

/// Histogram spanning `[min, max]` of the samples.
pub fn make_histogram(samples: &[f64], binning: Binning) -> Result<Histogram> {
    check_finite(samples)?;
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if samples.len() < 2 || !(lo < hi) {
        return Err(Error::degenerate("histogram needs at least 2 distinct values"));
    }
    Histogram::with_range(samples, lo, hi, binning)
}
