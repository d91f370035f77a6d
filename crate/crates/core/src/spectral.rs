//! Frequency-domain and correlation analysis of crosstalk series.

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};
use crate::series::XtSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Raw one-sided DFT magnitudes `|X_k|`.
    Magnitude,
    /// Periodogram, peak-normalized when any bin is nonzero.
    Psd,
}

/// One-sided spectrum; bin `k` sits at frequency `k * df`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub df: f64,
    pub values: Vec<f64>,
    pub normalized: bool,
    pub kind: SpectrumKind,
    /// Length of the transformed series.
    pub n: usize,
}

impl Spectrum {
    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.df
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|k| self.frequency(k))
    }

    pub fn nyquist(&self) -> f64 {
        self.frequency(self.values.len() - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detrend {
    None,
    RemoveMean,
}

fn dft(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf.truncate(values.len() / 2 + 1);
    buf
}

fn check_len(series: &XtSeries) -> Result<()> {
    if series.len() < 2 {
        return Err(Error::invalid("spectral analysis needs at least 2 samples"));
    }
    Ok(())
}

/// One-sided magnitude spectrum, bins `0..=n/2`, `df = 1 / (n dt)`.
pub fn fft_magnitude(series: &XtSeries) -> Result<Spectrum> {
    check_len(series)?;
    let n = series.len();
    Ok(Spectrum {
        df: 1.0 / (n as f64 * series.dt()),
        values: dft(series.values()).iter().map(|c| c.norm()).collect(),
        normalized: false,
        kind: SpectrumKind::Magnitude,
        n,
    })
}

/// Single-segment periodogram `|X_k|^2 / (n dt)`, normalized to a peak of 1.
///
/// An identically zero periodogram (e.g. a constant series with the mean
/// removed) is returned as is, with `normalized = false`.
pub fn psd(series: &XtSeries, detrend: Detrend) -> Result<Spectrum> {
    check_len(series)?;
    let n = series.len();
    let scale = 1.0 / (n as f64 * series.dt());
    let spectrum = match detrend {
        Detrend::None => dft(series.values()),
        Detrend::RemoveMean => {
            let mean = series.values().iter().sum::<f64>() / n as f64;
            let centered: Vec<f64> = series.values().iter().map(|v| v - mean).collect();
            let mut s = dft(&centered);
            // the mean is removed exactly, not to rounding error
            s[0] = Complex64::new(0.0, 0.0);
            s
        }
    };
    let mut values: Vec<f64> = spectrum.iter().map(|c| c.norm_sqr() * scale).collect();
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let normalized = peak > 0.0;
    if normalized {
        values.iter_mut().for_each(|v| *v /= peak);
    }
    Ok(Spectrum {
        df: 1.0 / (n as f64 * series.dt()),
        values,
        normalized,
        kind: SpectrumKind::Psd,
        n,
    })
}

/// Biased autocovariance `c(k) = (1/n) sum (x_t - m)(x_{t+k} - m)` for
/// `k = 0..=max_lag`.
pub fn autocovariance(series: &XtSeries, max_lag: usize) -> Result<Vec<f64>> {
    let x = series.values();
    let n = x.len();
    if max_lag >= n {
        return Err(Error::invalid(format!(
            "max_lag {max_lag} must be smaller than the series length {n}"
        )));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
    Ok((0..=max_lag)
        .map(|k| {
            centered[..n - k]
                .iter()
                .zip(&centered[k..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64
        })
        .collect())
}

/// `c(k) / c(0)`; fails on a zero-variance series.
pub fn autocorrelation(series: &XtSeries, max_lag: usize) -> Result<Vec<f64>> {
    let cov = autocovariance(series, max_lag)?;
    let c0 = cov[0];
    if c0 <= 0.0 {
        return Err(Error::degenerate("autocorrelation of a zero-variance series"));
    }
    Ok(cov.iter().map(|c| c / c0).collect())
}

/// Least-squares slope of `log10(value)` against `log10(f)` over the bins in
/// `[f_lo, f_hi]`, DC excluded.
pub fn loglog_slope(spec: &Spectrum, f_lo: f64, f_hi: f64) -> Result<f64> {
    if !(f_lo > 0.0 && f_lo < f_hi) {
        return Err(Error::invalid(format!("need 0 < f_lo < f_hi, got [{f_lo}, {f_hi}]")));
    }
    if f_hi > spec.nyquist() * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "f_hi {f_hi} exceeds the Nyquist frequency {}",
            spec.nyquist()
        )));
    }
    let mut points = Vec::new();
    for (k, &v) in spec.values.iter().enumerate().skip(1) {
        let f = spec.frequency(k);
        if f < f_lo || f > f_hi {
            continue;
        }
        if v <= 0.0 {
            return Err(Error::degenerate(format!("zero spectral value at {f} Hz")));
        }
        points.push((f.log10(), v.log10()));
    }
    if points.len() < 8 {
        return Err(Error::invalid(format!(
            "band [{f_lo}, {f_hi}] holds {} bins, need at least 8",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Domain;
    use std::f64::consts::TAU;

    fn series(values: Vec<f64>) -> XtSeries {
        XtSeries::new(0.5, values, Domain::Db).unwrap()
    }

    #[test]
    fn constant_series_is_dc_only() {
        let s = fft_magnitude(&series(vec![3.0; 16])).unwrap();
        assert!((s.values[0] - 48.0).abs() < 1e-12);
        assert!(s.values[1..].iter().all(|v| v.abs() < 1e-12));
        assert_eq!(s.values.len(), 9);
        assert!((s.df - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn sinusoid_hits_one_bin() {
        let n = 64;
        let k = 5;
        let x: Vec<f64> = (0..n).map(|t| (TAU * k as f64 * t as f64 / n as f64).cos()).collect();
        let s = fft_magnitude(&series(x)).unwrap();
        for (bin, v) in s.values.iter().enumerate() {
            if bin == k {
                assert!((v - n as f64 / 2.0).abs() < 1e-9);
            } else {
                assert!(v.abs() < 1e-9, "bin {bin}: {v}");
            }
        }
    }

    #[test]
    fn too_short_rejected() {
        assert!(fft_magnitude(&series(vec![1.0])).is_err());
        assert!(psd(&series(vec![1.0]), Detrend::None).is_err());
    }

    #[test]
    fn constant_psd_with_mean_removed_is_zero() {
        let s = psd(&series(vec![2.5; 32]), Detrend::RemoveMean).unwrap();
        assert!(s.values.iter().all(|&v| v == 0.0));
        assert!(!s.normalized);
    }

    #[test]
    fn psd_peak_is_one() {
        let x: Vec<f64> = (0..100).map(|t| ((t * 7919) % 13) as f64).collect();
        let s = psd(&series(x), Detrend::None).unwrap();
        assert!(s.normalized);
        let peak = s.values.iter().cloned().fold(0.0, f64::max);
        assert_eq!(peak, 1.0);
    }

    #[test]
    fn autocovariance_lag_zero_is_population_variance() {
        let x = vec![1.0, 2.0, 4.0, 7.0];
        let c = autocovariance(&series(x), 3).unwrap();
        // mean 3.5, squared deviations 6.25 + 2.25 + 0.25 + 12.25 = 21
        assert!((c[0] - 21.0 / 4.0).abs() < 1e-15);
        // lag 3: (-2.5)(3.5) / 4
        assert!((c[3] - (-2.5 * 3.5) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn autocovariance_errors() {
        assert!(autocovariance(&series(vec![1.0, 2.0]), 2).is_err());
        assert!(matches!(
            autocorrelation(&series(vec![1.0; 5]), 1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn slope_of_exact_power_law() {
        let n = 2049;
        let values: Vec<f64> = (0..n)
            .map(|k| if k == 0 { 1.0 } else { (k as f64 * 0.01).powi(-2) })
            .collect();
        let spec = Spectrum {
            df: 0.01,
            values,
            normalized: false,
            kind: SpectrumKind::Psd,
            n: 4096,
        };
        let slope = loglog_slope(&spec, 0.05, 10.0).unwrap();
        assert!((slope + 2.0).abs() < 1e-6);
        let flat = Spectrum {
            values: vec![0.3; n],
            ..spec.clone()
        };
        assert!(loglog_slope(&flat, 0.05, 10.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn slope_band_errors() {
        let spec = Spectrum {
            df: 1.0,
            values: vec![1.0; 20],
            normalized: true,
            kind: SpectrumKind::Psd,
            n: 38,
        };
        assert!(loglog_slope(&spec, 1.0, 4.0).is_err()); // 4 bins
        assert!(loglog_slope(&spec, 0.0, 4.0).is_err());
        assert!(loglog_slope(&spec, 1.0, 25.0).is_err());
        let mut zero = spec.clone();
        zero.values[5] = 0.0;
        assert!(matches!(loglog_slope(&zero, 1.0, 15.0), Err(Error::Degenerate(_))));
    }
}
