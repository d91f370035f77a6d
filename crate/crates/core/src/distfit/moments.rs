use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::check_finite;

/// Sample mean, unbiased variance, and the standardized third and fourth
/// central moments (population form, excess kurtosis: normal maps to 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl Moments {
    pub fn to_array(&self) -> [f64; 4] {
        [self.mean, self.variance, self.skewness, self.excess_kurtosis]
    }
}

/// Mean and unbiased variance.
pub fn mean_variance(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::invalid("variance needs at least 2 samples"));
    }
    check_finite(samples)?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
    Ok((mean, ss / (n - 1.0)))
}

pub fn moments(samples: &[f64]) -> Result<Moments> {
    let (mean, variance) = mean_variance(samples)?;
    let n = samples.len() as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 == 0.0 {
        return Err(Error::degenerate("skewness and kurtosis undefined for zero variance"));
    }
    Ok(Moments {
        mean,
        variance,
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let m = moments(&[-1.0, 1.0]).unwrap();
        assert_eq!(m.mean, 0.0);
        assert_eq!(m.variance, 2.0);
        assert_eq!(m.skewness, 0.0);
        // symmetric two-point law: m4 / m2^2 = 1
        assert_eq!(m.excess_kurtosis, -2.0);
    }

    #[test]
    fn affine_map() {
        let x: Vec<f64> = (0..500).map(|i| ((i * 7919) % 211) as f64 / 17.0).collect();
        let (a, b) = (2.5, -4.0);
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let mx = moments(&x).unwrap();
        let my = moments(&y).unwrap();
        assert!((my.mean - (a * mx.mean + b)).abs() < 1e-12);
        assert!((my.variance - a * a * mx.variance).abs() < 1e-10);
        assert!((my.skewness - mx.skewness).abs() < 1e-12);
        assert!((my.excess_kurtosis - mx.excess_kurtosis).abs() < 1e-12);
    }

    #[test]
    fn zero_variance() {
        assert!(matches!(moments(&[3.0; 10]), Err(Error::Degenerate(_))));
        assert_eq!(mean_variance(&[3.0; 10]).unwrap(), (3.0, 0.0));
        assert!(moments(&[1.0]).is_err());
    }
}
