use crate::error::{Error, Result};

use super::check_finite;

fn sorted_copy(samples: &[f64]) -> Result<Vec<f64>> {
    check_finite(samples)?;
    let mut v = samples.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    Ok(v)
}

/// Kolmogorov-Smirnov distance `sup |F_n(x) - F(x)|` between the empirical
/// distribution of `samples` and the reference `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::invalid("KS statistic needs at least 2 samples"));
    }
    let xs = sorted_copy(samples)?;
    let n = xs.len() as f64;
    Ok(xs.iter().enumerate().fold(0.0, |acc: f64, (i, &x)| {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    }))
}

/// Two-sample Kolmogorov-Smirnov distance between empirical distributions.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("two-sample KS needs nonempty samples"));
    }
    let xs = sorted_copy(a)?;
    let ys = sorted_copy(b)?;
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}
