//! dB-domain processing: level conversion, step extraction, short-term
//! averaging and resampling.

use crate::error::{Error, Result};
use crate::series::{Domain, XtSeries};

/// Default power floor applied before taking logarithms.
pub const DEFAULT_FLOOR: f64 = 1e-12;

/// Differences of consecutive dB levels.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSeries {
    pub dt: f64,
    pub steps: Vec<f64>,
}

impl StepSeries {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn into_series(self) -> Result<XtSeries> {
        XtSeries::new(self.dt, self.steps, Domain::DbStep)
    }
}

fn require(series: &XtSeries, domain: Domain) -> Result<()> {
    if series.domain() != domain {
        return Err(Error::invalid(format!(
            "expected a {domain} series, got {}",
            series.domain()
        )));
    }
    Ok(())
}

#[inline]
fn db(value: f64) -> f64 {
    10.0 * value.log10()
}

/// `10 log10(max(value, floor))` per sample. The number of floored samples is
/// recorded in [`XtSeries::floored`].
pub fn to_db(series: &XtSeries, floor: f64) -> Result<XtSeries> {
    require(series, Domain::LinearPower)?;
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(Error::invalid(format!("power floor must be > 0, got {floor}")));
    }
    let mut floored = 0;
    let values = series
        .values()
        .iter()
        .map(|&v| {
            if v < floor {
                floored += 1;
                db(floor)
            } else {
                db(v)
            }
        })
        .collect();
    let mut out = XtSeries::from_parts(series.dt(), values, Domain::Db);
    out.label = series.label.clone();
    out.floored = floored;
    Ok(out)
}

/// Inverse of [`to_db`] (without the floor).
pub fn to_linear(series: &XtSeries) -> Result<XtSeries> {
    require(series, Domain::Db)?;
    let values = series.values().iter().map(|&v| 10f64.powf(v / 10.0)).collect();
    let mut out = XtSeries::from_parts(series.dt(), values, Domain::LinearPower);
    out.label = series.label.clone();
    Ok(out)
}

/// `steps[t] = S[t + 1] - S[t]` of a dB series.
pub fn step_sequence(series: &XtSeries) -> Result<StepSeries> {
    require(series, Domain::Db)?;
    if series.len() < 2 {
        return Err(Error::invalid("step extraction needs at least 2 samples"));
    }
    Ok(StepSeries {
        dt: series.dt(),
        steps: series.values().windows(2).map(|w| w[1] - w[0]).collect(),
    })
}

/// dB steps of a linear-power series (convenience for `to_db` + `step_sequence`).
pub fn db_steps(series: &XtSeries, floor: f64) -> Result<StepSeries> {
    step_sequence(&to_db(series, floor)?)
}

fn block_means(values: &[f64], window: usize) -> Vec<f64> {
    values
        .chunks_exact(window)
        .map(|c| c.iter().sum::<f64>() / window as f64)
        .collect()
}

/// Short-term average crosstalk: means of non-overlapping blocks of `window`
/// linear-power samples. A trailing partial block is dropped.
pub fn staxt(series: &XtSeries, window: usize) -> Result<XtSeries> {
    require(series, Domain::LinearPower)?;
    if window == 0 || window > series.len() {
        return Err(Error::invalid(format!(
            "STAXT window must be in [1, {}], got {window}",
            series.len()
        )));
    }
    if window == 1 {
        return Ok(series.clone());
    }
    let mut out = XtSeries::from_parts(
        series.dt() * window as f64,
        block_means(series.values(), window),
        Domain::LinearPower,
    );
    out.label = series.label.clone();
    Ok(out)
}

/// Coarsens the averaging time by an integer factor.
///
/// Averaging always happens on linear power; dB series are converted there
/// and back. Step series cannot be resampled.
pub fn resample(series: &XtSeries, factor: usize) -> Result<XtSeries> {
    if factor == 0 || factor > series.len() {
        return Err(Error::invalid(format!(
            "resample factor must be in [1, {}], got {factor}",
            series.len()
        )));
    }
    match series.domain() {
        Domain::LinearPower => staxt(series, factor),
        Domain::Db => {
            if factor == 1 {
                return Ok(series.clone());
            }
            let averaged = staxt(&to_linear(series)?, factor)?;
            // block means of positive powers stay positive, no floor needed
            let mut out = to_db(&averaged, f64::MIN_POSITIVE)?;
            out.floored = 0;
            Ok(out)
        }
        Domain::DbStep => Err(Error::invalid("step series cannot be resampled")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(values: Vec<f64>) -> XtSeries {
        XtSeries::new(0.1, values, Domain::LinearPower).unwrap()
    }

    #[test]
    fn db_conversion() {
        let s = to_db(&lin(vec![1.0, 0.1, 0.0, 100.0]), 1e-12).unwrap();
        assert_eq!(s.values(), &[0.0, -10.0, -120.0, 20.0]);
        assert_eq!(s.floored, 1);
        assert_eq!(s.domain(), Domain::Db);
        assert!(to_db(&lin(vec![1.0]), 0.0).is_err());
        assert!(to_db(&s, 1e-12).is_err());
    }

    #[test]
    fn steps_of_simple_series() {
        let flat = XtSeries::new(1.0, vec![-3.0; 6], Domain::Db).unwrap();
        assert!(step_sequence(&flat).unwrap().steps.iter().all(|&s| s == 0.0));
        let ramp = XtSeries::new(1.0, (0..8).map(|i| 0.5 * i as f64).collect(), Domain::Db).unwrap();
        assert!(step_sequence(&ramp).unwrap().steps.iter().all(|&s| s == 0.5));
        assert_eq!(step_sequence(&ramp).unwrap().len(), 7);
    }

    #[test]
    fn step_errors() {
        assert!(step_sequence(&lin(vec![1.0, 2.0])).is_err());
        let one = XtSeries::new(1.0, vec![1.0], Domain::Db).unwrap();
        assert!(step_sequence(&one).is_err());
    }

    #[test]
    fn staxt_rules() {
        let s = lin(vec![1.0, 3.0, 2.0, 6.0, 5.0, 7.0]);
        assert_eq!(staxt(&s, 1).unwrap(), s);
        let whole = staxt(&s, 6).unwrap();
        assert_eq!(whole.values(), &[4.0]);
        assert!((whole.dt() - 0.6).abs() < 1e-15);
        let pairs = staxt(&s, 2).unwrap();
        assert_eq!(pairs.values(), &[2.0, 4.0, 6.0]);
        assert!(staxt(&s, 0).is_err());
        assert!(staxt(&s, 7).is_err());
    }

    #[test]
    fn resample_rules() {
        let s = lin(vec![1.0, 3.0, 2.0, 6.0]);
        assert_eq!(resample(&s, 1).unwrap(), s);
        assert_eq!(resample(&s, 2).unwrap().values(), &[2.0, 4.0]);
        assert_eq!(resample(&lin(vec![1.0; 5]), 2).unwrap().len(), 2);
        assert!(resample(&s, 5).is_err());
    }

    #[test]
    fn resample_db_averages_linear_power() {
        let s = to_db(&lin(vec![1.0, 3.0, 2.0, 6.0]), DEFAULT_FLOOR).unwrap();
        let r = resample(&s, 2).unwrap();
        assert_eq!(r.domain(), Domain::Db);
        assert!((r.values()[0] - 10.0 * 2f64.log10()).abs() < 1e-12);
        assert!((r.values()[1] - 10.0 * 4f64.log10()).abs() < 1e-12);
    }
}
