//! File formats.
//!
//! A series file is a CSV with a `time_s,value` header and one row per sample,
//! plus an optional JSON sidecar next to it (`name.meta.json` for
//! `name.csv`) carrying the sampling interval, domain tag, source label and
//! averaging time. Plot data are CSV tables with self-describing headers.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::distfit::Histogram;
use crate::error::{Error, Result};
use crate::resilience::ResilienceTable;
use crate::series::{Domain, XtSeries};
use crate::spectral::{Spectrum, SpectrumKind};

/// Relative tolerance on the spacing of the time column.
pub const TIME_SPACING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub dt: f64,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averaging_time_s: Option<f64>,
    #[serde(default)]
    pub floored_samples: usize,
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Domain to use regardless of the sidecar.
    pub domain_override: Option<Domain>,
    /// Domain assumed when there is neither an override nor a sidecar.
    pub fallback_domain: Domain,
    pub time_column: String,
    pub value_column: String,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            domain_override: None,
            fallback_domain: Domain::LinearPower,
            time_column: "time_s".into(),
            value_column: "value".into(),
        }
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    })
}

/// Writes the CSV and its sidecar.
pub fn write_series(path: &Path, series: &XtSeries) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["time_s", "value"]).map_err(|e| csv_err(path, e))?;
    for (i, v) in series.values().iter().enumerate() {
        let t = i as f64 * series.dt();
        w.write_record([t.to_string(), v.to_string()])
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(io_err(path))?;
    let meta = SeriesMeta {
        dt: series.dt(),
        domain: series.domain(),
        source_label: series.label.clone(),
        averaging_time_s: Some(series.dt()),
        floored_samples: series.floored,
    };
    write_json(&sidecar_path(path), &meta)
}

fn read_sidecar(path: &Path) -> Result<Option<SeriesMeta>> {
    let side = sidecar_path(path);
    if side.exists() {
        read_json(&side).map(Some)
    } else {
        Ok(None)
    }
}

/// Reads and validates a series file.
pub fn load_series(path: &Path, opts: &LoadOptions) -> Result<XtSeries> {
    let file = File::open(path).map_err(io_err(path))?;
    let meta = read_sidecar(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("missing column `{name}` (header: {})", headers.iter().collect::<Vec<_>>().join(",")),
        })
    };
    let (tc, vc) = (column(&opts.time_column)?, column(&opts.value_column)?);

    let mut times = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |idx: usize, name: &str| -> Result<f64> {
            let raw = record.get(idx).unwrap_or("");
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("`{raw}` in column `{name}` is not a finite number"),
                }),
            }
        };
        times.push(field(tc, &opts.time_column)?);
        values.push(field(vc, &opts.value_column)?);
    }
    if values.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "no data rows".into(),
        });
    }

    let dt = check_spacing(path, &times, meta.as_ref().map(|m| m.dt))?;
    let domain = opts
        .domain_override
        .or(meta.as_ref().map(|m| m.domain))
        .unwrap_or(opts.fallback_domain);
    let mut series = XtSeries::new(dt, values, domain).map_err(|e| match e {
        Error::InvalidArgument(message) => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message,
        },
        other => other,
    })?;
    if let Some(meta) = meta {
        series.label = meta.source_label;
        series.floored = meta.floored_samples;
    }
    Ok(series)
}

fn check_spacing(path: &Path, times: &[f64], declared: Option<f64>) -> Result<f64> {
    let nonuniform = |message: String| Error::NonUniformTime {
        path: path.to_path_buf(),
        message,
    };
    if times.len() < 2 {
        return declared
            .filter(|dt| *dt > 0.0)
            .ok_or_else(|| nonuniform("a single sample needs the sidecar's dt".into()));
    }
    let n = times.len();
    let measured = (times[n - 1] - times[0]) / (n - 1) as f64;
    let dt = declared.unwrap_or(measured);
    if !(dt > 0.0) {
        return Err(nonuniform(format!("time step {dt} is not positive")));
    }
    if (measured - dt).abs() > TIME_SPACING_TOL * dt {
        return Err(nonuniform(format!("mean step {measured} differs from declared dt {dt}")));
    }
    for (i, w) in times.windows(2).enumerate() {
        let step = w[1] - w[0];
        if (step - dt).abs() > TIME_SPACING_TOL * dt {
            return Err(nonuniform(format!(
                "step {step} between data rows {} and {} (expected {dt})",
                i + 1,
                i + 2
            )));
        }
    }
    Ok(dt)
}

/// Results that can be written as plot-ready CSV tables.
#[derive(Debug, Clone, Copy)]
pub enum PlotData<'a> {
    /// Columns `bin_center,density,fitted_density`.
    HistogramFit {
        hist: &'a Histogram,
        fitted: &'a [f64],
    },
    /// Columns `freq_hz,psd_norm` (periodogram) or `freq_hz,magnitude`.
    Spectrum(&'a Spectrum),
    /// Columns `lag,lag_s,autocovariance,autocorrelation`.
    Autocovariance { dt: f64, values: &'a [f64] },
    /// Columns `window_s,r2_mean,r2_ci90_lo,r2_ci90_hi`.
    Resilience(&'a ResilienceTable),
    /// Columns `t,ks_statistic`.
    Convergence(&'a [(usize, f64)]),
}

/// Headers and numeric rows of a plot table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

fn plot_table(data: &PlotData<'_>) -> Result<Table> {
    let headers = |h: &[&str]| h.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Ok(match *data {
        PlotData::HistogramFit { hist, fitted } => {
            if fitted.len() != hist.n_bins() {
                return Err(Error::invalid("fitted curve and histogram differ in length"));
            }
            Table {
                headers: headers(&["bin_center", "density", "fitted_density"]),
                rows: hist
                    .centers()
                    .iter()
                    .zip(&hist.density)
                    .zip(fitted)
                    .map(|((c, d), f)| vec![*c, *d, *f])
                    .collect(),
            }
        }
        PlotData::Spectrum(spec) => Table {
            headers: match spec.kind {
                SpectrumKind::Psd => headers(&["freq_hz", "psd_norm"]),
                SpectrumKind::Magnitude => headers(&["freq_hz", "magnitude"]),
            },
            rows: spec.frequencies().zip(&spec.values).map(|(f, v)| vec![f, *v]).collect(),
        },
        PlotData::Autocovariance { dt, values } => {
            let c0 = values.first().copied().unwrap_or(0.0);
            if c0 <= 0.0 {
                return Err(Error::degenerate("autocorrelation of a zero-variance series"));
            }
            Table {
                headers: headers(&["lag", "lag_s", "autocovariance", "autocorrelation"]),
                rows: values
                    .iter()
                    .enumerate()
                    .map(|(k, c)| vec![k as f64, k as f64 * dt, *c, c / c0])
                    .collect(),
            }
        }
        PlotData::Resilience(table) => Table {
            headers: headers(&["window_s", "r2_mean", "r2_ci90_lo", "r2_ci90_hi"]),
            rows: table
                .rows
                .iter()
                .map(|r| vec![r.window_s, r.r2_mean, r.r2_ci90_lo, r.r2_ci90_hi])
                .collect(),
        },
        PlotData::Convergence(points) => Table {
            headers: headers(&["t", "ks_statistic"]),
            rows: points.iter().map(|&(t, d)| vec![t as f64, d]).collect(),
        },
    })
}

pub fn write_table(path: &Path, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(&table.headers).map_err(|e| csv_err(path, e))?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn emit_plot_data(data: &PlotData<'_>, path: &Path) -> Result<()> {
    write_table(path, &plot_table(data)?)
}

/// Reads a numeric CSV table with a header row.
pub fn read_table(path: &Path) -> Result<Table> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|raw| {
                raw.trim().parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("`{raw}` is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { headers, rows })
}
