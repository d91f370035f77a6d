use std::path::Path;

use serde::Serialize;
use xtwalk::classify::{build_features, classify_features, FeatureMode, Grid, LabeledSet};
use xtwalk::distfit::{fit_chi2, fit_pvp, phase_uniformity_check};
use xtwalk::io::{self, LoadOptions, PlotData};
use xtwalk::resilience::{run_window_resilience, WindowSchedule};
use xtwalk::simulate::{gaussian_random_walk, simulate_baseline, simulate_random_walk, ModelParams};
use xtwalk::spectral::{autocovariance, psd, Detrend};
use xtwalk::steps::{db_steps, resample, staxt, step_sequence};
use xtwalk::{Domain, Error, Result, XtSeries};

use crate::config::ClassifyConfig;
use crate::{Command, DetrendArg, InputArgs, Model};

#[derive(Debug, Serialize)]
struct FitReport<P> {
    model: &'static str,
    params: P,
    r2: f64,
    n_samples: usize,
    binning: String,
}

#[derive(Debug, Serialize)]
struct Chi2Params {
    sigma: f64,
}

#[derive(Debug, Serialize)]
struct PvpParams {
    mu: f64,
    sigma: f64,
    alpha: f64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Rejects output paths that collide with an input or with each other.
fn distinct_paths(inputs: &[&Path], outputs: &[&Path]) -> Result<()> {
    for (i, out) in outputs.iter().enumerate() {
        if inputs.contains(out) || outputs[..i].contains(out) {
            return Err(invalid(format!(
                "output path {} is used more than once",
                out.display()
            )));
        }
    }
    Ok(())
}

fn load(input: &InputArgs, fallback: Domain) -> Result<XtSeries> {
    let opts = LoadOptions {
        domain_override: input.domain,
        fallback_domain: fallback,
        time_column: input.time_col.clone(),
        value_column: input.value_col.clone(),
    };
    io::load_series(&input.input, &opts)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be > 0, got {v}")))
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            model,
            n_pm,
            chi,
            sigma_gamma,
            mu_gamma,
            n_pol,
            samples,
            dt,
            seed,
            out,
        } => {
            positive("dt", dt)?;
            if samples == 0 {
                return Err(invalid("--samples must be >= 1"));
            }
            let series = match model {
                Model::Gwalk => {
                    if !(sigma_gamma >= 0.0 && sigma_gamma.is_finite()) {
                        return Err(invalid(format!("--sigma-gamma must be >= 0, got {sigma_gamma}")));
                    }
                    gaussian_random_walk(samples, sigma_gamma, seed)?
                }
                Model::Baseline | Model::Walk => {
                    let params = ModelParams::new(n_pm, chi, seed)?
                        .with_sigma_gamma(sigma_gamma)
                        .with_mu_gamma(mu_gamma)
                        .with_n_pol(n_pol);
                    params.validate()?;
                    if model == Model::Baseline {
                        simulate_baseline(&params, samples, seed)?
                    } else {
                        simulate_random_walk(&params, samples, seed)?
                    }
                }
            };
            let label = match model {
                Model::Baseline => "baseline",
                Model::Walk => "walk",
                Model::Gwalk => "gwalk",
            };
            io::write_series(&out, &series.with_dt(dt)?.with_label(label))
        }

        Command::FitChi2 {
            input,
            bins,
            out_json,
            plot_data,
        } => {
            let mut outs = vec![out_json.as_path()];
            outs.extend(plot_data.as_deref());
            distinct_paths(&[&input.input], &outs)?;
            let series = load(&input, Domain::LinearPower)?;
            if series.domain() != Domain::LinearPower {
                return Err(invalid(format!(
                    "chi-squared fit needs a linear-power series, got {}",
                    series.domain()
                )));
            }
            let (fit, hist) = fit_chi2(series.values(), bins)?;
            io::write_json(
                &out_json,
                &FitReport {
                    model: "chi2-4dof",
                    params: Chi2Params { sigma: fit.sigma },
                    r2: fit.r2,
                    n_samples: fit.n_samples,
                    binning: bins.to_string(),
                },
            )?;
            if let Some(path) = plot_data {
                let fitted = fit.curve(&hist);
                io::emit_plot_data(&PlotData::HistogramFit { hist: &hist, fitted: &fitted }, &path)?;
            }
            Ok(())
        }

        Command::Steps { input, floor, out } => {
            positive("floor", floor)?;
            distinct_paths(&[&input.input], &[&out])?;
            let series = load(&input, Domain::LinearPower)?;
            let steps = match series.domain() {
                Domain::LinearPower => db_steps(&series, floor)?,
                Domain::Db => step_sequence(&series)?,
                Domain::DbStep => return Err(invalid("input is already a step series")),
            };
            let mut out_series = steps.into_series()?;
            out_series.label = series.label.clone();
            io::write_series(&out, &out_series)
        }

        Command::FitPvp {
            input,
            bins,
            out_json,
            plot_data,
        } => {
            let mut outs = vec![out_json.as_path()];
            outs.extend(plot_data.as_deref());
            distinct_paths(&[&input.input], &outs)?;
            let series = load(&input, Domain::DbStep)?;
            if series.domain() != Domain::DbStep {
                return Err(invalid(format!(
                    "pseudo-Voigt fit needs a dB-step series, got {} (run `xtwalk steps` first)",
                    series.domain()
                )));
            }
            let (fit, hist) = fit_pvp(series.values(), bins)?;
            io::write_json(
                &out_json,
                &FitReport {
                    model: "pseudo-voigt",
                    params: PvpParams {
                        mu: fit.mu,
                        sigma: fit.sigma,
                        alpha: fit.alpha,
                    },
                    r2: fit.r2,
                    n_samples: fit.n_samples,
                    binning: bins.to_string(),
                },
            )?;
            if let Some(path) = plot_data {
                let fitted = fit.curve(&hist.centers());
                io::emit_plot_data(&PlotData::HistogramFit { hist: &hist, fitted: &fitted }, &path)?;
            }
            Ok(())
        }

        Command::Psd { input, detrend, out } => {
            distinct_paths(&[&input.input], &[&out])?;
            let series = load(&input, Domain::LinearPower)?;
            let detrend = match detrend {
                DetrendArg::None => Detrend::None,
                DetrendArg::Mean => Detrend::RemoveMean,
            };
            let spectrum = psd(&series, detrend)?;
            io::emit_plot_data(&PlotData::Spectrum(&spectrum), &out)
        }

        Command::Acf { input, max_lag, out } => {
            distinct_paths(&[&input.input], &[&out])?;
            let series = load(&input, Domain::LinearPower)?;
            let values = autocovariance(&series, max_lag)?;
            io::emit_plot_data(
                &PlotData::Autocovariance {
                    dt: series.dt(),
                    values: &values,
                },
                &out,
            )
        }

        Command::Staxt { input, window, out } => {
            distinct_paths(&[&input.input], &[&out])?;
            let series = load(&input, Domain::LinearPower)?;
            io::write_series(&out, &staxt(&series, window)?)
        }

        Command::Resample { input, factor, out } => {
            distinct_paths(&[&input.input], &[&out])?;
            let series = load(&input, Domain::LinearPower)?;
            io::write_series(&out, &resample(&series, factor)?)
        }

        Command::Converge {
            sigma_gamma,
            mu_gamma,
            t_list,
            n_phases,
            seed,
            out,
        } => {
            let params = ModelParams::new(1, 1.0, seed)?
                .with_phases(vec![0.0])
                .with_sigma_gamma(sigma_gamma)
                .with_mu_gamma(mu_gamma);
            params.validate()?;
            if n_phases < 2 {
                return Err(invalid("--n-phases must be >= 2"));
            }
            let points = t_list
                .iter()
                .map(|&t| Ok((t, phase_uniformity_check(&params, t, n_phases, seed)?)))
                .collect::<Result<Vec<_>>>()?;
            io::emit_plot_data(&PlotData::Convergence(&points), &out)
        }

        Command::Resilience {
            input,
            benchmark,
            schedule,
            repeats,
            bins,
            seed,
            out,
        } => {
            positive("benchmark", benchmark)?;
            if repeats == 0 {
                return Err(invalid("--repeats must be >= 1"));
            }
            let &[start, step, end] = schedule.as_slice() else {
                return Err(invalid("--schedule takes START,STEP,END"));
            };
            let schedule = WindowSchedule {
                start_s: start * 60.0,
                step_s: step * 60.0,
                end_s: end * 60.0,
            };
            schedule.lengths()?;
            if schedule.end_s > benchmark * 3600.0 {
                return Err(invalid("schedule END exceeds the benchmark window"));
            }
            distinct_paths(&[&input.input], &[&out])?;
            let series = load(&input, Domain::LinearPower)?;
            let table = run_window_resilience(&series, benchmark * 3600.0, &schedule, repeats, seed, bins)?;
            io::emit_plot_data(&PlotData::Resilience(&table), &out)
        }

        Command::Classify {
            config,
            mode,
            seed,
            out_json,
        } => {
            let mut cfg: ClassifyConfig = io::read_json(&config)?;
            cfg.validate()?;
            cfg.resolve(config.parent().unwrap_or(Path::new(".")));
            let inputs: Vec<&Path> = std::iter::once(config.as_path())
                .chain(cfg.windows.iter().map(|w| w.file.as_path()))
                .collect();
            distinct_paths(&inputs, &[&out_json])?;
            let set = classify_windows(&cfg, mode, seed)?;
            let report = classify_features(&set, mode, &Grid::default(), seed)?;
            io::write_json(&out_json, &report)
        }
    }
}

/// Seed of synthetic window `window` of class `class`, derived from the run seed.
fn window_seed(seed: u64, class: usize, window: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((class as u64) << 32 | window as u64)
}

fn classify_windows(cfg: &ClassifyConfig, mode: FeatureMode, seed: u64) -> Result<LabeledSet> {
    let factor = cfg.resample_factor.unwrap_or(1);
    let features = |series: XtSeries| -> Result<Vec<f64>> {
        let series = resample(&series, factor)?;
        Ok(build_features(&series, mode)?.values)
    };
    let mut pairs: Vec<(String, Vec<f64>)> = Vec::new();
    if let Some(syn) = &cfg.synthetic {
        for (ci, class) in syn.classes.iter().enumerate() {
            for w in 0..syn.windows_per_class {
                let s = window_seed(seed, ci, w);
                let params = ModelParams::new(syn.n_pm, syn.chi, s)?
                    .with_sigma_gamma(class.sigma_gamma)
                    .with_mu_gamma(class.mu_gamma);
                let series = simulate_random_walk(&params, syn.window_samples, s)?.with_dt(syn.dt)?;
                pairs.push((class.label.clone(), features(series)?));
            }
        }
    } else {
        let opts = LoadOptions::default();
        // read every window before extracting any features
        let windows = cfg
            .windows
            .iter()
            .map(|w| io::load_series(&w.file, &opts))
            .collect::<Result<Vec<_>>>()?;
        for (entry, series) in cfg.windows.iter().zip(windows) {
            pairs.push((entry.label.clone(), features(series)?));
        }
    }
    LabeledSet::from_pairs(pairs)
}
