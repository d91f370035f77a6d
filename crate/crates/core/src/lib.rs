//! Inter-core crosstalk (IC-XT) modelling for multi-core fibers.
//!
//! The crate generates crosstalk intensity series under two phase models and
//! analyses them the way measured crosstalk is analysed:
//!
//! * [`simulate`]: the uniform-phase baseline (i.i.d. samples following a
//!   four-degree chi-squared law) and the random-walk phase model, in which
//!   every phase-matching point's phase performs a Gaussian random walk.
//! * [`spectral`]: FFT magnitudes, periodograms, autocovariance and log-log
//!   slopes.
//! * [`distfit`]: histograms, chi-squared scale fits, pseudo-Voigt step
//!   fits, R^2, Kolmogorov-Smirnov distances and moments.
//! * [`steps`]: dB conversion, step extraction, short-term averaging.
//! * [`classify`]: source-signal classification from step features.
//! * [`io`] and [`resilience`]: file formats and window-length sweeps.
//!
//! ```
//! use xtwalk::distfit::{fit_pvp, Binning};
//! use xtwalk::simulate::{simulate_random_walk, ModelParams};
//! use xtwalk::steps::{db_steps, DEFAULT_FLOOR};
//!
//! let params = ModelParams::new(64, 1.0, 7)?.with_sigma_gamma(0.2);
//! let series = simulate_random_walk(&params, 20_000, 1)?;
//! let steps = db_steps(&series, DEFAULT_FLOOR)?;
//! let (fit, _hist) = fit_pvp(&steps.steps, Binning::default())?;
//! assert!(fit.r2 > 0.9);
//! # Ok::<(), xtwalk::Error>(())
//! ```

pub mod classify;
pub mod distfit;
mod error;
pub mod io;
pub mod resilience;
pub mod rng;
mod series;
pub mod simulate;
pub mod spectral;
pub mod steps;

pub use error::{Error, Result};
pub use series::{ComplexSeries, Domain, XtSeries};
