//! Crosstalk field and intensity generators.
//!
//! The target-core field is a sum of one unit phasor per phase-matching point
//! (PMP), scaled by the coupling coefficient:
//!
//! ```text
//! A_t = -j * chi * sum_l exp(-j * phi_{l,t})
//! ```
//!
//! The *baseline* model redraws every `phi_{l,t}` from `U(0, 2pi)` at each
//! sample, producing i.i.d. intensities. The *random-walk* model starts from
//! `phi_{l,0}` and adds an independent `N(mu, sigma^2)` increment to every
//! phase at every step, producing a time-correlated series that converges in
//! distribution to the baseline.
//!
//! Each polarization is an independent field process; the reported intensity
//! is the sum of `|A|^2` over polarizations, which gives the four degrees of
//! freedom of the chi-squared law when `n_pol = 2`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{self, stream, Rng};
use crate::series::{ComplexSeries, Domain, XtSeries};

/// How initial PMP phases are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseInit {
    UniformRandom,
    Provided(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Coupling coefficient per phase-matching point.
    pub chi: f64,
    /// Number of phase-matching points.
    pub n_pm: usize,
    /// Initial phase of each PMP, radians. Shared by all polarizations.
    pub phi0: Vec<f64>,
    /// Mean of the per-step phase increment, radians.
    pub mu_gamma: f64,
    /// Standard deviation of the per-step phase increment, radians.
    pub sigma_gamma: f64,
    /// Number of independent polarization processes (1 or 2).
    pub n_pol: usize,
}

impl ModelParams {
    /// Two polarizations, uniform-random initial phases drawn from `seed`,
    /// no phase increments.
    pub fn new(n_pm: usize, chi: f64, seed: u64) -> Result<Self> {
        let phi0 = init_phases(n_pm, &PhaseInit::UniformRandom, seed)?;
        let params = Self {
            chi,
            n_pm,
            phi0,
            mu_gamma: 0.0,
            sigma_gamma: 0.0,
            n_pol: 2,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_sigma_gamma(mut self, sigma_gamma: f64) -> Self {
        self.sigma_gamma = sigma_gamma;
        self
    }

    pub fn with_mu_gamma(mut self, mu_gamma: f64) -> Self {
        self.mu_gamma = mu_gamma;
        self
    }

    pub fn with_n_pol(mut self, n_pol: usize) -> Self {
        self.n_pol = n_pol;
        self
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = chi;
        self
    }

    /// Replaces the initial phases; `n_pm` follows the new length.
    pub fn with_phases(mut self, phi0: Vec<f64>) -> Self {
        self.n_pm = phi0.len();
        self.phi0 = phi0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pm == 0 {
            return Err(Error::invalid("n_pm must be >= 1"));
        }
        if self.phi0.len() != self.n_pm {
            return Err(Error::invalid(format!(
                "phi0 has {} entries but n_pm = {}",
                self.phi0.len(),
                self.n_pm
            )));
        }
        if !(self.chi >= 0.0 && self.chi.is_finite()) {
            return Err(Error::invalid(format!("chi must be >= 0, got {}", self.chi)));
        }
        if !(self.sigma_gamma >= 0.0 && self.sigma_gamma.is_finite()) {
            return Err(Error::invalid(format!(
                "sigma_gamma must be >= 0, got {}",
                self.sigma_gamma
            )));
        }
        if !self.mu_gamma.is_finite() {
            return Err(Error::invalid("mu_gamma must be finite"));
        }
        if self.phi0.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("initial phases must be finite"));
        }
        if !matches!(self.n_pol, 1 | 2) {
            return Err(Error::invalid(format!("n_pol must be 1 or 2, got {}", self.n_pol)));
        }
        Ok(())
    }
}

/// Folds an angle into `[0, 2pi)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid of a tiny negative value rounds up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

pub fn init_phases(n_pm: usize, mode: &PhaseInit, seed: u64) -> Result<Vec<f64>> {
    if n_pm == 0 {
        return Err(Error::invalid("n_pm must be >= 1"));
    }
    match mode {
        PhaseInit::UniformRandom => {
            let mut rng = rng::seeded(seed, stream::PHASES);
            Ok((0..n_pm).map(|_| rng.random::<f64>() * TAU).collect())
        }
        PhaseInit::Provided(list) => {
            if list.len() != n_pm {
                return Err(Error::invalid(format!(
                    "expected {n_pm} initial phases, got {}",
                    list.len()
                )));
            }
            if list.iter().any(|p| !p.is_finite()) {
                return Err(Error::invalid("initial phases must be finite"));
            }
            Ok(list.iter().map(|&p| wrap_phase(p)).collect())
        }
    }
}

/// `-j * chi * sum exp(-j phi)`.
fn field(chi: f64, phases: &[f64]) -> Complex64 {
    let (mut sum_cos, mut sum_sin) = (0.0, 0.0);
    for &phi in phases {
        let (s, c) = phi.sin_cos();
        sum_cos += c;
        sum_sin += s;
    }
    Complex64::new(-chi * sum_sin, -chi * sum_cos)
}

fn intensity(chi: f64, phases: &[f64]) -> f64 {
    let (mut sum_cos, mut sum_sin) = (0.0, 0.0);
    for &phi in phases {
        let (s, c) = phi.sin_cos();
        sum_cos += c;
        sum_sin += s;
    }
    chi * chi * (sum_cos * sum_cos + sum_sin * sum_sin)
}

fn draw_uniform_phases(rng: &mut Rng, buf: &mut [f64]) {
    for phi in buf.iter_mut() {
        *phi = rng.random::<f64>() * TAU;
    }
}

/// One draw of the baseline field for a single polarization.
pub fn amplitude_baseline(params: &ModelParams, seed: u64) -> Result<Complex64> {
    params.validate()?;
    let mut rng = rng::seeded(seed, stream::BASELINE);
    let mut phases = vec![0.0; params.n_pm];
    draw_uniform_phases(&mut rng, &mut phases);
    Ok(field(params.chi, &phases))
}

/// I.i.d. intensity samples under the uniform-phase model.
///
/// The returned series has `dt = 1`; relabel with [`XtSeries::with_dt`].
pub fn simulate_baseline(params: &ModelParams, n_samples: usize, seed: u64) -> Result<XtSeries> {
    params.validate()?;
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be >= 1"));
    }
    let mut rng = rng::seeded(seed, stream::BASELINE);
    let mut phases = vec![0.0; params.n_pm];
    let values = (0..n_samples)
        .map(|_| {
            (0..params.n_pol)
                .map(|_| {
                    draw_uniform_phases(&mut rng, &mut phases);
                    intensity(params.chi, &phases)
                })
                .sum()
        })
        .collect();
    Ok(XtSeries::from_parts(1.0, values, Domain::LinearPower))
}

/// Output of [`simulate_random_walk_fields`].
#[derive(Debug, Clone)]
pub struct WalkOutput {
    pub intensity: XtSeries,
    /// One field series per polarization.
    pub fields: Vec<ComplexSeries>,
}

fn run_walk(
    params: &ModelParams,
    n_samples: usize,
    seed: u64,
    mut on_fields: impl FnMut(usize, Complex64),
) -> Result<Vec<f64>> {
    params.validate()?;
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be >= 1"));
    }
    let mut rng = rng::seeded(seed, stream::INCREMENTS);
    let mut phases: Vec<Vec<f64>> = vec![params.phi0.clone(); params.n_pol];
    let mut values = Vec::with_capacity(n_samples);
    for t in 0..n_samples {
        let mut total = 0.0;
        for (pol, set) in phases.iter_mut().enumerate() {
            if t > 0 {
                for phi in set.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *phi = wrap_phase(*phi + params.mu_gamma + params.sigma_gamma * z);
                }
            }
            let a = field(params.chi, set);
            on_fields(pol, a);
            total += a.norm_sqr();
        }
        values.push(total);
    }
    Ok(values)
}

/// Time-correlated intensity series under the random-walk phase model.
///
/// Sample 0 is computed from `phi0` alone; sample `t` uses the sum of `t`
/// increments. Every PMP of every polarization walks independently.
pub fn simulate_random_walk(params: &ModelParams, n_samples: usize, seed: u64) -> Result<XtSeries> {
    let values = run_walk(params, n_samples, seed, |_, _| {})?;
    Ok(XtSeries::from_parts(1.0, values, Domain::LinearPower))
}

/// Like [`simulate_random_walk`], also returning the complex field of each
/// polarization.
pub fn simulate_random_walk_fields(
    params: &ModelParams,
    n_samples: usize,
    seed: u64,
) -> Result<WalkOutput> {
    let mut fields: Vec<Vec<Complex64>> = vec![Vec::with_capacity(n_samples); params.n_pol.max(1)];
    let values = run_walk(params, n_samples, seed, |pol, a| fields[pol].push(a))?;
    Ok(WalkOutput {
        intensity: XtSeries::from_parts(1.0, values, Domain::LinearPower),
        fields: fields
            .into_iter()
            .map(|values| ComplexSeries { dt: 1.0, values })
            .collect(),
    })
}

/// Cumulative sum of i.i.d. `N(0, step_sigma^2)` increments starting at 0.
///
/// Tagged as a dB series: it models a level that performs a plain random walk.
pub fn gaussian_random_walk(n: usize, step_sigma: f64, seed: u64) -> Result<XtSeries> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if !(step_sigma >= 0.0 && step_sigma.is_finite()) {
        return Err(Error::invalid(format!("step_sigma must be >= 0, got {step_sigma}")));
    }
    let mut rng = rng::seeded(seed, stream::GAUSSIAN_WALK);
    let mut level = 0.0;
    let mut values = Vec::with_capacity(n);
    values.push(level);
    for _ in 1..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        level += step_sigma * z;
        values.push(level);
    }
    Ok(XtSeries::from_parts(1.0, values, Domain::Db))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n_pm: usize, chi: f64) -> ModelParams {
        ModelParams::new(n_pm, chi, 11).unwrap()
    }

    #[test]
    fn provided_phases_pass_through() {
        let p = init_phases(3, &PhaseInit::Provided(vec![0.0, 1.0, 2.0]), 0).unwrap();
        assert_eq!(p, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn provided_phases_length_mismatch() {
        let err = init_phases(3, &PhaseInit::Provided(vec![0.0, 1.0]), 0).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn random_phases_are_seeded() {
        let a = init_phases(5, &PhaseInit::UniformRandom, 7).unwrap();
        let b = init_phases(5, &PhaseInit::UniformRandom, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| (0.0..TAU).contains(p)));
        assert_ne!(a, init_phases(5, &PhaseInit::UniformRandom, 8).unwrap());
    }

    #[test]
    fn random_phase_mean_is_pi() {
        let n = 10_000;
        let p = init_phases(n, &PhaseInit::UniformRandom, 1).unwrap();
        let mean = p.iter().sum::<f64>() / n as f64;
        let tol = 3.0 * TAU / (12.0 * n as f64).sqrt();
        assert!((mean - std::f64::consts::PI).abs() < tol, "mean {mean}");
    }

    #[test]
    fn wrap_phase_stays_in_range() {
        assert_eq!(wrap_phase(-1e-300), 0.0);
        assert!((wrap_phase(-1.0) - (TAU - 1.0)).abs() < 1e-15);
        assert!((wrap_phase(7.0) - (7.0 - TAU)).abs() < 1e-15);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(params(3, 1.0).with_n_pol(3).validate().is_err());
        assert!(params(3, 1.0).with_sigma_gamma(-0.1).validate().is_err());
        assert!(params(3, 1.0).with_chi(-1.0).validate().is_err());
        let mut p = params(3, 1.0);
        p.phi0.pop();
        assert!(p.validate().is_err());
    }

    #[test]
    fn zero_coupling_gives_zero_field() {
        let a = amplitude_baseline(&params(10, 0.0), 3).unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));
        let s = simulate_baseline(&params(10, 0.0), 50, 3).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_phasor_has_modulus_chi() {
        let a = amplitude_baseline(&params(1, 0.37), 5).unwrap();
        assert!((a.norm() - 0.37).abs() < 1e-15);
        let s = simulate_baseline(&params(1, 0.37), 100, 5).unwrap();
        let expected = 2.0 * 0.37 * 0.37;
        assert!(s.values().iter().all(|&v| (v - expected).abs() < 1e-15));
    }

    #[test]
    fn baseline_mean_intensity_matches_pmp_count() {
        // E|sum exp(j phi)|^2 = N_PM for i.i.d. uniform phases
        let p = params(100, 1.0).with_n_pol(1);
        let n = 100_000;
        let s = simulate_baseline(&p, n, 21).unwrap();
        let mean = s.values().iter().sum::<f64>() / n as f64;
        let var = s.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 100.0).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn baseline_scale_law() {
        let p = params(20, 0.8);
        let base = simulate_baseline(&p, 500, 4).unwrap();
        let doubled = simulate_baseline(&p.clone().with_chi(1.6), 500, 4).unwrap();
        for (a, b) in base.values().iter().zip(doubled.values()) {
            assert_eq!(4.0 * a, *b);
        }
        let scaled = simulate_baseline(&p.clone().with_chi(0.8 * 3.7), 500, 4).unwrap();
        for (a, b) in base.values().iter().zip(scaled.values()) {
            assert!((3.7 * 3.7 * a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }
    }

    #[test]
    fn frozen_walk_is_constant() {
        let p = params(30, 1.0);
        let s = simulate_random_walk(&p, 200, 9).unwrap();
        let first = s.values()[0];
        assert!(s.values().iter().all(|&v| v == first));
    }

    #[test]
    fn walk_starts_from_initial_phases() {
        let p = params(30, 0.5).with_sigma_gamma(0.4);
        let expected = 2.0 * intensity(0.5, &p.phi0);
        for seed in 0..4 {
            let s = simulate_random_walk(&p, 10, seed).unwrap();
            assert_eq!(s.values()[0], expected);
        }
    }

    #[test]
    fn walk_fields_match_intensity() {
        let p = params(12, 0.3).with_sigma_gamma(0.2);
        let out = simulate_random_walk_fields(&p, 64, 2).unwrap();
        let plain = simulate_random_walk(&p, 64, 2).unwrap();
        assert_eq!(out.intensity, plain);
        assert_eq!(out.fields.len(), 2);
        for t in 0..64 {
            let sum: f64 = out.fields.iter().map(|f| f.values[t].norm_sqr()).sum();
            assert_eq!(sum, plain.values()[t]);
        }
    }

    #[test]
    fn walk_is_deterministic() {
        let p = params(16, 1.0).with_sigma_gamma(0.3);
        assert_eq!(
            simulate_random_walk(&p, 300, 5).unwrap(),
            simulate_random_walk(&p, 300, 5).unwrap()
        );
        assert_ne!(
            simulate_random_walk(&p, 300, 5).unwrap(),
            simulate_random_walk(&p, 300, 6).unwrap()
        );
    }

    #[test]
    fn gaussian_walk_zero_sigma() {
        let s = gaussian_random_walk(100, 0.0, 1).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gaussian_walk_recovers_increment_sigma() {
        let s = gaussian_random_walk(100_000, 0.7, 3).unwrap();
        let d: Vec<f64> = s.values().windows(2).map(|w| w[1] - w[0]).collect();
        let m = d.iter().sum::<f64>() / d.len() as f64;
        let sd = (d.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (d.len() - 1) as f64).sqrt();
        assert!((sd / 0.7 - 1.0).abs() < 0.05, "sd {sd}");
        assert_eq!(s.values()[0], 0.0);
    }
}
