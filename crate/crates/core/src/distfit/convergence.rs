use std::f64::consts::TAU;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{self, stream};
use crate::simulate::{wrap_phase, ModelParams};

use super::ks_statistic;

/// Runs `n_phases` independent phase walks for `t` steps and measures how far
/// the phases modulo `2pi` are from uniform.
///
/// Walk `i` starts at `params.phi0[i % n_pm]` and adds `t` increments drawn
/// from `N(mu_gamma, sigma_gamma^2)`. Returns the KS statistic against
/// `U(0, 2pi)`.
pub fn phase_uniformity_check(
    params: &ModelParams,
    t: usize,
    n_phases: usize,
    seed: u64,
) -> Result<f64> {
    params.validate()?;
    if n_phases < 2 {
        return Err(Error::invalid("need at least 2 phases"));
    }
    let mut rng = rng::seeded(seed, stream::INCREMENTS);
    let phases: Vec<f64> = (0..n_phases)
        .map(|i| {
            let mut phi = params.phi0[i % params.n_pm];
            for _ in 0..t {
                let z: f64 = StandardNormal.sample(&mut rng);
                phi += params.mu_gamma + params.sigma_gamma * z;
            }
            wrap_phase(phi)
        })
        .collect();
    ks_statistic(&phases, |x| (x / TAU).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_point_mass_never_converges() {
        let p = ModelParams::new(1, 1.0, 0).unwrap().with_phases(vec![1.0]);
        for t in [0, 5, 50] {
            assert!(phase_uniformity_check(&p, t, 1000, 3).unwrap() >= 0.5);
        }
    }

    #[test]
    fn uniform_start_is_uniform() {
        let p = ModelParams::new(100_000, 1.0, 42).unwrap();
        assert!(phase_uniformity_check(&p, 0, 100_000, 1).unwrap() < 0.006);
    }
}
