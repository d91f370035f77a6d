use rand_distr::{Distribution, StandardNormal};
use xtwalk::rng::seeded;
use xtwalk::simulate::{gaussian_random_walk, simulate_baseline, simulate_random_walk, ModelParams};
use xtwalk::spectral::{autocorrelation, autocovariance, fft_magnitude, loglog_slope, psd, Detrend, Spectrum};
use xtwalk::{Domain, XtSeries};

fn noise(n: usize, seed: u64) -> XtSeries {
    let mut rng = seeded(seed, 0);
    let v = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    XtSeries::new(1.0, v, Domain::Db).unwrap()
}

/// Mean periodogram value in each decade `[10^k, 10^(k+1)) * f0`.
fn decade_means(spec: &Spectrum, f0: f64, decades: usize) -> Vec<f64> {
    (0..decades)
        .map(|k| {
            let (lo, hi) = (f0 * 10f64.powi(k as i32), f0 * 10f64.powi(k as i32 + 1));
            let band: Vec<f64> = spec
                .frequencies()
                .zip(&spec.values)
                .filter(|(f, _)| *f >= lo && *f < hi)
                .map(|(_, &v)| v)
                .collect();
            band.iter().sum::<f64>() / band.len() as f64
        })
        .collect()
}

#[test]
fn parseval_holds_for_odd_and_even_lengths() {
    for n in [1000, 1001, 4096] {
        let s = noise(n, n as u64);
        let mag = fft_magnitude(&s).unwrap().values;
        // one-sided: every bin except DC (and Nyquist for even n) stands for two
        let spectral: f64 = mag
            .iter()
            .enumerate()
            .map(|(k, m)| if k == 0 || (n % 2 == 0 && k == n / 2) { m * m } else { 2.0 * m * m })
            .sum::<f64>()
            / n as f64;
        let energy: f64 = s.values().iter().map(|v| v * v).sum();
        assert!(((spectral - energy) / energy).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn constant_and_sinusoid_spectra() {
    let c = XtSeries::new(1.0, vec![2.5; 64], Domain::Db).unwrap();
    let mag = fft_magnitude(&c).unwrap().values;
    assert!((mag[0] - 64.0 * 2.5).abs() < 1e-10);
    assert!(mag[1..].iter().all(|m| m.abs() < 1e-10));

    let k = 5;
    let v = (0..128).map(|t| (2.0 * std::f64::consts::PI * k as f64 * t as f64 / 128.0).cos()).collect();
    let mag = fft_magnitude(&XtSeries::new(1.0, v, Domain::Db).unwrap()).unwrap().values;
    for (bin, m) in mag.iter().enumerate() {
        if bin == k {
            assert!((m - 64.0).abs() < 1e-9);
        } else {
            assert!(m.abs() < 1e-9, "bin {bin}: {m}");
        }
    }
}

#[test]
fn white_noise_psd_is_flat() {
    let s = noise(1_000_000, 1);
    let spec = psd(&s, Detrend::RemoveMean).unwrap();
    let means = decade_means(&spec, 1e-4, 3);
    let db: Vec<f64> = means.iter().map(|m| 10.0 * (m / means[0]).log10()).collect();
    assert!(db.iter().all(|d| d.abs() <= 1.0), "decade levels {db:?} dB");
}

#[test]
fn walk_psd_decreases_and_baseline_does_not() {
    let gwalk = gaussian_random_walk(1 << 18, 1.0, 2).unwrap();
    let means = decade_means(&psd(&gwalk, Detrend::RemoveMean).unwrap(), 1e-4, 3);
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");

    let params = ModelParams::new(64, 1.0, 3).unwrap().with_sigma_gamma(0.05);
    let walk = simulate_random_walk(&params, 1 << 17, 4).unwrap();
    let means = decade_means(&psd(&walk, Detrend::RemoveMean).unwrap(), 1e-3, 2);
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");

    let baseline = simulate_baseline(&params, 1 << 17, 5).unwrap();
    let means = decade_means(&psd(&baseline, Detrend::RemoveMean).unwrap(), 1e-3, 2);
    let spread = 10.0 * (means[1] / means[0]).log10();
    assert!(spread.abs() < 1.0, "baseline decade spread {spread} dB");
}

#[test]
fn mean_removal_only_changes_dc() {
    let s = noise(2000, 6);
    let shifted = XtSeries::new(1.0, s.values().iter().map(|v| v + 40.0).collect(), Domain::Db).unwrap();
    let (a, b) = (psd(&s, Detrend::RemoveMean).unwrap(), psd(&shifted, Detrend::RemoveMean).unwrap());
    for (x, y) in a.values.iter().zip(&b.values).skip(1) {
        assert!((x - y).abs() < 1e-9 * x.abs().max(1e-12));
    }
    assert_eq!(a.values[0], 0.0);
}

#[test]
fn constant_series_with_mean_removed_is_zero() {
    let c = XtSeries::new(0.1, vec![3.0; 100], Domain::Db).unwrap();
    let spec = psd(&c, Detrend::RemoveMean).unwrap();
    assert!(spec.values.iter().all(|&v| v == 0.0));
    assert!(!spec.normalized);
}

#[test]
fn power_law_slopes_are_exact() {
    let spectrum = |exponent: f64| Spectrum {
        df: 0.01,
        values: (0..1000).map(|k| if k == 0 { 1.0 } else { (k as f64 * 0.01).powf(exponent) }).collect(),
        normalized: false,
        kind: xtwalk::spectral::SpectrumKind::Psd,
        n: 1998,
    };
    assert!((loglog_slope(&spectrum(-2.0), 0.05, 5.0).unwrap() + 2.0).abs() < 1e-6);
    assert!(loglog_slope(&spectrum(0.0), 0.05, 5.0).unwrap().abs() < 1e-12);
}

#[test]
fn autocorrelation_separates_noise_from_walks() {
    let iid = noise(100_000, 7);
    assert!(autocorrelation(&iid, 1).unwrap()[1].abs() < 0.02);
    let walk = gaussian_random_walk(100_000, 1.0, 8).unwrap();
    assert!(autocorrelation(&walk, 1).unwrap()[1] > 0.99);
}

#[test]
fn autocovariance_at_lag_zero_is_population_variance() {
    let s = noise(5000, 9);
    let n = s.len() as f64;
    let mean = s.values().iter().sum::<f64>() / n;
    let var = s.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let acv = autocovariance(&s, 10).unwrap();
    assert!((acv[0] - var).abs() < 1e-12 * var);
    let acf = autocorrelation(&s, 50).unwrap();
    assert_eq!(acf[0], 1.0);
    assert!(acf.iter().all(|r| r.abs() <= 1.0 + 1e-12));
}
