use fowt_core::environment::{
    peak_frequency, pierson_moskowitz_psd, synthesize_waves, synthesize_wind, von_karman_psd, WaveComponent,
    WaveField, WaveSpec, WindSpec,
};
use fowt_core::fft::fft_in_place;
use fowt_core::math::gauss8;
use fowt_core::rng::{stream_seed, Stream};
use proptest::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

const G: f64 = 9.81;

/// Composite 8-point Gauss over `n` equal panels.
fn integrate(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| gauss8(a + i as f64 * h, a + (i + 1) as f64 * h, &f)).sum()
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (m, x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n)
}

fn wind(seed: u64) -> WindSpec {
    WindSpec { mean_speed: 20.0, sigma: 2.0, length_scale: 147.0, dt: 0.05, duration: 1500.0, seed }
}

#[test]
fn von_karman_closed_forms() {
    let s = wind(0);
    let lim = 4.0 * s.sigma * s.sigma * s.length_scale / s.mean_speed;
    assert!((von_karman_psd(0.0, &s) - lim).abs() <= 1e-14 * lim);
    let calm = WindSpec { sigma: 0.0, ..s };
    for f in [0.0, 0.01, 1.0, 10.0] {
        assert_eq!(von_karman_psd(f, &calm), 0.0);
    }
}

#[test]
fn von_karman_integrates_to_variance() {
    let s = wind(0);
    // substitute f = u/(1-u) to cover [0, ∞)
    let total = integrate(0.0, 1.0, 400, |u| {
        if u >= 1.0 {
            0.0
        } else {
            let f = u / (1.0 - u);
            von_karman_psd(f, &s) / ((1.0 - u) * (1.0 - u))
        }
    });
    let var = s.sigma * s.sigma;
    assert!((total - var).abs() < 0.02 * var, "∫S = {total}");
}

#[test]
fn calm_wind_is_constant() {
    let s = WindSpec { sigma: 0.0, ..wind(3) };
    let w = synthesize_wind(&s).unwrap();
    assert_eq!(w.speed.len(), s.samples());
    assert!(w.speed.iter().all(|&v| v == 20.0));
}

#[test]
fn wind_is_deterministic_per_seed() {
    let a = synthesize_wind(&wind(42)).unwrap();
    let b = synthesize_wind(&wind(42)).unwrap();
    let c = synthesize_wind(&wind(43)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.speed, c.speed);
    assert_eq!(a.speed.len(), 30001);
}

#[test]
fn wind_duration_must_cover_ten_time_scales() {
    let s = WindSpec { duration: 60.0, ..wind(0) };
    assert!(synthesize_wind(&s).is_err());
    assert!(synthesize_wind(&WindSpec { dt: 0.0, ..wind(0) }).is_err());
}

#[test]
fn wind_statistics_over_twenty_seeds() {
    let spec = wind(0);
    let n = spec.samples();
    let m = n.next_power_of_two();
    let df = 1.0 / (m as f64 * spec.dt);
    let nyquist = 0.5 / spec.dt;
    let target = integrate(df, nyquist, 2000, |f| von_karman_psd(f, &spec));
    let mut var_sum = 0.0;
    for k in 0..20 {
        let w = synthesize_wind(&WindSpec { seed: stream_seed(7, k, Stream::Wind), ..spec }).unwrap();
        let (mean, var) = mean_var(&w.speed);
        assert!((mean - 20.0).abs() < 0.5, "seed {k}: mean {mean}");
        var_sum += var;
    }
    let avg = var_sum / 20.0;
    assert!((avg - target).abs() < 0.15 * target, "variance {avg} vs {target}");
}

#[test]
fn wind_periodogram_matches_spectrum() {
    let spec = WindSpec { dt: 0.25, duration: 4095.0 * 0.25, ..wind(0) };
    let n = spec.samples();
    assert_eq!(n, 4096);
    let df = 1.0 / (n as f64 * spec.dt);
    let mut power = vec![0.0; n / 2];
    for k in 0..10 {
        let w = synthesize_wind(&WindSpec { seed: 100 + k, ..spec }).unwrap();
        let mut buf: Vec<Complex<f64>> = w.speed.iter().map(|v| Complex::new(v - 20.0, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        for (p, c) in power.iter_mut().zip(&buf) {
            *p += 2.0 * c.norm_sqr() * spec.dt / n as f64 / 10.0;
        }
    }
    // band averages over octave-ish bands
    let mut lo = 2;
    while lo < n / 4 {
        let hi = lo * 2;
        let est: f64 = power[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
        let model: f64 = (lo..hi).map(|i| von_karman_psd(i as f64 * df, &spec)).sum::<f64>() / (hi - lo) as f64;
        assert!((est / model - 1.0).abs() < 0.2, "bins {lo}..{hi}: {est} vs {model}");
        lo = hi;
    }
}

#[test]
fn fft_matches_rustfft() {
    let n = 256;
    let re0: Vec<f64> = (0..n).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.3).collect();
    let im0: Vec<f64> = (0..n).map(|i| ((i * 13 % 7) as f64 - 3.0) * 0.1).collect();
    for inverse in [false, true] {
        let (mut re, mut im) = (re0.clone(), im0.clone());
        fft_in_place(&mut re, &mut im, inverse);
        let mut buf: Vec<Complex<f64>> = re0.iter().zip(&im0).map(|(&a, &b)| Complex::new(a, b)).collect();
        let mut planner = FftPlanner::new();
        let plan = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
        plan.process(&mut buf);
        for i in 0..n {
            assert!((re[i] - buf[i].re).abs() < 1e-11 && (im[i] - buf[i].im).abs() < 1e-11);
        }
    }
}

#[test]
fn pm_peak_and_decay() {
    let spec = WaveSpec::new(20.0, G, 0);
    let wp = peak_frequency(20.0, G);
    assert!((wp - 0.430).abs() < 1e-3);
    assert!((wp - 0.877 * G / 20.0).abs() < 1e-3 * wp);
    // grid search for the maximum
    let best = (1..20000)
        .map(|i| i as f64 * 1e-4)
        .max_by(|a, b| pierson_moskowitz_psd(*a, &spec).total_cmp(&pierson_moskowitz_psd(*b, &spec)))
        .unwrap();
    assert!((best - wp).abs() < 2e-4);
    assert!(pierson_moskowitz_psd(1e3, &spec) < 1e-12);
    assert!(pierson_moskowitz_psd(1e3, &spec) >= 0.0);
}

#[test]
fn single_component_amplitude() {
    let mut spec = WaveSpec::new(20.0, G, 5);
    spec.components = 1;
    let f = synthesize_waves(&spec).unwrap();
    let c = f.components[0];
    let dw = spec.band.1 - spec.band.0;
    assert!((c.amplitude - (2.0 * pierson_moskowitz_psd(c.omega, &spec) * dw).sqrt()).abs() < 1e-12);
}

#[test]
fn waves_deterministic_and_dispersive() {
    let spec = WaveSpec::new(20.0, G, 9);
    let a = synthesize_waves(&spec).unwrap();
    assert_eq!(a, synthesize_waves(&spec).unwrap());
    assert_ne!(a, synthesize_waves(&WaveSpec { seed: 10, ..spec }).unwrap());
    assert_eq!(a.components.len(), 128);
    for c in &a.components {
        assert!(c.amplitude >= 0.0);
        assert!((c.omega * c.omega - G * c.wavenumber).abs() < 1e-12 * c.omega * c.omega);
    }
}

#[test]
fn wave_elevation_variance_matches_spectrum() {
    let spec = WaveSpec::new(20.0, G, 0);
    let target = integrate(spec.band.0, spec.band.1, 400, |w| pierson_moskowitz_psd(w, &spec));
    let mut var = 0.0;
    let mut mean = 0.0;
    let seeds = 10;
    for k in 0..seeds {
        let f = synthesize_waves(&WaveSpec { seed: k, ..spec }).unwrap();
        let xs: Vec<f64> = (0..40000).map(|i| f.elevation(0.0, i as f64 * 0.5)).collect();
        let (m, v) = mean_var(&xs);
        var += v / seeds as f64;
        mean += m / seeds as f64;
        assert!((f.variance() - target).abs() < 0.05 * target);
    }
    assert!((var - target).abs() < 0.05 * target, "{var} vs {target}");
    assert!(mean.abs() < 0.05 * target.sqrt(), "mean {mean}");
}

#[test]
fn still_field_is_zero() {
    let f = WaveField::still();
    let k = f.kinematics(3.0, -2.0, 17.0);
    assert_eq!(k.elevation, 0.0);
    assert_eq!(k.velocity, [0.0; 2]);
    assert_eq!(k.acceleration, [0.0; 2]);
    let zero = WaveField {
        components: vec![WaveComponent { amplitude: 0.0, omega: 0.5, wavenumber: 0.025, phase: 1.0 }],
        spec: None,
    };
    assert!(zero.is_still());
    assert_eq!(zero.elevation(1.0, 2.0), 0.0);
}

fn single(a: f64, omega: f64, phase: f64) -> WaveField {
    WaveField { components: vec![WaveComponent { amplitude: a, omega, wavenumber: omega * omega / G, phase }], spec: None }
}

#[test]
fn kinematics_decay_with_depth() {
    let f = single(1.5, 0.6, 0.3);
    let k = f.kinematics(0.0, -1e4, 1.0);
    assert!(k.velocity[0].abs() < 1e-100 && k.velocity[1].abs() < 1e-100);
}

proptest! {
    #[test]
    fn surface_vertical_velocity_is_elevation_rate(
        a in 0.1f64..3.0, omega in 0.2f64..2.0, phase in 0.0f64..6.28, x in -50.0f64..50.0, t in 0.0f64..100.0,
    ) {
        let f = single(a, omega, phase);
        let h = 1e-4 / omega;
        let rate = (f.elevation(x, t + h) - f.elevation(x, t - h)) / (2.0 * h);
        let w = f.kinematics(x, 0.0, t).velocity[1];
        prop_assert!((rate - w).abs() <= 1e-4 * a * omega);
    }

    #[test]
    fn accelerations_are_velocity_rates(
        a in 0.1f64..3.0, omega in 0.2f64..2.0, phase in 0.0f64..6.28, z in -30.0f64..0.0, t in 0.0f64..100.0,
    ) {
        let f = single(a, omega, phase);
        let h = 1e-4 / omega;
        let (p, m) = (f.kinematics(0.0, z, t + h), f.kinematics(0.0, z, t - h));
        let k = f.kinematics(0.0, z, t);
        let scale = a * omega * omega;
        for i in 0..2 {
            prop_assert!(((p.velocity[i] - m.velocity[i]) / (2.0 * h) - k.acceleration[i]).abs() <= 1e-4 * scale);
        }
    }
}

#[test]
fn stream_seeds_are_independent() {
    let a = stream_seed(1, 0, Stream::Wind);
    assert_ne!(a, stream_seed(1, 0, Stream::Wave));
    assert_ne!(a, stream_seed(1, 1, Stream::Wind));
    assert_ne!(a, stream_seed(2, 0, Stream::Wind));
    assert_eq!(a, stream_seed(1, 0, Stream::Wind));
}
