use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::fft::fft_in_place;
use crate::math::next_pow2;
use crate::rng::UniformStream;
use crate::Error;

/// Hub-height turbulence description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindSpec {
    /// Mean wind speed, m/s.
    pub mean_speed: f64,
    /// Longitudinal turbulence standard deviation, m/s.
    pub sigma: f64,
    /// Integral length scale, m.
    pub length_scale: f64,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
}

impl WindSpec {
    /// 20 m/s with IEC class B intensity (`σ = 0.14·(0.75·U + 5.6)`), 147 m length scale.
    pub fn new(mean_speed: f64, duration: f64, seed: u64) -> Self {
        Self {
            mean_speed,
            sigma: 0.14 * (0.75 * mean_speed + 5.6),
            length_scale: 147.0,
            dt: 0.01,
            duration,
            seed,
        }
    }

    pub fn samples(&self) -> usize {
        (self.duration / self.dt).round() as usize + 1
    }

    pub fn validate(&self) -> Result<(), Error> {
        let ok = self.mean_speed > 0.0
            && self.sigma >= 0.0
            && self.length_scale > 0.0
            && self.dt > 0.0
            && self.duration >= self.dt
            && [self.mean_speed, self.sigma, self.length_scale, self.dt, self.duration].iter().all(|v| v.is_finite());
        if !ok {
            return Err(Error::Spec(format!("invalid wind spec {self:?}")));
        }
        Ok(())
    }
}

/// Von Kármán longitudinal spectrum, one-sided, (m/s)²/Hz.
pub fn von_karman_psd(f: f64, spec: &WindSpec) -> f64 {
    let lu = spec.length_scale / spec.mean_speed;
    let x = f * lu;
    4.0 * spec.sigma * spec.sigma * lu / (1.0 + 70.8 * x * x).powf(5.0 / 6.0)
}

/// Uniformly sampled wind speed series.
#[derive(Debug, Clone, PartialEq)]
pub struct WindSeries {
    pub dt: f64,
    pub speed: Vec<f64>,
    pub spec: Option<WindSpec>,
}

impl WindSeries {
    pub fn constant(speed: f64, dt: f64, duration: f64) -> Self {
        let n = (duration / dt).round() as usize + 1;
        Self { dt, speed: vec![speed; n.max(2)], spec: None }
    }

    pub fn duration(&self) -> f64 {
        (self.speed.len() - 1) as f64 * self.dt
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    /// Linear interpolation in time; holds the end values outside the series.
    pub fn at(&self, t: f64) -> f64 {
        let n = self.speed.len();
        if n == 1 || t <= 0.0 {
            return self.speed[0];
        }
        let x = t / self.dt;
        let i = x.floor() as usize;
        if i >= n - 1 {
            return self.speed[n - 1];
        }
        let frac = x - i as f64;
        if frac == 0.0 {
            self.speed[i]
        } else {
            self.speed[i] + frac * (self.speed[i + 1] - self.speed[i])
        }
    }
}

/// Spectral synthesis with random phases through an inverse FFT.
///
/// The series length is rounded up to a power of two for the transform and
/// truncated afterwards; each positive frequency bin carries amplitude
/// `sqrt(2·S(f)·Δf)`.
pub fn synthesize_wind(spec: &WindSpec) -> Result<WindSeries, Error> {
    spec.validate()?;
    let min_duration = 10.0 * spec.length_scale / spec.mean_speed;
    if spec.duration < min_duration {
        return Err(Error::Spec(format!(
            "wind duration {} s is shorter than ten integral time scales ({min_duration} s)",
            spec.duration
        )));
    }
    let n = spec.samples();
    let m = next_pow2(n);
    let df = 1.0 / (m as f64 * spec.dt);
    let mut re = vec![0.0; m];
    let mut im = vec![0.0; m];
    let mut rng = UniformStream::new(spec.seed);
    for k in 1..m / 2 {
        let amp = (2.0 * von_karman_psd(k as f64 * df, spec) * df).sqrt();
        let phase = 2.0 * PI * rng.next_f64();
        let (s, c) = phase.sin_cos();
        re[k] = 0.5 * amp * c;
        im[k] = 0.5 * amp * s;
        re[m - k] = re[k];
        im[m - k] = -im[k];
    }
    fft_in_place(&mut re, &mut im, true);
    let speed = re[..n].iter().map(|v| spec.mean_speed + v).collect();
    Ok(WindSeries { dt: spec.dt, speed, spec: Some(*spec) })
}
