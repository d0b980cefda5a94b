use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::rng::UniformStream;
use crate::Error;

pub const PM_ALPHA: f64 = 8.1e-3;
pub const PM_BETA: f64 = 0.74;

/// Upper bound on harmonics per field.
pub const MAX_COMPONENTS: usize = 512;

/// Fully developed sea state description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpec {
    /// Reference wind speed of the spectrum, m/s.
    pub wind_speed: f64,
    pub components: usize,
    /// Truncation band `(low, high)` in rad/s.
    pub band: (f64, f64),
    pub g: f64,
    pub seed: u64,
}

impl WaveSpec {
    /// 128 components log-spaced over `[0.1, 10]·ω_p`.
    pub fn new(wind_speed: f64, g: f64, seed: u64) -> Self {
        let wp = peak_frequency(wind_speed, g);
        Self { wind_speed, components: 128, band: (0.1 * wp, 10.0 * wp), g, seed }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let (lo, hi) = self.band;
        if !(self.wind_speed > 0.0 && self.components >= 1 && self.components <= MAX_COMPONENTS && lo > 0.0 && hi > lo && self.g > 0.0 && hi.is_finite()) {
            return Err(Error::Spec(format!("invalid wave spec {self:?}")));
        }
        Ok(())
    }
}

/// Spectral peak `(4β/5)^(1/4)·g/U ≈ 0.877·g/U`.
pub fn peak_frequency(wind_speed: f64, g: f64) -> f64 {
    (0.8 * PM_BETA).powf(0.25) * g / wind_speed
}

/// Pierson–Moskowitz elevation spectrum, m²·s.
pub fn pierson_moskowitz_psd(omega: f64, spec: &WaveSpec) -> f64 {
    let g = spec.g;
    let r = g / (spec.wind_speed * omega);
    PM_ALPHA * g * g / omega.powi(5) * (-PM_BETA * r * r * r * r).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveComponent {
    pub amplitude: f64,
    pub omega: f64,
    pub wavenumber: f64,
    pub phase: f64,
}

/// Linear superposition of deep-water harmonics travelling along +x.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub components: Vec<WaveComponent>,
    pub spec: Option<WaveSpec>,
}

/// Free-surface elevation and particle kinematics at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Kinematics {
    pub elevation: f64,
    /// (horizontal along propagation, vertical up), m/s.
    pub velocity: [f64; 2],
    pub acceleration: [f64; 2],
}

impl WaveField {
    pub fn still() -> Self {
        Self { components: Vec::new(), spec: None }
    }

    pub fn is_still(&self) -> bool {
        self.components.iter().all(|c| c.amplitude == 0.0)
    }

    pub fn elevation(&self, x: f64, t: f64) -> f64 {
        self.components.iter().map(|c| c.amplitude * (c.wavenumber * x - c.omega * t + c.phase).cos()).sum()
    }

    /// Airy kinematics at `(x, z)` with `z ≤ 0` measured up from the mean surface.
    pub fn kinematics(&self, x: f64, z: f64, t: f64) -> Kinematics {
        let mut k = Kinematics::default();
        for c in &self.components {
            let (s, co) = (c.wavenumber * x - c.omega * t + c.phase).sin_cos();
            let decay = (c.wavenumber * z.min(0.0)).exp();
            let aw = c.amplitude * c.omega;
            let aww = aw * c.omega;
            k.elevation += c.amplitude * co;
            k.velocity[0] += aw * decay * co;
            k.velocity[1] += aw * decay * s;
            k.acceleration[0] += aww * decay * s;
            k.acceleration[1] -= aww * decay * co;
        }
        k
    }

    /// Elevation variance implied by the amplitudes, `Σ a²/2`.
    pub fn variance(&self) -> f64 {
        self.components.iter().map(|c| 0.5 * c.amplitude * c.amplitude).sum()
    }
}

/// Random-phase harmonics with `a = sqrt(2·S(ω)·Δω)` on a log-spaced grid;
/// each bin spans the geometric midpoints to its neighbours.
pub fn synthesize_waves(spec: &WaveSpec) -> Result<WaveField, Error> {
    spec.validate()?;
    let (lo, hi) = spec.band;
    let n = spec.components;
    let ratio = (hi / lo).ln();
    let edge = |i: usize| lo * (ratio * i as f64 / n as f64).exp();
    let mut rng = UniformStream::new(spec.seed);
    let components = (0..n)
        .map(|i| {
            let (e0, e1) = (edge(i), edge(i + 1));
            let omega = (e0 * e1).sqrt();
            let dw = e1 - e0;
            WaveComponent {
                amplitude: (2.0 * pierson_moskowitz_psd(omega, spec) * dw).sqrt(),
                omega,
                wavenumber: omega * omega / spec.g,
                phase: 2.0 * PI * rng.next_f64(),
            }
        })
        .collect();
    Ok(WaveField { components, spec: Some(*spec) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_at_twenty_metres_per_second() {
        let wp = peak_frequency(20.0, 9.81);
        assert!((wp - 0.877 * 9.81 / 20.0).abs() < 1e-3);
        assert!((wp - 0.430).abs() < 1e-3);
    }

    #[test]
    fn single_component_uses_band_centre() {
        let mut s = WaveSpec::new(15.0, 9.81, 3);
        s.components = 1;
        let f = synthesize_waves(&s).unwrap();
        let c = f.components[0];
        let centre = (s.band.0 * s.band.1).sqrt();
        assert!((c.omega - centre).abs() < 1e-12);
        let expect = (2.0 * pierson_moskowitz_psd(centre, &s) * (s.band.1 - s.band.0)).sqrt();
        assert!((c.amplitude - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn still_field_is_zero() {
        let k = WaveField::still().kinematics(3.0, -2.0, 1.0);
        assert_eq!(k, Kinematics::default());
    }
}
