//! Generalized force contributions on (surge, heave, pitch).
//!
//! A force `(F_x, F_z)` acting at body point `b = (b_x, b_z)` contributes
//! `(F_x, F_z, F_x·∂X/∂α + F_z·∂Z/∂α)` where the point's global position is
//! `X = ζ + b_x·cos α − b_z·sin α`, `Z = η + b_x·sin α + b_z·cos α`
//! (z measured downward).

use core::f64::consts::PI;
use core::ops::{Add, AddAssign};

#[allow(unused_imports)]
use num_traits::Float;

use super::StateVector;
use crate::environment::{WaveField, MAX_COMPONENTS};
use crate::math::gauss8;
use crate::params::{ParameterSet, TieRod};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Channels {
    pub surge: f64,
    pub heave: f64,
    pub pitch: f64,
}

impl Channels {
    pub const ZERO: Self = Self { surge: 0.0, heave: 0.0, pitch: 0.0 };

    pub fn new(surge: f64, heave: f64, pitch: f64) -> Self {
        Self { surge, heave, pitch }
    }
}

impl Add for Channels {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.surge + o.surge, self.heave + o.heave, self.pitch + o.pitch)
    }
}

impl AddAssign for Channels {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

/// Global position of a body point.
pub fn body_point(s: &StateVector, b: [f64; 2]) -> [f64; 2] {
    let (sa, ca) = s.pitch.sin_cos();
    [s.surge + b[0] * ca - b[1] * sa, s.heave + b[0] * sa + b[1] * ca]
}

/// `(∂X/∂α, ∂Z/∂α)` of a body point.
pub fn body_lever(s: &StateVector, b: [f64; 2]) -> [f64; 2] {
    let (sa, ca) = s.pitch.sin_cos();
    [-b[0] * sa - b[1] * ca, b[0] * ca - b[1] * sa]
}

/// Generalized force of a point load.
pub fn point_load(s: &StateVector, b: [f64; 2], f: [f64; 2]) -> Channels {
    let l = body_lever(s, b);
    Channels::new(f[0], f[1], f[0] * l[0] + f[1] * l[1])
}

/// Gravity on nacelle, platform and tower.
pub fn weight_forces(s: &StateVector, p: &ParameterSet) -> Channels {
    let (sa, ca) = s.pitch.sin_cos();
    Channels::new(
        0.0,
        p.total_mass() * p.g,
        (p.nacelle_mass * p.nacelle_height + p.platform_mass * p.platform_height) * p.g * sa
            + (p.nacelle_mass * p.nacelle_offset + p.platform_mass * p.platform_offset) * p.g * ca,
    )
}

/// Hydrostatic lift on the displaced volume.
///
/// The pitch term is written here with `g`; without it the expression is not
/// a moment.
pub fn buoyancy_forces(s: &StateVector, p: &ParameterSet) -> Channels {
    let lift = p.rho_water * p.displaced_volume * p.g;
    Channels::new(0.0, -lift, lift * p.buoyancy_depth * s.pitch.sin())
}

/// Net weight per unit length of a submerged line, N/m.
pub fn tie_rod_linear_weight(mass_per_length: f64, radius: f64, rho_water: f64, g: f64) -> f64 {
    mass_per_length * g - rho_water * g * PI * radius * radius
}

/// Stretched length and tension of one line.
pub fn line_tension(s: &StateVector, rod: &TieRod) -> (f64, f64, [f64; 2]) {
    let a = body_point(s, rod.attach);
    let d = [rod.anchor[0] - a[0], rod.anchor[1] - a[1]];
    let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
    let tension = (rod.stiffness * (len - rod.unstretched_length)).max(0.0);
    (len, tension, [d[0] / len, d[1] / len])
}

/// Mooring model interface; swap in a higher-fidelity line model here.
pub trait MooringModel: Sync {
    fn loads(&self, s: &StateVector, p: &ParameterSet) -> Channels;
}

/// Taut elastic lines: tension `max(0, k·(L − L0))` along the line towards
/// the anchor, plus each line's net submerged weight hung at its attachment.
#[derive(Debug, Clone, Copy, Default)]
pub struct TautLines;

impl MooringModel for TautLines {
    fn loads(&self, s: &StateVector, p: &ParameterSet) -> Channels {
        tie_rod_forces(s, p)
    }
}

pub fn tie_rod_forces(s: &StateVector, p: &ParameterSet) -> Channels {
    let mut out = Channels::ZERO;
    for rod in &p.tie_rods {
        let (_, t, u) = line_tension(s, rod);
        let w = tie_rod_linear_weight(rod.mass_per_length, rod.radius, p.rho_water, p.g) * rod.unstretched_length;
        out += point_load(s, rod.attach, [t * u[0], t * u[1] + w]);
    }
    out
}

/// Wave excitation and viscous drag, reported separately.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HydroLoads {
    pub wave: Channels,
    pub drag: Channels,
}

pub trait HydroModel: Sync {
    fn loads(&self, s: &StateVector, waves: &WaveField, t: f64, p: &ParameterSet) -> HydroLoads;
}

/// Morison strip loads on the submerged platform cylinder plus keel pressure
/// and keel drag in heave. Waves travel downwind (towards −x); the wave phase
/// is taken at the platform axis position `ζ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Morison;

impl HydroModel for Morison {
    fn loads(&self, s: &StateVector, waves: &WaveField, t: f64, p: &ParameterSet) -> HydroLoads {
        wave_hydro_forces(s, waves, t, p)
    }
}

pub fn wave_hydro_forces(s: &StateVector, waves: &WaveField, t: f64, p: &ParameterSet) -> HydroLoads {
    let keel = p.keel_depth();
    let (sa, ca) = s.pitch.sin_cos();
    let keel_z = s.heave + keel * ca;
    if keel_z <= 0.0 {
        return HydroLoads::default();
    }
    let area = p.waterplane_area();
    let dia = p.platform_diameter;
    let rho = p.rho_water;
    let xw = -s.surge;

    // per-component phase terms shared by every depth
    let n = waves.components.len().min(MAX_COMPONENTS);
    let mut vel = [0.0; MAX_COMPONENTS];
    let mut k = [0.0; MAX_COMPONENTS];
    let mut inertia_surge = 0.0;
    let mut inertia_pitch = 0.0;
    let mut keel_pressure = 0.0;
    let mut keel_w = 0.0;
    for (i, c) in waves.components.iter().take(n).enumerate() {
        if c.amplitude == 0.0 {
            continue;
        }
        let (sn, cs) = (c.wavenumber * xw - c.omega * t + c.phase).sin_cos();
        let kk = c.wavenumber;
        let e = (-kk * keel_z).exp();
        let int0 = (1.0 - e) / kk;
        let int1 = (1.0 - e * (1.0 + kk * keel_z)) / (kk * kk);
        // horizontal acceleration towards +x is −aω²·sin θ·e^(−kz)
        let acc = -c.amplitude * c.omega * c.omega * sn;
        inertia_surge += acc * int0;
        inertia_pitch += acc * (s.heave * int0 - int1);
        keel_pressure += c.amplitude * e * cs;
        keel_w += c.amplitude * c.omega * e * sn;
        vel[i] = -c.amplitude * c.omega * cs;
        k[i] = kk;
    }
    let mass_coeff = rho * p.inertia_coeff * area / ca;
    let mut wave = Channels::new(mass_coeff * inertia_surge, 0.0, mass_coeff * inertia_pitch);

    let drag_coeff = 0.5 * rho * p.drag_coeff * dia / ca;
    let strip = |z: f64| {
        let u: f64 = (0..n).map(|i| vel[i] * (-k[i] * z).exp()).sum();
        let rel = u - (s.surge_rate - (z - s.heave) * s.pitch_rate);
        drag_coeff * rel.abs() * rel
    };
    let mut drag = Channels::ZERO;
    drag.surge = gauss8(0.0, keel_z, strip);
    drag.pitch = gauss8(0.0, keel_z, |z| strip(z) * (s.heave - z));

    // keel: dynamic pressure pushes up (−z); vertical fluid velocity down is −w
    let keel_point = [0.0, keel];
    let fk = -rho * p.g * keel_pressure * area;
    wave += point_load(s, keel_point, [0.0, fk]);
    let keel_rate = s.heave_rate - keel * sa * s.pitch_rate;
    let w_rel = -keel_w - keel_rate;
    let fd = 0.5 * rho * p.heave_drag_coeff * area * w_rel.abs() * w_rel;
    drag += point_load(s, keel_point, [0.0, fd]);
    HydroLoads { wave, drag }
}
