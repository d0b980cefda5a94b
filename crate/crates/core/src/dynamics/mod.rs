//! Surge/heave/pitch mainframe and its coupling to the rotor.
//!
//! The mainframe obeys `E·ẋ = F` for `x = [ζ, v_ζ, η, v_η, α, ω]` with
//!
//! ```text
//!     | 1   0      0   0      0   0      |        | v_ζ                  |
//!     | 0   M_X    0   0      0   M_d·cα |        | Q_ζ + M_d·ω²·sin α   |
//! E = | 0   0      1   0      0   0      |    F = | v_η                  |
//!     | 0   0      0   M_Y    0   M_d·sα |        | Q_η − M_d·ω²·cos α   |
//!     | 0   0      0   0      1   0      |        | ω                    |
//!     | 0   M_d·cα 0   M_d·sα 0   J_TOT  |        | Q_α                  |
//! ```
//!
//! and the rotor speed follows the one-mass drivetrain in [`crate::aero`].

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::aero::{self, WindForceBreakdown};
use crate::environment::WaveField;
use crate::math::{cond1, norm1, Lu6, Mat6, Vec6};
use crate::params::{CoefficientSurface, ParameterSet};

pub mod forces;
mod state;

pub use forces::{
    buoyancy_forces, tie_rod_forces, tie_rod_linear_weight, wave_hydro_forces, weight_forces, Channels, HydroLoads,
    HydroModel, Morison, MooringModel, TautLines,
};
pub use state::{from_rccs, to_rccs, ReportedState, StateVector};

/// Mass matrices with a 1-norm condition number above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

pub fn mass_matrix(s: &StateVector, p: &ParameterSet) -> Mat6 {
    let (sa, ca) = s.pitch.sin_cos();
    let mut e = [[0.0; 6]; 6];
    e[0][0] = 1.0;
    e[2][2] = 1.0;
    e[4][4] = 1.0;
    e[1][1] = p.surge_mass;
    e[3][3] = p.heave_mass;
    e[5][5] = p.pitch_inertia;
    e[1][5] = p.coupling_moment * ca;
    e[5][1] = e[1][5];
    e[3][5] = p.coupling_moment * sa;
    e[5][3] = e[3][5];
    e
}

/// Per-source generalized forces on each channel.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ForceBreakdown {
    pub weight: Channels,
    pub buoyancy: Channels,
    pub wind: Channels,
    pub tie_rod: Channels,
    pub wave: Channels,
    pub hydro_drag: Channels,
}

impl ForceBreakdown {
    pub fn total(&self) -> Channels {
        self.weight + self.buoyancy + self.wind + self.tie_rod + self.wave + self.hydro_drag
    }
}

/// Exogenous and control inputs at one instant.
#[derive(Debug, Clone, Copy)]
pub struct Inputs<'a> {
    pub t: f64,
    pub wind_speed: f64,
    pub waves: &'a WaveField,
    pub blade_pitch: f64,
    /// Generator-shaft torque, N·m.
    pub generator_torque: f64,
}

/// Everything evaluated at one state.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation {
    pub mass: Mat6,
    pub force: Vec6,
    pub breakdown: ForceBreakdown,
    pub wind: WindForceBreakdown,
    pub aero_power: f64,
    pub rotor_accel: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FailureKind {
    /// Pitch reached ±90°.
    Capsize,
    NonFinite,
    /// Mass matrix singular or ill conditioned.
    Singular { condition: f64 },
}

/// Why and where a trajectory stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Failure {
    pub kind: FailureKind,
    pub time: f64,
    pub state: StateVector,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FailureKind::Capsize => write!(f, "capsize at t={}", self.time),
            FailureKind::NonFinite => write!(f, "non-finite state at t={}", self.time),
            FailureKind::Singular { condition } => {
                write!(f, "singular mass matrix (cond {condition:e}) at t={}", self.time)
            }
        }
    }
}

impl FailureKind {
    pub fn tag(&self) -> &'static str {
        match self {
            FailureKind::Capsize => "capsize",
            FailureKind::NonFinite => "non-finite",
            FailureKind::Singular { .. } => "singular",
        }
    }
}

/// The turbine: parameters, rotor tables and the pluggable force models.
#[derive(Clone, Copy)]
pub struct Plant<'a> {
    pub params: &'a ParameterSet,
    pub power: &'a CoefficientSurface,
    pub thrust: &'a CoefficientSurface,
    pub mooring: &'a dyn MooringModel,
    pub hydro: &'a dyn HydroModel,
}

impl<'a> Plant<'a> {
    /// Plant with the default taut-line mooring and Morison hydrodynamics.
    pub fn new(params: &'a ParameterSet, power: &'a CoefficientSurface, thrust: &'a CoefficientSurface) -> Self {
        Self { params, power, thrust, mooring: &TautLines, hydro: &Morison }
    }

    pub fn assemble(&self, s: &StateVector, u: &Inputs<'_>) -> Evaluation {
        let p = self.params;
        let wind = aero::total_wind_force(
            p,
            self.thrust,
            u.wind_speed,
            s.surge_rate,
            s.pitch,
            s.pitch_rate,
            s.rotor_speed,
            u.blade_pitch,
        );
        let hydro = self.hydro.loads(s, u.waves, u.t, p);
        let breakdown = ForceBreakdown {
            weight: weight_forces(s, p),
            buoyancy: buoyancy_forces(s, p),
            wind: Channels::new(wind.total, 0.0, wind.moment),
            tie_rod: self.mooring.loads(s, p),
            wave: hydro.wave,
            hydro_drag: hydro.drag,
        };
        let q = breakdown.total();
        let (sa, ca) = s.pitch.sin_cos();
        let w2 = s.pitch_rate * s.pitch_rate;
        let force = [
            s.surge_rate,
            q.surge + p.coupling_moment * w2 * sa,
            s.heave_rate,
            q.heave - p.coupling_moment * w2 * ca,
            s.pitch_rate,
            q.pitch,
        ];
        let v_blade = aero::element_inflow(p, u.wind_speed, s.surge_rate, s.pitch, s.pitch_rate)[2];
        let aero_power = aero::aerodynamic_power(p, self.power, v_blade, s.rotor_speed, u.blade_pitch);
        let (rotor_accel, _) =
            aero::rotor_derivative(s.rotor_speed, aero_power, p.gear_ratio * u.generator_torque, p);
        Evaluation { mass: mass_matrix(s, p), force, breakdown, wind, aero_power, rotor_accel }
    }

    /// Time derivative of the seven states.
    pub fn state_derivative(&self, s: &StateVector, u: &Inputs<'_>) -> Result<([f64; 7], Evaluation), Failure> {
        let fail = |kind| Failure { kind, time: u.t, state: *s };
        if !s.is_finite() {
            return Err(fail(FailureKind::NonFinite));
        }
        if s.pitch.abs() >= core::f64::consts::FRAC_PI_2 {
            return Err(fail(FailureKind::Capsize));
        }
        let ev = self.assemble(s, u);
        let lu = Lu6::new(&ev.mass).ok_or(fail(FailureKind::Singular { condition: f64::INFINITY }))?;
        let condition = norm1(&ev.mass) * lu.inverse_norm1();
        if !(condition <= MAX_CONDITION) {
            return Err(fail(FailureKind::Singular { condition }));
        }
        let x = lu.solve(&ev.force);
        let d = [x[0], x[1], x[2], x[3], x[4], x[5], ev.rotor_accel];
        if d.iter().any(|v| !v.is_finite()) {
            return Err(fail(FailureKind::NonFinite));
        }
        Ok((d, ev))
    }
}

/// Condition number of the mass matrix at a state.
pub fn mass_condition(s: &StateVector, p: &ParameterSet) -> f64 {
    cond1(&mass_matrix(s, p))
}
