//! Reduced-order model of a tension-leg floating offshore wind turbine.
//!
//! The crate is `no_std` (it only needs `alloc`) and contains everything that
//! is pure numerics:
//!
//! * [`params`]: physical, geometric and controller constants, coefficient
//!   surfaces, and the flat key/value text formats they are loaded from.
//! * [`environment`]: seeded von Karman hub-height wind and Pierson–Moskowitz
//!   wave synthesis plus linear (Airy) wave kinematics.
//! * [`aero`]: wind thrust on tower, nacelle and rotor; aerodynamic power and
//!   the one-mass drivetrain.
//! * [`dynamics`]: the surge/heave/pitch mainframe `E·ẋ = F`, its force
//!   models, and the reporting coordinate transform.
//! * [`control`]: the gain-scheduled blade-pitch PID and its tuning procedures.
//! * [`sim`]: fixed-step RK4 closed-loop simulation and steady-state runs.
//!
//! File IO, the Monte Carlo campaign runner, statistical analysis and the
//! command-line front end live in the `fowt-lab` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod aero;
pub mod control;
pub mod dynamics;
pub mod environment;
pub mod fft;
pub mod kv;
pub mod math;
pub mod params;
pub mod rng;
pub mod sim;

mod error;

pub use error::Error;

/// Reference data shipped with the crate.
pub mod data {
    /// NREL 5 MW turbine on a tension-leg platform, in the parameter file format.
    pub const NREL_5MW_TLP: &str = include_str!("../data/nrel5mw_tlp.cfg");
    /// Power coefficient table, same turbine.
    pub const CP_5MW_LIKE: &str = include_str!("../data/cp_5mw_like.csv");
    /// Thrust coefficient table, same turbine.
    pub const CT_5MW_LIKE: &str = include_str!("../data/ct_5mw_like.csv");
}
