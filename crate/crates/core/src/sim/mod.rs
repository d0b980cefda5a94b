//! Fixed-step closed-loop simulation.

mod config;
mod equilibrium;
mod rk4;
mod run;
mod steady;
mod trajectory;

pub use config::{Control, Initial, Manifest, SimConfig, TorqueMode, WaveInput, WindInput};
pub use equilibrium::{force_scale, static_equilibrium, static_residual, trim_pitch};
pub use rk4::rk4_step;
pub use run::{initial_condition, simulate};
pub use steady::{convergence, steady_state_run, ConvergenceReport, BAND_FLOOR, STATE_CHANNELS};
pub use trajectory::{Channel, Trajectory, CHANNELS};
