//! Gain-scheduled blade-pitch PID for above-rated operation.
//!
//! Each update forms an increment
//!
//! ```text
//! Δβ = K_p·η_G·(ω_R − ω_0) + K_i·I + K_d·η_G·ω̇_R
//! ```
//!
//! where `I` is the accumulated `η_G·(ω_R − ω_0)·dt`, optionally divided by
//! the elapsed time, and `ω̇_R` is a backward difference. The command
//! `β + Δβ` is rate limited and then clamped to the pitch range. `K_p` and
//! `K_i` shrink with pitch by `β_k / (β_k + β)`.
//!
//! Applied once per update, the increment makes the effective gains scale
//! with `1/dt`; [`IncrementMode::PerSecond`] treats `Δβ` as a pitch rate
//! instead.

mod pid;
pub mod tuning;

pub use pid::{
    apply_saturation, gain_schedule, gains, pid_step, schedule_factor, ControllerState, GainSet, IncrementMode, IntegralMode,
    PidConfig, PitchController,
};
