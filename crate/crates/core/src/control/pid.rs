use crate::params::ParameterSet;

/// How the integral term enters the pitch increment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMode {
    /// Accumulated error divided by elapsed time (a running average).
    RunningAverage,
    /// Accumulated error as is.
    Plain,
}

impl IntegralMode {
    pub fn name(self) -> &'static str {
        match self {
            IntegralMode::RunningAverage => "running-average",
            IntegralMode::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "running-average" | "average" => Some(IntegralMode::RunningAverage),
            "plain" | "standard" => Some(IntegralMode::Plain),
            _ => None,
        }
    }
}

/// How the PID output is applied to the blade pitch each update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncrementMode {
    /// `β ← β + Δβ` once per controller update.
    PerStep,
    /// `Δβ` is a pitch rate: `β ← β + Δβ·dt`. Gains no longer depend on
    /// the update interval.
    PerSecond,
}

impl IncrementMode {
    pub fn name(self) -> &'static str {
        match self {
            IncrementMode::PerStep => "per-step",
            IncrementMode::PerSecond => "per-second",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "per-step" => Some(IncrementMode::PerStep),
            "per-second" => Some(IncrementMode::PerSecond),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidConfig {
    pub integral_mode: IntegralMode,
    pub increment: IncrementMode,
    /// Freeze the accumulator while the previous command was saturated.
    pub anti_windup: bool,
    /// First-order low-pass time constant on the rotor acceleration, s.
    pub derivative_filter: Option<f64>,
}

impl Default for PidConfig {
    fn default() -> Self {
        Self {
            integral_mode: IntegralMode::RunningAverage,
            increment: IncrementMode::PerStep,
            anti_windup: true,
            derivative_filter: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSet {
    pub k_p: f64,
    pub k_i: f64,
    pub k_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerState {
    /// Accumulated `η_G·(ω_R − ω_0)·dt`, rad.
    pub integral: f64,
    pub prev_speed: f64,
    pub prev_pitch: f64,
    pub elapsed: f64,
    pub saturated: bool,
    pub accel_filtered: f64,
}

impl ControllerState {
    pub fn new(rotor_speed: f64, blade_pitch: f64) -> Self {
        Self {
            integral: 0.0,
            prev_speed: rotor_speed,
            prev_pitch: blade_pitch,
            elapsed: 0.0,
            saturated: false,
            accel_filtered: 0.0,
        }
    }
}

/// Schedule factor `β_k / (β_k + β)`.
pub fn schedule_factor(beta: f64, p: &ParameterSet) -> f64 {
    p.schedule_knee / (p.schedule_knee + beta)
}

/// Proportional and integral gains at blade pitch `beta`.
pub fn gain_schedule(beta: f64, p: &ParameterSet) -> (f64, f64) {
    let j = p.drivetrain_inertia();
    let denom = p.gear_ratio * p.pitch_sensitivity;
    let f = schedule_factor(beta, p);
    let k_p = p.a_p * 2.0 * j * p.rated_speed * p.loop_damping * p.loop_frequency / denom * f;
    let k_i = p.a_i * j * p.rated_speed * p.loop_frequency / denom * f;
    (k_p, k_i)
}

pub fn gains(beta: f64, p: &ParameterSet) -> GainSet {
    let (k_p, k_i) = gain_schedule(beta, p);
    GainSet { k_p, k_i, k_d: p.k_d }
}

/// One controller update. Returns the unsaturated command (`prev_pitch + Δβ`,
/// or `prev_pitch + Δβ·dt` in [`IncrementMode::PerSecond`]) and the advanced
/// state.
pub fn pid_step(
    cs: &ControllerState,
    rotor_speed: f64,
    dt: f64,
    g: &GainSet,
    p: &ParameterSet,
    cfg: &PidConfig,
) -> (f64, ControllerState) {
    let mut next = *cs;
    let eta = p.gear_ratio;
    let err = rotor_speed - p.rated_speed;
    next.elapsed += dt;
    if !(cfg.anti_windup && cs.saturated) {
        next.integral += eta * err * dt;
    }
    let integral = match cfg.integral_mode {
        IntegralMode::Plain => next.integral,
        IntegralMode::RunningAverage => next.integral / next.elapsed,
    };
    let raw_accel = (rotor_speed - cs.prev_speed) / dt;
    let accel = match cfg.derivative_filter {
        Some(tau) if tau > 0.0 => {
            let a = dt / (tau + dt);
            cs.accel_filtered + a * (raw_accel - cs.accel_filtered)
        }
        _ => raw_accel,
    };
    next.accel_filtered = accel;
    next.prev_speed = rotor_speed;
    let delta = g.k_p * eta * err + g.k_i * integral + g.k_d * eta * accel;
    let cmd = match cfg.increment {
        IncrementMode::PerStep => cs.prev_pitch + delta,
        IncrementMode::PerSecond => cs.prev_pitch + delta * dt,
    };
    (cmd, next)
}

/// Rate limit around `prev`, then clamp to the pitch range.
pub fn apply_saturation(command: f64, prev: f64, dt: f64, p: &ParameterSet) -> f64 {
    let step = p.pitch_rate_limit * dt;
    command.clamp(prev - step, prev + step).clamp(p.pitch_min, p.pitch_max)
}

/// Gain-scheduled pitch controller: schedule at the current pitch, PID step,
/// saturation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchController {
    pub cfg: PidConfig,
    pub state: ControllerState,
}

impl PitchController {
    pub fn new(cfg: PidConfig, rotor_speed: f64, blade_pitch: f64) -> Self {
        Self { cfg, state: ControllerState::new(rotor_speed, blade_pitch) }
    }

    pub fn pitch(&self) -> f64 {
        self.state.prev_pitch
    }

    pub fn update(&mut self, rotor_speed: f64, dt: f64, p: &ParameterSet) -> f64 {
        let g = gains(self.state.prev_pitch, p);
        let (cmd, mut next) = pid_step(&self.state, rotor_speed, dt, &g, p, &self.cfg);
        let beta = apply_saturation(cmd, self.state.prev_pitch, dt, p);
        next.saturated = beta != cmd;
        next.prev_pitch = beta;
        self.state = next;
        beta
    }
}
