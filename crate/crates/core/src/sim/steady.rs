use super::{Channel, Control, SimConfig, Trajectory, WaveInput, WindInput};
use crate::dynamics::Plant;
use crate::Error;

/// State channels checked for convergence, in reporting order.
pub const STATE_CHANNELS: [Channel; 7] = [
    Channel::Surge,
    Channel::SurgeRate,
    Channel::Heave,
    Channel::HeaveRate,
    Channel::Pitch,
    Channel::PitchRate,
    Channel::RotorSpeed,
];

/// Band half-width is 1 % of the final value, but never below this.
pub const BAND_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    /// Last recorded value of each state channel (reporting frame).
    pub final_state: [f64; 7],
    /// Last time any state was outside its band around the final value, s.
    pub settling_time: f64,
    pub converged: bool,
}

/// Settling analysis of a recorded run. A run counts as converged when it
/// finished without failure, stayed in band over its last fifth, and every
/// rate channel ended below the band floor.
pub fn convergence(traj: &Trajectory) -> ConvergenceReport {
    let n = traj.len();
    let t = traj.time();
    if n == 0 {
        return ConvergenceReport { final_state: [f64::NAN; 7], settling_time: f64::NAN, converged: false };
    }
    let final_state: [f64; 7] = core::array::from_fn(|i| traj.get(STATE_CHANNELS[i])[n - 1]);
    let mut settling_time = t[0];
    for (i, c) in STATE_CHANNELS.iter().enumerate() {
        let band = (0.01 * final_state[i].abs()).max(BAND_FLOOR);
        let series = traj.get(*c);
        if let Some(k) = series.iter().rposition(|v| !((v - final_state[i]).abs() <= band)) {
            settling_time = settling_time.max(t[(k + 1).min(n - 1)]);
        }
    }
    let end = t[n - 1];
    let start = t[0];
    let rates_small = [1, 3, 5].iter().all(|&i| final_state[i].abs() < BAND_FLOOR);
    let converged =
        traj.failure.is_none() && settling_time <= start + 0.8 * (end - start) && rates_small && end > start;
    ConvergenceReport { final_state, settling_time, converged }
}

/// Runs a constant-wind, still-water, fixed-control case and reports how it
/// settles.
pub fn steady_state_run(cfg: &SimConfig, plant: &Plant<'_>) -> Result<(Trajectory, ConvergenceReport), Error> {
    if !matches!(cfg.wind, WindInput::Constant(_)) || !matches!(cfg.waves, WaveInput::Still) || cfg.control != Control::Fixed
    {
        return Err(Error::Spec("steady-state runs need constant wind, still water and fixed controls".into()));
    }
    let traj = super::simulate(cfg, plant)?;
    let report = convergence(&traj);
    Ok((traj, report))
}
