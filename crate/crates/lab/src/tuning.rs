//! Closed-loop experiments behind the three gain-tuning procedures.
//!
//! Each experiment runs the full model with a modified parameter set; a run
//! that capsizes or diverges counts as unstable (proportional stage) or as an
//! infinite spread (derivative stage).

use fowt_core::control::tuning::{
    derivative_grid, tune_derivative, tune_integral, tune_proportional, DerivativeTuning, InstabilityDetector,
    IntegralSearch, IntegralTuning, ProportionalSearch, ProportionalTuning,
};
use fowt_core::params::ParameterSet;
use fowt_core::sim::{initial_condition, simulate, Channel, Control, Initial, SimConfig};
use rayon::prelude::*;

use crate::ensemble::Model;
use crate::LabError;

fn with_gains(model: &Model, a_p: f64, a_i: f64, k_d: f64) -> ParameterSet {
    let mut p = model.params.clone();
    p.a_p = a_p;
    p.a_i = a_i;
    p.k_d = k_d;
    p
}

fn rotor_speed(model: &Model, params: &ParameterSet, cfg: &SimConfig) -> Result<(Vec<f64>, bool), LabError> {
    let plant = fowt_core::dynamics::Plant::new(params, &model.power, &model.thrust);
    let t = simulate(cfg, &plant)?;
    Ok((t.get(Channel::RotorSpeed).to_vec(), t.failure.is_some()))
}

/// Population standard deviation.
pub fn std_dev(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt()
}

/// Rotor-speed spread of one run; failed runs count as infinite.
pub fn rotor_spread(model: &Model, params: &ParameterSet, cfg: &SimConfig) -> Result<f64, LabError> {
    let (w, failed) = rotor_speed(model, params, cfg)?;
    Ok(if failed || w.len() < 2 { f64::INFINITY } else { std_dev(&w) })
}

/// Relative rotor-speed kick applied at the start of each proportional-stage
/// run; an undisturbed equilibrium would never reveal an unstable loop.
pub const SPEED_KICK: f64 = 0.01;

/// Proportional stage: `a_i = 1` and `K_d = 0` while `a_p` ramps, on `cfg`
/// (normally steady wind without waves) started from its equilibrium with
/// the rotor [`SPEED_KICK`] above it.
pub fn tune_proportional_gain(
    model: &Model,
    cfg: &SimConfig,
    search: &ProportionalSearch,
    detector: &InstabilityDetector,
) -> Result<ProportionalTuning, LabError> {
    let (mut start, beta) = initial_condition(cfg, &model.plant())?;
    start.rotor_speed *= 1.0 + SPEED_KICK;
    let cfg = &SimConfig { initial: Initial::State(start), initial_pitch: Some(beta), ..cfg.clone() };
    let mut err = None;
    let out = tune_proportional(search, |a| match rotor_speed(model, &with_gains(model, a, 1.0, 0.0), cfg) {
        Ok((w, failed)) => failed || detector.is_unstable(&w, cfg.dt * cfg.decimation as f64),
        Err(e) => {
            err.get_or_insert(e);
            true
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out?),
    }
}

/// Integral stage: `a_p` fixed, `K_d = 0`, mean rotor speed over `cfg`
/// (normally stochastic wind and waves).
pub fn tune_integral_gain(model: &Model, cfg: &SimConfig, a_p: f64, search: &IntegralSearch) -> Result<IntegralTuning, LabError> {
    let mut err = None;
    let out = tune_integral(search, |a| match rotor_speed(model, &with_gains(model, a_p, a, 0.0), cfg) {
        Ok((w, _)) if !w.is_empty() => w.iter().sum::<f64>() / w.len() as f64,
        Ok(_) => f64::NAN,
        Err(e) => {
            err.get_or_insert(e);
            f64::NAN
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out?),
    }
}

/// Derivative stage: sweep `K_d` over `grid` in parallel with `a_p`, `a_i` fixed.
pub fn sweep_derivative_gain(model: &Model, cfg: &SimConfig, a_p: f64, a_i: f64, grid: &[f64]) -> Result<DerivativeTuning, LabError> {
    let spreads: Vec<f64> = grid
        .par_iter()
        .map(|&k| rotor_spread(model, &with_gains(model, a_p, a_i, k), cfg))
        .collect::<Result<_, _>>()?;
    let mut it = spreads.iter();
    Ok(tune_derivative(grid, |_| *it.next().expect("one spread per grid point")))
}

/// The sweep range used when none is given.
pub fn default_grid() -> Vec<f64> {
    derivative_grid((0.02, 1.0), 50)
}

/// Rotor-speed spread with the pitch controller on and with the blade
/// pitch held at its starting value, on the same inputs.
pub fn control_benefit(model: &Model, cfg: &SimConfig) -> Result<(f64, f64), LabError> {
    let controlled = rotor_spread(model, &model.params, cfg)?;
    let open = SimConfig { control: Control::Fixed, ..cfg.clone() };
    let (w, _) = rotor_speed(model, &model.params, &open)?;
    let uncontrolled = if w.len() < 2 { f64::INFINITY } else { std_dev(&w) };
    Ok((controlled, uncontrolled))
}
