use alloc::format;
use alloc::string::ToString;

use super::equilibrium::{static_equilibrium, trim_pitch};
use super::rk4::rk4_step;
use super::{Control, Initial, SimConfig, TorqueMode, Trajectory, WaveInput, WindInput};
use crate::aero::generator_torque_region3;
use crate::control::PitchController;
use crate::dynamics::{to_rccs, Evaluation, Failure, FailureKind, Inputs, Plant, StateVector};
use crate::environment::{synthesize_waves, synthesize_wind, WaveField, WindSeries};
use crate::Error;

enum Wind {
    Constant(f64),
    Series(WindSeries),
}

impl Wind {
    fn at(&self, t: f64) -> f64 {
        match self {
            Wind::Constant(v) => *v,
            Wind::Series(s) => s.at(t),
        }
    }
}

/// Builds the wind and wave inputs named by the configuration.
fn environment(cfg: &SimConfig) -> Result<(Wind, WaveField), Error> {
    let wind = match &cfg.wind {
        WindInput::Constant(v) => Wind::Constant(*v),
        WindInput::Synthetic(spec) => Wind::Series(synthesize_wind(spec)?),
        WindInput::Series(s) => Wind::Series(s.clone()),
    };
    let waves = match &cfg.waves {
        WaveInput::Still => WaveField::still(),
        WaveInput::Synthetic(spec) => synthesize_waves(spec)?,
        WaveInput::Field(f) => f.clone(),
    };
    Ok((wind, waves))
}

/// Starting state and blade pitch for a run.
pub fn initial_condition(cfg: &SimConfig, plant: &Plant<'_>) -> Result<(StateVector, f64), Error> {
    let p = plant.params;
    let u = cfg.mean_wind();
    let rotor_speed = match cfg.initial {
        Initial::State(s) => s.rotor_speed,
        Initial::Equilibrium => p.rated_speed,
    };
    let beta = cfg.initial_pitch.unwrap_or_else(|| trim_pitch(plant, u, rotor_speed));
    let state = match cfg.initial {
        Initial::State(s) => s,
        Initial::Equilibrium => static_equilibrium(plant, u, beta, rotor_speed)?,
    };
    Ok((state, beta))
}

fn torque(mode: TorqueMode, rotor_speed: f64, plant: &Plant<'_>) -> f64 {
    let p = plant.params;
    match mode {
        TorqueMode::Fixed(t) => t,
        TorqueMode::Region3 => generator_torque_region3(p.rated_power, p.gear_ratio, rotor_speed, p.stall_floor).0,
    }
}

fn record_row(t: f64, s: &StateVector, d: &[f64; 7], ev: &Evaluation, u: &Inputs<'_>, cfg: &SimConfig, plant: &Plant<'_>) -> [f64; 17] {
    let r = to_rccs(s, plant.params.heave_offset);
    let wave = ev.breakdown.wave;
    [
        t,
        r.surge,
        r.surge_rate,
        r.heave,
        r.heave_rate,
        r.pitch,
        r.pitch_rate,
        r.rotor_speed,
        -d[5],
        u.blade_pitch,
        u.generator_torque,
        ev.aero_power,
        u.wind_speed,
        u.waves.elevation(cfg.report_x, t),
        -wave.surge,
        -wave.heave,
        -wave.pitch,
    ]
}

/// Runs the closed loop: sample the environment, assemble forces, take one
/// RK4 step, then update the pitch controller from the new rotor speed.
/// Blade pitch is held over a step; generator torque follows the rotor speed
/// at every stage. A capsize or numerical failure truncates the trajectory
/// and is recorded in it.
pub fn simulate(cfg: &SimConfig, plant: &Plant<'_>) -> Result<Trajectory, Error> {
    cfg.validate()?;
    let (wind, waves) = environment(cfg)?;
    let (mut state, beta0) = initial_condition(cfg, plant)?;
    let p = plant.params;
    let mut manifest = cfg.to_manifest();
    manifest.insert("param_hash".to_string(), format!("{:016x}", p.fingerprint()));
    manifest.insert("blade_pitch_start".to_string(), format!("{beta0:?}"));

    let steps = cfg.steps();
    let mut traj = Trajectory::with_capacity(steps / cfg.decimation + 1, manifest);
    let mut controller = match cfg.control {
        Control::Pid(c) => Some(PitchController::new(c, state.rotor_speed, beta0)),
        Control::Fixed => None,
    };
    let mut beta = beta0;
    let dt = cfg.dt;

    let derivative = |t: f64, s: &StateVector, beta: f64| {
        let u = Inputs {
            t,
            wind_speed: wind.at(t),
            waves: &waves,
            blade_pitch: beta,
            generator_torque: torque(cfg.torque, s.rotor_speed, plant),
        };
        plant.state_derivative(s, &u).map(|(d, ev)| (d, ev, u))
    };

    let mut failure: Option<Failure> = None;
    for n in 0..=steps {
        let t = n as f64 * dt;
        let (k1, ev, u) = match derivative(t, &state, beta) {
            Ok(v) => v,
            Err(f) => {
                failure = Some(f);
                break;
            }
        };
        if n % cfg.decimation == 0 {
            traj.push_row(&record_row(t, &state, &k1, &ev, &u, cfg, plant));
        }
        if n == steps {
            break;
        }
        let next = rk4_step(&state.to_array(), t, dt, Some(k1), |ts, x| {
            derivative(ts, &StateVector::from_array(*x), beta).map(|(d, _, _)| d)
        });
        match next {
            Ok(x) => state = StateVector::from_array(x),
            Err(f) => {
                failure = Some(f);
                break;
            }
        }
        if let Some(c) = controller.as_mut() {
            beta = c.update(state.rotor_speed, dt, p);
        }
    }

    if let Some(f) = failure {
        traj.manifest.insert("failure".to_string(), f.kind.tag().to_string());
        traj.manifest.insert("failure.time".to_string(), format!("{:?}", f.time));
        if let FailureKind::Singular { condition } = f.kind {
            traj.manifest.insert("failure.condition".to_string(), format!("{condition:?}"));
        }
        let a = f.state.to_array();
        traj.manifest.insert(
            "failure.state".to_string(),
            a.iter().map(|v| format!("{v:?}")).collect::<alloc::vec::Vec<_>>().join(","),
        );
        traj.failure = Some(f);
    }
    Ok(traj)
}
