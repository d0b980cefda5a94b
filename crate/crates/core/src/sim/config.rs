use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use crate::control::{IncrementMode, IntegralMode, PidConfig};
use crate::dynamics::StateVector;
use crate::environment::{WaveField, WaveSpec, WindSeries, WindSpec};
use crate::Error;

#[allow(unused_imports)]
use num_traits::Float;

/// Ordered key/value record attached to every trajectory.
pub type Manifest = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq)]
pub enum WindInput {
    Constant(f64),
    Synthetic(WindSpec),
    /// Externally supplied series (not replayable from a manifest).
    Series(WindSeries),
}

#[derive(Debug, Clone, PartialEq)]
pub enum WaveInput {
    Still,
    Synthetic(WaveSpec),
    /// Externally supplied field (not replayable from a manifest).
    Field(WaveField),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorqueMode {
    /// Constant generator-shaft torque, N·m.
    Fixed(f64),
    /// Constant-power law evaluated continuously from the rotor speed.
    Region3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Control {
    /// Blade pitch held at the initial value.
    Fixed,
    Pid(PidConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    /// Static equilibrium under the mean wind at rated rotor speed.
    Equilibrium,
    State(StateVector),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub duration: f64,
    /// Keep every n-th step.
    pub decimation: usize,
    pub initial: Initial,
    /// Starting blade pitch, rad; `None` trims to rated power at the mean wind.
    pub initial_pitch: Option<f64>,
    pub control: Control,
    pub torque: TorqueMode,
    pub wind: WindInput,
    pub waves: WaveInput,
    /// Surge position (reporting frame) where wave elevation is recorded, m.
    pub report_x: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.05,
            duration: 1500.0,
            decimation: 1,
            initial: Initial::Equilibrium,
            initial_pitch: None,
            control: Control::Pid(PidConfig::default()),
            torque: TorqueMode::Region3,
            wind: WindInput::Constant(20.0),
            waves: WaveInput::Still,
            report_x: 0.0,
        }
    }
}

const STATE_KEYS: [&str; 7] = ["surge", "surge_rate", "heave", "heave_rate", "pitch", "pitch_rate", "rotor_speed"];

fn f(v: f64) -> String {
    format!("{v:?}")
}

impl SimConfig {
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.dt > 0.0 && self.duration >= self.dt && self.decimation >= 1 && self.dt.is_finite()) {
            return Err(Error::Spec(format!(
                "invalid run: dt={}, duration={}, decimation={}",
                self.dt, self.duration, self.decimation
            )));
        }
        Ok(())
    }

    /// Mean wind speed used for trimming and equilibrium.
    pub fn mean_wind(&self) -> f64 {
        match &self.wind {
            WindInput::Constant(v) => *v,
            WindInput::Synthetic(s) => s.mean_speed,
            WindInput::Series(s) => s.speed.iter().sum::<f64>() / s.speed.len() as f64,
        }
    }

    pub fn to_manifest(&self) -> Manifest {
        let mut m = Manifest::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("dt", f(self.dt));
        put("duration", f(self.duration));
        put("decimation", self.decimation.to_string());
        put("integrator", "rk4".to_string());
        put("rng", crate::rng::ALGORITHM.to_string());
        put("version", env!("CARGO_PKG_VERSION").to_string());
        put("report_x", f(self.report_x));
        match self.initial {
            Initial::Equilibrium => put("initial", "equilibrium".to_string()),
            Initial::State(s) => {
                put("initial", "state".to_string());
                for (k, v) in STATE_KEYS.iter().zip(s.to_array()) {
                    put(&format!("initial.{k}"), f(v));
                }
            }
        }
        put("initial_pitch", self.initial_pitch.map_or("trim".to_string(), f));
        match self.control {
            Control::Fixed => put("controller", "fixed".to_string()),
            Control::Pid(c) => {
                put("controller", "pid".to_string());
                put("integral_mode", c.integral_mode.name().to_string());
                put("increment", c.increment.name().to_string());
                put("anti_windup", c.anti_windup.to_string());
                put("derivative_filter", c.derivative_filter.map_or("none".to_string(), f));
            }
        }
        put(
            "torque",
            match self.torque {
                TorqueMode::Fixed(t) => f(t),
                TorqueMode::Region3 => "region3".to_string(),
            },
        );
        match &self.wind {
            WindInput::Constant(v) => {
                put("wind", "constant".to_string());
                put("wind.speed", f(*v));
            }
            WindInput::Synthetic(s) => {
                put("wind", "synthetic".to_string());
                put("wind.mean_speed", f(s.mean_speed));
                put("wind.sigma", f(s.sigma));
                put("wind.length_scale", f(s.length_scale));
                put("wind.dt", f(s.dt));
                put("wind.duration", f(s.duration));
                put("wind.seed", s.seed.to_string());
            }
            WindInput::Series(_) => put("wind", "series".to_string()),
        }
        match &self.waves {
            WaveInput::Still => put("waves", "still".to_string()),
            WaveInput::Synthetic(s) => {
                put("waves", "synthetic".to_string());
                put("wave.wind_speed", f(s.wind_speed));
                put("wave.components", s.components.to_string());
                put("wave.band_low", f(s.band.0));
                put("wave.band_high", f(s.band.1));
                put("wave.g", f(s.g));
                put("wave.seed", s.seed.to_string());
            }
            WaveInput::Field(_) => put("waves", "field".to_string()),
        }
        m
    }

    /// Rebuilds the configuration recorded by [`SimConfig::to_manifest`].
    pub fn from_manifest(m: &Manifest) -> Result<Self, Error> {
        let get = |k: &str| m.get(k).map(String::as_str).ok_or_else(|| Error::MissingKey(k.to_string()));
        let num = |k: &str| -> Result<f64, Error> { crate::kv::parse_f64(k, get(k)?) };
        let int = |k: &str| -> Result<u64, Error> {
            get(k)?.parse().map_err(|_| Error::BadValue { key: k.to_string(), msg: "not an integer".to_string() })
        };
        let bad = |k: &str, v: &str| Error::BadValue { key: k.to_string(), msg: format!("unexpected `{v}`") };
        let initial = match get("initial")? {
            "equilibrium" => Initial::Equilibrium,
            "state" => {
                let mut a = [0.0; 7];
                for (slot, k) in a.iter_mut().zip(STATE_KEYS) {
                    *slot = num(&format!("initial.{k}"))?;
                }
                Initial::State(StateVector::from_array(a))
            }
            v => return Err(bad("initial", v)),
        };
        let initial_pitch = match get("initial_pitch")? {
            "trim" => None,
            _ => Some(num("initial_pitch")?),
        };
        let control = match get("controller")? {
            "fixed" => Control::Fixed,
            "pid" => Control::Pid(PidConfig {
                integral_mode: IntegralMode::parse(get("integral_mode")?)
                    .ok_or_else(|| bad("integral_mode", get("integral_mode").unwrap_or("")))?,
                increment: IncrementMode::parse(get("increment")?)
                    .ok_or_else(|| bad("increment", get("increment").unwrap_or("")))?,
                anti_windup: get("anti_windup")? == "true",
                derivative_filter: match get("derivative_filter")? {
                    "none" => None,
                    _ => Some(num("derivative_filter")?),
                },
            }),
            v => return Err(bad("controller", v)),
        };
        let torque = match get("torque")? {
            "region3" => TorqueMode::Region3,
            _ => TorqueMode::Fixed(num("torque")?),
        };
        let wind = match get("wind")? {
            "constant" => WindInput::Constant(num("wind.speed")?),
            "synthetic" => WindInput::Synthetic(WindSpec {
                mean_speed: num("wind.mean_speed")?,
                sigma: num("wind.sigma")?,
                length_scale: num("wind.length_scale")?,
                dt: num("wind.dt")?,
                duration: num("wind.duration")?,
                seed: int("wind.seed")?,
            }),
            _ => return Err(Error::Spec("manifest lacks replayable wind data".to_string())),
        };
        let waves = match get("waves")? {
            "still" => WaveInput::Still,
            "synthetic" => WaveInput::Synthetic(WaveSpec {
                wind_speed: num("wave.wind_speed")?,
                components: int("wave.components")? as usize,
                band: (num("wave.band_low")?, num("wave.band_high")?),
                g: num("wave.g")?,
                seed: int("wave.seed")?,
            }),
            _ => return Err(Error::Spec("manifest lacks replayable wave data".to_string())),
        };
        Ok(Self {
            dt: num("dt")?,
            duration: num("duration")?,
            decimation: int("decimation")? as usize,
            initial,
            initial_pitch,
            control,
            torque,
            wind,
            waves,
            report_x: num("report_x")?,
        })
    }
}
