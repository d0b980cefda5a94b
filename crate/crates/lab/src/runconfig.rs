//! Run and campaign configuration files.
//!
//! One `key = value [unit]` document describes a run (or the template run of
//! a campaign). Besides the run keys listed in [`RUN_KEYS`] it may override
//! any turbine parameter by its parameter-file key (`K_d = 0.3`,
//! `omega_0 = 12.1 [rpm]`). Paths are relative to the file's directory.
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `params`, `cp_table`, `ct_table` | parameter file and rotor tables | shipped reference |
//! | `dt`, `duration` | step and length, s | 0.05, 1500 |
//! | `decimation` | keep every n-th step | 1 |
//! | `wind_speed` | mean hub-height wind, m/s | 20 |
//! | `wind` | `turbulent` or `constant` | turbulent |
//! | `turbulence_sigma`, `length_scale`, `wind_dt` | von Karman settings | IEC class B, 147 m, 0.01 s |
//! | `waves` | `pm` or `still` | pm |
//! | `wave_wind_speed`, `wave_components` | sea-state reference speed, component count | `wind_speed`, 128 |
//! | `base_seed` | seeds every stochastic stream | 0 |
//! | `wind_seed`, `wave_seed` | explicit stream seeds for single runs | derived from `base_seed` |
//! | `controller` | `pid` or `fixed` | pid |
//! | `integral_mode` | `average` or `plain` | average |
//! | `increment` | `per-step` or `per-second` | per-step |
//! | `anti_windup` | `true` / `false` | true |
//! | `derivative_filter` | low-pass time constant, s, or `none` | none |
//! | `torque` | `region3` or a constant generator torque, N·m | region3 |
//! | `initial_pitch` | `trim` or an angle (`[deg]` or `[rad]`) | trim |
//! | `initial` | `equilibrium` | equilibrium |
//! | `report_x` | wave-elevation probe position, m | 0 |
//! | `n_runs`, `workers`, `format` | campaign size, worker count, `csv`/`bin` | 1, all cores, csv |

use std::fs;
use std::path::{Path, PathBuf};

use fowt_core::control::{IncrementMode, IntegralMode, PidConfig};
use fowt_core::environment::{WaveSpec, WindSpec};
use fowt_core::kv::{self, Entry};
use fowt_core::params::{self, deg_to_rad, load_surface, SurfaceKind};
use fowt_core::rng::{stream_seed, Stream};
use fowt_core::sim::{Control, Initial, SimConfig, TorqueMode, WaveInput, WindInput};
use fowt_core::Error;

use crate::ensemble::Model;
use crate::io::TrajectoryFormat;
use crate::LabError;

pub const RUN_KEYS: &[&str] = &[
    "params",
    "cp_table",
    "ct_table",
    "dt",
    "duration",
    "decimation",
    "wind_speed",
    "wind",
    "turbulence_sigma",
    "length_scale",
    "wind_dt",
    "waves",
    "wave_wind_speed",
    "wave_components",
    "base_seed",
    "wind_seed",
    "wave_seed",
    "controller",
    "integral_mode",
    "increment",
    "anti_windup",
    "derivative_filter",
    "torque",
    "initial_pitch",
    "initial",
    "report_x",
    "n_runs",
    "workers",
    "format",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Effective entries, overrides applied.
    pub entries: Vec<Entry>,
    /// Directory that relative paths resolve against.
    pub base_dir: PathBuf,
    /// Overrides in the order given, as `(key, value text)`.
    pub overrides: Vec<(String, String)>,
}

/// Campaign-level settings carried by a run config.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignSettings {
    pub n_runs: usize,
    pub base_seed: u64,
    pub workers: Option<usize>,
    pub format: TrajectoryFormat,
}

fn bad(key: &str, msg: impl Into<String>) -> Error {
    Error::BadValue { key: key.to_string(), msg: msg.into() }
}

impl RunConfig {
    pub fn from_text(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, LabError> {
        let entries = kv::parse(text)?;
        let cfg = Self { entries, base_dir: base_dir.into(), overrides: Vec::new() };
        cfg.check_keys()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_text(&text, dir)
    }

    /// Empty document: every key at its default.
    pub fn defaults() -> Self {
        Self { entries: Vec::new(), base_dir: PathBuf::from("."), overrides: Vec::new() }
    }

    fn check_keys(&self) -> Result<(), LabError> {
        let reference = crate::reference_model()?.params;
        for e in &self.entries {
            if !RUN_KEYS.contains(&e.key.as_str()) && params::get(&reference, &e.key).is_none() {
                return Err(Error::UnknownKey(e.key.clone()).into());
            }
        }
        Ok(())
    }

    /// Applies `key=value` (an optional `[unit]` may follow the value).
    pub fn apply_override(&mut self, spec: &str) -> Result<(), LabError> {
        let parsed = kv::parse(spec).map_err(|_| LabError::Usage(format!("override `{spec}` is not `key=value`")))?;
        let [entry] = parsed.as_slice() else {
            return Err(LabError::Usage(format!("override `{spec}` is not `key=value`")));
        };
        let mut entry = entry.clone();
        match self.entries.iter_mut().find(|e| e.key == entry.key) {
            Some(slot) => {
                entry.line = slot.line;
                *slot = entry.clone();
            }
            None => {
                entry.line = 0;
                self.entries.push(entry.clone());
            }
        }
        self.check_keys()?;
        let text = match &entry.unit {
            Some(u) => format!("{} [{u}]", entry.value),
            None => entry.value.clone(),
        };
        self.overrides.push((entry.key, text));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).map_or(default, |e| e.value.as_str())
    }

    fn num(&self, key: &str) -> Result<Option<f64>, Error> {
        self.get(key).map(|e| kv::parse_f64(key, &e.value)).transpose()
    }

    fn num_or(&self, key: &str, default: f64) -> Result<f64, Error> {
        Ok(self.num(key)?.unwrap_or(default))
    }

    fn int(&self, key: &str) -> Result<Option<u64>, Error> {
        self.get(key).map(|e| e.value.parse::<u64>().map_err(|_| bad(key, "not a non-negative integer"))).transpose()
    }

    /// Effective document, overrides included.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            kv::push(&mut out, &e.key, &e.value, e.unit.as_deref());
        }
        out
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(|e| self.base_dir.join(&e.value))
    }

    fn read(&self, key: &str) -> Result<Option<String>, LabError> {
        match self.path(key) {
            Some(p) => fs::read_to_string(&p).map(Some).map_err(|e| LabError::io(p, e)),
            None => Ok(None),
        }
    }

    /// Parameters and rotor tables, with parameter keys in this document applied.
    pub fn model(&self) -> Result<Model, LabError> {
        let base = crate::reference_model()?;
        let text = match self.read("params")? {
            Some(t) => t,
            None => params::serialize(&base.params),
        };
        let mut entries = kv::parse(&text)?;
        for e in self.entries.iter().filter(|e| !RUN_KEYS.contains(&e.key.as_str())) {
            match entries.iter_mut().find(|x| x.key == e.key) {
                Some(slot) => *slot = e.clone(),
                None => entries.push(e.clone()),
            }
        }
        let params = params::from_entries(&entries)?;
        let power = match self.read("cp_table")? {
            Some(t) => load_surface(&t, SurfaceKind::Power)?,
            None => base.power,
        };
        let thrust = match self.read("ct_table")? {
            Some(t) => load_surface(&t, SurfaceKind::Thrust)?,
            None => base.thrust,
        };
        Ok(Model { params, power, thrust })
    }

    pub fn campaign(&self) -> Result<CampaignSettings, LabError> {
        let n_runs = self.int("n_runs")?.unwrap_or(1) as usize;
        if n_runs == 0 {
            return Err(bad("n_runs", "must be at least 1").into());
        }
        let workers = self.int("workers")?.map(|w| w as usize);
        if workers == Some(0) {
            return Err(bad("workers", "must be at least 1").into());
        }
        let format = match self.str_or("format", "csv") {
            "csv" => TrajectoryFormat::Csv,
            "bin" => TrajectoryFormat::Binary,
            v => return Err(bad("format", format!("expected `csv` or `bin`, got `{v}`")).into()),
        };
        Ok(CampaignSettings { n_runs, base_seed: self.int("base_seed")?.unwrap_or(0), workers, format })
    }

    /// The single-run configuration. Stream seeds default to run 0 of `base_seed`.
    pub fn sim_config(&self, g: f64) -> Result<SimConfig, LabError> {
        let d = SimConfig::default();
        let dt = self.num_or("dt", d.dt)?;
        let duration = self.num_or("duration", d.duration)?;
        let decimation = self.int("decimation")?.unwrap_or(1) as usize;
        let u = self.num_or("wind_speed", 20.0)?;
        let base = self.int("base_seed")?.unwrap_or(0);
        let wind_seed = self.int("wind_seed")?.unwrap_or_else(|| stream_seed(base, 0, Stream::Wind));
        let wave_seed = self.int("wave_seed")?.unwrap_or_else(|| stream_seed(base, 0, Stream::Wave));

        let wind = match self.str_or("wind", "turbulent") {
            "constant" => WindInput::Constant(u),
            "turbulent" => {
                let mut s = WindSpec::new(u, 0.0, wind_seed);
                s.sigma = self.num_or("turbulence_sigma", s.sigma)?;
                s.length_scale = self.num_or("length_scale", s.length_scale)?;
                s.dt = self.num_or("wind_dt", s.dt)?;
                // the synthesis needs at least ten integral time scales
                s.duration = duration.max(10.0 * s.length_scale / u.max(f64::MIN_POSITIVE)).max(s.dt);
                WindInput::Synthetic(s)
            }
            v => return Err(bad("wind", format!("expected `turbulent` or `constant`, got `{v}`")).into()),
        };
        let waves = match self.str_or("waves", "pm") {
            "still" => WaveInput::Still,
            "pm" => {
                let mut s = WaveSpec::new(self.num_or("wave_wind_speed", u)?, g, wave_seed);
                s.components = self.int("wave_components")?.map_or(s.components, |c| c as usize);
                WaveInput::Synthetic(s)
            }
            v => return Err(bad("waves", format!("expected `pm` or `still`, got `{v}`")).into()),
        };
        let control = match self.str_or("controller", "pid") {
            "fixed" => Control::Fixed,
            "pid" => {
                let integral_mode = IntegralMode::parse(self.str_or("integral_mode", "average"))
                    .ok_or_else(|| bad("integral_mode", "expected `average` or `plain`"))?;
                let increment = IncrementMode::parse(self.str_or("increment", "per-step"))
                    .ok_or_else(|| bad("increment", "expected `per-step` or `per-second`"))?;
                let anti_windup = match self.str_or("anti_windup", "true") {
                    "true" => true,
                    "false" => false,
                    _ => return Err(bad("anti_windup", "expected `true` or `false`").into()),
                };
                let derivative_filter = match self.str_or("derivative_filter", "none") {
                    "none" => None,
                    _ => Some(self.num_or("derivative_filter", 0.0)?),
                };
                Control::Pid(PidConfig { integral_mode, increment, anti_windup, derivative_filter })
            }
            v => return Err(bad("controller", format!("expected `pid` or `fixed`, got `{v}`")).into()),
        };
        let torque = match self.str_or("torque", "region3") {
            "region3" => TorqueMode::Region3,
            _ => TorqueMode::Fixed(self.num_or("torque", 0.0)?),
        };
        let initial_pitch = match self.get("initial_pitch") {
            None => None,
            Some(e) if e.value == "trim" => None,
            Some(e) => {
                let v = kv::parse_f64("initial_pitch", &e.value)?;
                Some(match e.unit.as_deref() {
                    None | Some("rad") => v,
                    Some("deg") => deg_to_rad(v),
                    Some(other) => return Err(bad("initial_pitch", format!("unsupported unit `{other}`")).into()),
                })
            }
        };
        if self.str_or("initial", "equilibrium") != "equilibrium" {
            return Err(bad("initial", "only `equilibrium` can be configured from a file").into());
        }
        let cfg = SimConfig {
            dt,
            duration,
            decimation,
            initial: Initial::Equilibrium,
            initial_pitch,
            control,
            torque,
            wind,
            waves,
            report_x: self.num_or("report_x", 0.0)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
