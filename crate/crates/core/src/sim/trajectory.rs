use alloc::vec::Vec;

use super::Manifest;
use crate::dynamics::Failure;

/// Recorded channel names, in column order. States, forces and the pitch
/// acceleration are in the reporting frame; angles in rad, speeds in rad/s.
pub const CHANNELS: [&str; 17] = [
    "t",
    "surge",
    "surge_rate",
    "heave",
    "heave_rate",
    "pitch",
    "pitch_rate",
    "rotor_speed",
    "pitch_accel",
    "blade_pitch",
    "gen_torque",
    "aero_power",
    "wind_speed",
    "wave_elevation",
    "wave_force_surge",
    "wave_force_heave",
    "wave_moment_pitch",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Time,
    Surge,
    SurgeRate,
    Heave,
    HeaveRate,
    Pitch,
    PitchRate,
    RotorSpeed,
    PitchAccel,
    BladePitch,
    GenTorque,
    AeroPower,
    WindSpeed,
    WaveElevation,
    WaveForceSurge,
    WaveForceHeave,
    WaveMomentPitch,
}

impl Channel {
    pub const ALL: [Channel; 17] = [
        Channel::Time,
        Channel::Surge,
        Channel::SurgeRate,
        Channel::Heave,
        Channel::HeaveRate,
        Channel::Pitch,
        Channel::PitchRate,
        Channel::RotorSpeed,
        Channel::PitchAccel,
        Channel::BladePitch,
        Channel::GenTorque,
        Channel::AeroPower,
        Channel::WindSpeed,
        Channel::WaveElevation,
        Channel::WaveForceSurge,
        Channel::WaveForceHeave,
        Channel::WaveMomentPitch,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        CHANNELS[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Self> {
        CHANNELS.iter().position(|c| *c == name).map(|i| Self::ALL[i])
    }
}

/// Decimated time series of one run plus its manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// One column per entry of [`CHANNELS`].
    pub columns: Vec<Vec<f64>>,
    pub manifest: Manifest,
    pub failure: Option<Failure>,
}

impl Trajectory {
    pub fn with_capacity(n: usize, manifest: Manifest) -> Self {
        Self { columns: (0..CHANNELS.len()).map(|_| Vec::with_capacity(n)).collect(), manifest, failure: None }
    }

    pub fn len(&self) -> usize {
        self.columns[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, c: Channel) -> &[f64] {
        &self.columns[c.index()]
    }

    pub fn time(&self) -> &[f64] {
        self.get(Channel::Time)
    }

    pub fn push_row(&mut self, row: &[f64; 17]) {
        for (col, &v) in self.columns.iter_mut().zip(row) {
            col.push(v);
        }
    }

    pub fn row(&self, i: usize) -> [f64; 17] {
        core::array::from_fn(|c| self.columns[c][i])
    }
}
