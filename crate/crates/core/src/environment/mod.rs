//! Seeded stochastic forcing: hub-height wind and linear ocean waves.

mod wave;
mod wind;

pub use wave::{
    peak_frequency, pierson_moskowitz_psd, synthesize_waves, Kinematics, WaveComponent, WaveField, WaveSpec, MAX_COMPONENTS, PM_ALPHA,
    PM_BETA,
};
pub use wind::{synthesize_wind, von_karman_psd, WindSeries, WindSpec};
