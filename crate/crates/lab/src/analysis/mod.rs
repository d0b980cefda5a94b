//! Statistical post-processing of trajectories and ensembles.
//!
//! Everything here is a pure function of recorded series. Report writers
//! emit comma-separated tables with a header row.

mod collocation;
mod events;
mod scatter;
mod spectrum;
mod stats;

pub use collocation::{extreme_collocation, CollocationReport, Conditional};
pub use events::{
    attribute, classify_event, correlation, detect_events, AnomalyEvent, Attribution, Baseline, EventClass,
    QuietBand, Threshold,
};
pub use scatter::{binned_scatter, BinPoint, BinnedScatter, LinearFit};
pub use spectrum::{fft_spectrum, SpectrumReport, Window};
pub use stats::{
    count_modes, ks_distance, pdf, percentile, percentile_bands, pooled, trajectory_extremes, Bands, Extremes,
    Histogram,
};

pub mod report;
