use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    pub fn name(self) -> &'static str {
        match self {
            Window::Hann => "hann",
            Window::Rectangular => "rectangular",
        }
    }

    fn weight(self, i: usize, n: usize) -> f64 {
        match self {
            // periodic form: its transform is confined to bins 0 and ±1
            Window::Hann => 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos(),
            Window::Rectangular => 1.0,
        }
    }
}

/// One-sided magnitude spectrum scaled to a unit peak.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Bin frequencies, Hz.
    pub frequency: Vec<f64>,
    pub magnitude: Vec<f64>,
    pub window: Window,
    pub samples: usize,
    pub dt: f64,
    /// Largest raw magnitude before scaling (0 for an all-zero input).
    pub peak_raw: f64,
}

impl SpectrumReport {
    pub fn bin_width(&self) -> f64 {
        1.0 / (self.samples as f64 * self.dt)
    }

    /// Frequency of the largest magnitude, Hz.
    pub fn peak_frequency(&self) -> f64 {
        let i = self
            .magnitude
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i);
        self.frequency[i]
    }
}

pub fn fft_spectrum(series: &[f64], dt: f64, window: Window) -> Result<SpectrumReport, LabError> {
    let n = series.len();
    if n < 16 {
        return Err(LabError::Analysis(format!("spectrum needs at least 16 samples, got {n}")));
    }
    if !(dt > 0.0) {
        return Err(LabError::Analysis("sample interval must be positive".into()));
    }
    let mut buf: Vec<Complex<f64>> =
        series.iter().enumerate().map(|(i, &v)| Complex::new(v * window.weight(i, n), 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2 + 1;
    let mut magnitude: Vec<f64> = buf[..half].iter().map(|c| c.norm()).collect();
    let peak_raw = magnitude.iter().cloned().fold(0.0, f64::max);
    if peak_raw > 0.0 {
        magnitude.iter_mut().for_each(|m| *m /= peak_raw);
    }
    let frequency = (0..half).map(|k| k as f64 / (n as f64 * dt)).collect();
    Ok(SpectrumReport { frequency, magnitude, window, samples: n, dt, peak_raw })
}
