use super::stats::percentile;
use crate::LabError;

/// Reference level and spread of a variable, taken over a whole campaign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    pub median: f64,
    pub sigma: f64,
}

impl Baseline {
    pub fn from_samples(samples: &[f64]) -> Result<Self, LabError> {
        if samples.is_empty() {
            return Err(LabError::Analysis("baseline needs samples".into()));
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len() as f64;
        let mean = s.iter().sum::<f64>() / n;
        let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Ok(Self { median: percentile(&s, 50.0), sigma: var.sqrt() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Deviation from the baseline, in the variable's units.
    Absolute(f64),
    /// `k` baseline standard deviations.
    Sigma(f64),
}

impl Threshold {
    pub fn level(self, baseline: &Baseline) -> f64 {
        match self {
            Threshold::Absolute(v) => v,
            Threshold::Sigma(k) => k * baseline.sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventClass {
    Short,
    Long,
    Unrecovered,
}

impl EventClass {
    pub fn name(self) -> &'static str {
        match self {
            EventClass::Short => "short",
            EventClass::Long => "long",
            EventClass::Unrecovered => "unrecovered",
        }
    }
}

/// A maximal excursion beyond the threshold, `[start, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyEvent {
    pub variable: String,
    pub start: f64,
    /// First instant back within the threshold (one step past the series for
    /// excursions that reach its end).
    pub end: f64,
    pub peak_value: f64,
    pub peak_time: f64,
    pub threshold: f64,
    /// Seconds from `end` until the variable settles; `None` until classified
    /// or when it never settles.
    pub recovery: Option<f64>,
    pub class: Option<EventClass>,
}

/// Excursion intervals where `|value − baseline| > threshold`, merged when
/// the gap between consecutive intervals is shorter than `merge_window`.
pub fn detect_events(
    variable: &str,
    time: &[f64],
    values: &[f64],
    baseline: &Baseline,
    threshold: Threshold,
    merge_window: f64,
) -> Vec<AnomalyEvent> {
    let level = threshold.level(baseline);
    let n = values.len().min(time.len());
    if n == 0 {
        return Vec::new();
    }
    let step = if n > 1 { time[1] - time[0] } else { 1.0 };
    let mut events: Vec<AnomalyEvent> = Vec::new();
    let mut i = 0;
    while i < n {
        if (values[i] - baseline.median).abs() <= level {
            i += 1;
            continue;
        }
        let first = i;
        let mut peak = i;
        while i < n && (values[i] - baseline.median).abs() > level {
            if (values[i] - baseline.median).abs() > (values[peak] - baseline.median).abs() {
                peak = i;
            }
            i += 1;
        }
        let end = if i < n { time[i] } else { time[n - 1] + step };
        let ev = AnomalyEvent {
            variable: variable.to_string(),
            start: time[first],
            end,
            peak_value: values[peak],
            peak_time: time[peak],
            threshold: level,
            recovery: None,
            class: None,
        };
        match events.last_mut() {
            Some(prev) if ev.start - prev.end < merge_window => {
                if (ev.peak_value - baseline.median).abs() > (prev.peak_value - baseline.median).abs() {
                    prev.peak_value = ev.peak_value;
                    prev.peak_time = ev.peak_time;
                }
                prev.end = ev.end;
            }
            _ => events.push(ev),
        }
    }
    events
}

/// When a disturbance counts as over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuietBand {
    pub center: f64,
    pub half_width: f64,
    /// How long the variable must stay inside the band, s.
    pub dwell: f64,
    /// Recoveries up to this long are short, s.
    pub short_cut: f64,
}

impl QuietBand {
    /// Two baseline standard deviations, 60 s dwell, 200 s cut.
    pub fn from_baseline(b: &Baseline) -> Self {
        Self { center: b.median, half_width: 2.0 * b.sigma, dwell: 60.0, short_cut: 200.0 }
    }
}

/// Recovery time is measured from the event end to the start of the first
/// stretch of at least `dwell` seconds spent inside the quiet band.
pub fn classify_event(time: &[f64], values: &[f64], event: &AnomalyEvent, band: &QuietBand) -> (EventClass, Option<f64>) {
    let n = values.len().min(time.len());
    let mut quiet_since: Option<usize> = None;
    for i in 0..n {
        if time[i] < event.end {
            continue;
        }
        if (values[i] - band.center).abs() <= band.half_width {
            let s = *quiet_since.get_or_insert(i);
            if time[i] - time[s] >= band.dwell {
                let recovery = time[s] - event.end;
                let class = if recovery <= band.short_cut { EventClass::Short } else { EventClass::Long };
                return (class, Some(recovery));
            }
        } else {
            quiet_since = None;
        }
    }
    (EventClass::Unrecovered, None)
}

/// Zero-lag Pearson correlation over the common length.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    if n < 2 {
        return f64::NAN;
    }
    let (a, b) = (&a[..n], &b[..n]);
    let ma = a.iter().sum::<f64>() / n as f64;
    let mb = b.iter().sum::<f64>() / n as f64;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}

/// Whether an event signature follows the wind or the waves.
#[derive(Debug, Clone, PartialEq)]
pub struct Attribution {
    /// Correlation of the source with each same-wind re-run.
    pub same_wind: Vec<f64>,
    /// Correlation of the source with each same-wave re-run.
    pub same_wave: Vec<f64>,
    pub wind_consistent: bool,
    pub wave_consistent: bool,
}

/// Compares the source series with counterfactual re-runs over a window of
/// sample indices. A factor "carries" the event when re-runs sharing it keep
/// a correlation above `level` on average and re-runs not sharing it do not.
pub fn attribute(
    source: &[f64],
    same_wind: &[&[f64]],
    same_wave: &[&[f64]],
    window: std::ops::Range<usize>,
    level: f64,
) -> Attribution {
    let cut = |s: &[f64]| -> Vec<f64> { s[window.start.min(s.len())..window.end.min(s.len())].to_vec() };
    let src = cut(source);
    let wind: Vec<f64> = same_wind.iter().map(|s| correlation(&src, &cut(s))).collect();
    let wave: Vec<f64> = same_wave.iter().map(|s| correlation(&src, &cut(s))).collect();
    let mean = |v: &[f64]| if v.is_empty() { f64::NAN } else { v.iter().sum::<f64>() / v.len() as f64 };
    let (mw, mv) = (mean(&wind), mean(&wave));
    Attribution {
        wind_consistent: mw > level && !(mv > level),
        wave_consistent: mv > level && !(mw > level),
        same_wind: wind,
        same_wave: wave,
    }
}
