//! Table writers and the campaign-wide analysis pass.
//!
//! Files written by [`analyze_campaign`] into its output directory:
//!
//! | file | columns |
//! |---|---|
//! | `pdf_<var>.csv` | `bin_low, bin_high, density` |
//! | `extremes_<var>.csv` | `run, min, max, argmin_time, argmax_time` |
//! | `bands_<var>.csv` | `t, min, p5, p25, p50, p75, p95, max` (complete runs only) |
//! | `spectrum_<var>.csv` | `frequency_hz, magnitude` (run-averaged, unit peak) |
//! | `scatter_heave_pitch.csv` | `bin, heave_center, pitch_mean, count` |
//! | `collocation.csv` | `condition, run, value` |
//! | `events.csv` | `run, variable, start, end, peak_value, peak_time, threshold, recovery, class` |
//! | `summary.manifest` | settings, unimodality, tail check, fit and KS statistics |

use std::collections::BTreeMap;
use std::path::Path;

use fowt_core::sim::{Channel, Manifest, Trajectory};

use super::{
    binned_scatter, classify_event, count_modes, detect_events, extreme_collocation, fft_spectrum, pdf,
    percentile, percentile_bands, trajectory_extremes, AnomalyEvent, Bands, Baseline, BinnedScatter,
    CollocationReport, Histogram, QuietBand, SpectrumReport, Threshold, Window,
};
use crate::ensemble::EnsembleResult;
use crate::io::{cell, write_manifest, write_table};
use crate::LabError;

pub fn write_histogram(path: &Path, h: &Histogram) -> Result<(), LabError> {
    write_table(
        path,
        &["bin_low", "bin_high", "density"],
        h.edges.windows(2).zip(&h.density).map(|(w, d)| vec![cell(w[0]), cell(w[1]), cell(*d)]),
    )
}

pub fn write_bands(path: &Path, time: &[f64], b: &Bands) -> Result<(), LabError> {
    let mut header = vec!["t".to_string(), "min".to_string()];
    header.extend(b.levels.iter().map(|q| format!("p{q}")));
    header.push("max".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_table(
        path,
        &header,
        (0..time.len()).map(|t| {
            let mut row = vec![cell(time[t]), cell(b.min[t])];
            row.extend(b.curves.iter().map(|c| cell(c[t])));
            row.push(cell(b.max[t]));
            row
        }),
    )
}

pub fn write_spectrum(path: &Path, s: &SpectrumReport) -> Result<(), LabError> {
    write_table(
        path,
        &["frequency_hz", "magnitude"],
        s.frequency.iter().zip(&s.magnitude).map(|(f, m)| vec![cell(*f), cell(*m)]),
    )
}

pub fn write_scatter(path: &Path, s: &BinnedScatter) -> Result<(), LabError> {
    write_table(
        path,
        &["bin", "x_center", "y_mean", "count"],
        s.points.iter().map(|p| vec![p.bin.to_string(), cell(p.center), cell(p.mean), p.count.to_string()]),
    )
}

pub fn write_events(path: &Path, events: &[(usize, AnomalyEvent)]) -> Result<(), LabError> {
    write_table(
        path,
        &["run", "variable", "start", "end", "peak_value", "peak_time", "threshold", "recovery", "class"],
        events.iter().map(|(run, e)| {
            vec![
                run.to_string(),
                e.variable.clone(),
                cell(e.start),
                cell(e.end),
                cell(e.peak_value),
                cell(e.peak_time),
                cell(e.threshold),
                e.recovery.map_or(String::new(), cell),
                e.class.map_or("", |c| c.name()).to_string(),
            ]
        }),
    )
}

pub fn write_collocation(path: &Path, runs: &[usize], r: &CollocationReport) -> Result<(), LabError> {
    let groups = [
        ("pitch_at_heave_max", &r.pitch_given_heave.at_max),
        ("pitch_at_heave_min", &r.pitch_given_heave.at_min),
        ("heave_at_pitch_max", &r.heave_given_pitch.at_max),
        ("heave_at_pitch_min", &r.heave_given_pitch.at_min),
    ];
    write_table(
        path,
        &["condition", "run", "value"],
        groups
            .iter()
            .flat_map(|(name, vals)| vals.iter().zip(runs).map(move |(v, run)| vec![name.to_string(), run.to_string(), cell(*v)])),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeSettings {
    pub variables: Vec<Channel>,
    pub bins: usize,
    pub scatter_bins: usize,
    pub levels: Vec<f64>,
    /// Per-variable thresholds; variables not listed use `default_threshold`.
    pub thresholds: BTreeMap<&'static str, Threshold>,
    pub default_threshold: Threshold,
    pub merge_window: f64,
    pub dwell: f64,
    pub short_cut: f64,
    /// Moving-average half-width and prominence used for the mode count.
    pub mode_smoothing: usize,
    pub mode_prominence: f64,
}

impl Default for AnalyzeSettings {
    fn default() -> Self {
        Self {
            variables: vec![Channel::Surge, Channel::Heave, Channel::Pitch, Channel::RotorSpeed, Channel::BladePitch],
            bins: 60,
            scatter_bins: 100,
            levels: vec![5.0, 25.0, 50.0, 75.0, 95.0],
            thresholds: BTreeMap::from([("surge", Threshold::Absolute(8.0))]),
            default_threshold: Threshold::Sigma(4.0),
            merge_window: 30.0,
            dwell: 60.0,
            short_cut: 200.0,
            mode_smoothing: 2,
            mode_prominence: 0.05,
        }
    }
}

/// Per-variable summary of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableSummary {
    pub variable: Channel,
    pub histogram: Histogram,
    pub modes: usize,
    pub baseline: Baseline,
    /// Pooled 99th percentile and mean of per-run maxima.
    pub pooled_p99: f64,
    pub mean_run_max: f64,
    /// Pooled 1st percentile and mean of per-run minima.
    pub pooled_p1: f64,
    pub mean_run_min: f64,
}

pub fn summarize(trajs: &[Trajectory], c: Channel, s: &AnalyzeSettings) -> Result<VariableSummary, LabError> {
    let pooled: Vec<f64> = trajs.iter().flat_map(|t| t.get(c).iter().copied()).collect();
    let histogram = pdf(&pooled, s.bins)?;
    let modes = count_modes(&histogram, s.mode_smoothing, s.mode_prominence);
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let live: Vec<&Trajectory> = trajs.iter().filter(|t| !t.is_empty()).collect();
    let n = live.len() as f64;
    let mut mean_run_max = 0.0;
    let mut mean_run_min = 0.0;
    for t in &live {
        let e = trajectory_extremes(t.time(), t.get(c))?;
        mean_run_max += e.max / n;
        mean_run_min += e.min / n;
    }
    Ok(VariableSummary {
        variable: c,
        histogram,
        modes,
        baseline: Baseline::from_samples(&pooled)?,
        pooled_p99: percentile(&sorted, 99.0),
        mean_run_max,
        pooled_p1: percentile(&sorted, 1.0),
        mean_run_min,
    })
}

/// Unit-peak spectrum averaged over runs of equal length.
pub fn mean_spectrum(trajs: &[&Trajectory], c: Channel) -> Result<SpectrumReport, LabError> {
    let first = trajs.first().ok_or_else(|| LabError::Analysis("no complete runs".into()))?;
    let dt = first.time()[1] - first.time()[0];
    let mut acc: Option<SpectrumReport> = None;
    for t in trajs {
        let mut s = fft_spectrum(t.get(c), dt, Window::Hann)?;
        s.magnitude.iter_mut().for_each(|m| *m *= s.peak_raw);
        match acc.as_mut() {
            None => acc = Some(s),
            Some(a) => a.magnitude.iter_mut().zip(&s.magnitude).for_each(|(x, y)| *x += y),
        }
    }
    let mut a = acc.expect("at least one run");
    let peak = a.magnitude.iter().cloned().fold(0.0, f64::max);
    a.peak_raw = peak / trajs.len() as f64;
    if peak > 0.0 {
        a.magnitude.iter_mut().for_each(|m| *m /= peak);
    }
    Ok(a)
}

/// Runs every analysis over a finished campaign and writes the tables.
pub fn analyze_campaign(ens: &EnsembleResult, out: &Path, s: &AnalyzeSettings) -> Result<Manifest, LabError> {
    let trajs = ens.trajectories()?;
    let runs: Vec<usize> = ens.index.iter().map(|e| e.run).collect();
    let full_len = trajs.iter().map(Trajectory::len).max().unwrap_or(0);
    let complete: Vec<&Trajectory> = trajs.iter().filter(|t| t.len() == full_len && t.len() > 1).collect();

    let mut summary = Manifest::new();
    summary.insert("runs".into(), trajs.len().to_string());
    summary.insert("complete_runs".into(), complete.len().to_string());
    summary.insert("bins".into(), s.bins.to_string());
    summary.insert("mode_smoothing".into(), s.mode_smoothing.to_string());
    summary.insert("mode_prominence".into(), cell(s.mode_prominence));
    if let Some(h) = ens.manifest.get("param_hash") {
        summary.insert("param_hash".into(), h.clone());
    }

    let mut events = Vec::new();
    for &c in &s.variables {
        let name = c.name();
        let v = summarize(&trajs, c, s)?;
        write_histogram(&out.join(format!("pdf_{name}.csv")), &v.histogram)?;
        summary.insert(format!("{name}.modes"), v.modes.to_string());
        summary.insert(format!("{name}.median"), cell(v.baseline.median));
        summary.insert(format!("{name}.sigma"), cell(v.baseline.sigma));
        summary.insert(format!("{name}.pooled_p99"), cell(v.pooled_p99));
        summary.insert(format!("{name}.mean_run_max"), cell(v.mean_run_max));
        summary.insert(format!("{name}.pooled_p1"), cell(v.pooled_p1));
        summary.insert(format!("{name}.mean_run_min"), cell(v.mean_run_min));

        let ext: Vec<Vec<String>> = trajs
            .iter()
            .zip(&runs)
            .filter(|(t, _)| !t.is_empty())
            .map(|(t, run)| {
                let e = trajectory_extremes(t.time(), t.get(c))?;
                Ok(vec![run.to_string(), cell(e.min), cell(e.max), cell(e.argmin_time), cell(e.argmax_time)])
            })
            .collect::<Result<_, LabError>>()?;
        write_table(&out.join(format!("extremes_{name}.csv")), &["run", "min", "max", "argmin_time", "argmax_time"], ext)?;

        if !complete.is_empty() {
            let series: Vec<&[f64]> = complete.iter().map(|t| t.get(c)).collect();
            let bands = percentile_bands(&series, &s.levels)?;
            write_bands(&out.join(format!("bands_{name}.csv")), complete[0].time(), &bands)?;
        }

        let threshold = s.thresholds.get(name).copied().unwrap_or(s.default_threshold);
        let band = QuietBand { dwell: s.dwell, short_cut: s.short_cut, ..QuietBand::from_baseline(&v.baseline) };
        for (t, &run) in trajs.iter().zip(&runs) {
            for mut e in detect_events(name, t.time(), t.get(c), &v.baseline, threshold, s.merge_window) {
                let (class, recovery) = classify_event(t.time(), t.get(c), &e, &band);
                e.class = Some(class);
                e.recovery = recovery;
                events.push((run, e));
            }
        }
    }
    summary.insert("events".into(), events.len().to_string());
    write_events(&out.join("events.csv"), &events)?;

    if complete.len() >= 1 && full_len >= 16 {
        for c in [Channel::WindSpeed, Channel::WaveElevation, Channel::Pitch, Channel::Surge, Channel::Heave] {
            let sp = mean_spectrum(&complete, c)?;
            summary.insert(format!("{}.spectral_peak_hz", c.name()), cell(sp.peak_frequency()));
            write_spectrum(&out.join(format!("spectrum_{}.csv", c.name())), &sp)?;
        }
    }

    let heave: Vec<f64> = trajs.iter().flat_map(|t| t.get(Channel::Heave).iter().copied()).collect();
    let pitch: Vec<f64> = trajs.iter().flat_map(|t| t.get(Channel::Pitch).iter().copied()).collect();
    let scatter = binned_scatter(&heave, &pitch, s.scatter_bins)?;
    write_scatter(&out.join("scatter_heave_pitch.csv"), &scatter)?;
    if let Some(f) = scatter.fit {
        summary.insert("scatter.slope".into(), cell(f.slope));
        summary.insert("scatter.ci_low".into(), cell(f.ci.0));
        summary.insert("scatter.ci_high".into(), cell(f.ci.1));
    }
    let live: Vec<(usize, (&[f64], &[f64]))> = trajs
        .iter()
        .zip(&runs)
        .filter(|(t, _)| !t.is_empty())
        .map(|(t, &r)| (r, (t.get(Channel::Heave), t.get(Channel::Pitch))))
        .collect();
    let pairs: Vec<(&[f64], &[f64])> = live.iter().map(|x| x.1).collect();
    let ids: Vec<usize> = live.iter().map(|x| x.0).collect();
    let col = extreme_collocation(&pairs)?;
    write_collocation(&out.join("collocation.csv"), &ids, &col)?;
    summary.insert("collocation.pitch_overlap_ks".into(), cell(col.pitch_given_heave.overlap_ks));
    summary.insert("collocation.heave_overlap_ks".into(), cell(col.heave_given_pitch.overlap_ks));
    summary.insert("collocation.max_ks_vs_marginal".into(), cell(col.max_ks_vs_marginal()));

    write_manifest(&out.join("summary.manifest"), &summary)?;
    Ok(summary)
}
