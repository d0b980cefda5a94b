use crate::LabError;

/// Normalized histogram: `Σ density·width = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub count: usize,
    /// All samples were identical; a single unit-width bin centred on them.
    pub degenerate: bool,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn integral(&self) -> f64 {
        self.edges.windows(2).zip(&self.density).map(|(w, d)| (w[1] - w[0]) * d).sum()
    }
}

fn finite(samples: &[f64]) -> Result<(), LabError> {
    if samples.is_empty() {
        return Err(LabError::Analysis("no samples".into()));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(LabError::Analysis("samples must be finite".into()));
    }
    Ok(())
}

/// Equal-width histogram over `[min, max]`; the last bin is closed.
pub fn pdf(samples: &[f64], n_bins: usize) -> Result<Histogram, LabError> {
    finite(samples)?;
    if n_bins == 0 {
        return Err(LabError::Analysis("at least one bin is required".into()));
    }
    let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if lo == hi {
        return Ok(Histogram { edges: vec![lo - 0.5, lo + 0.5], density: vec![1.0], count: samples.len(), degenerate: true });
    }
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    for &v in samples {
        let i = (((v - lo) / width) as usize).min(n_bins - 1);
        counts[i] += 1;
    }
    let mut edges: Vec<f64> = (0..n_bins).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);
    let n = samples.len() as f64;
    let density = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, w)| c as f64 / (n * (w[1] - w[0])))
        .collect();
    Ok(Histogram { edges, density, count: samples.len(), degenerate: false })
}

/// Number of peaks of the histogram, after a moving average of half-width
/// `smooth` bins, whose topographic prominence exceeds `prominence` times the
/// highest density. A side with no higher ground ends at the histogram edge.
pub fn count_modes(h: &Histogram, smooth: usize, prominence: f64) -> usize {
    let n = h.density.len();
    let s: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b) = (i.saturating_sub(smooth), (i + smooth + 1).min(n));
            h.density[a..b].iter().sum::<f64>() / (b - a) as f64
        })
        .collect();
    let top = s.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    // plateaus count once, at their left end
    let is_peak = |i: usize| {
        let left = i == 0 || s[i - 1] < s[i];
        let mut j = i;
        while j + 1 < n && s[j + 1] == s[i] {
            j += 1;
        }
        left && (j + 1 == n || s[j + 1] < s[i])
    };
    let base = |range: &mut dyn Iterator<Item = usize>, peak: f64| {
        let mut low = f64::INFINITY;
        for k in range {
            if s[k] > peak {
                return low;
            }
            low = low.min(s[k]);
        }
        // reached the edge without finding higher ground
        if low.is_finite() { low } else { f64::NEG_INFINITY }
    };
    (0..n)
        .filter(|&i| is_peak(i))
        .filter(|&i| {
            let left = base(&mut (0..i).rev(), s[i]);
            let right = base(&mut (i + 1..n), s[i]);
            s[i] - left.max(right) > prominence * top
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub min: f64,
    pub max: f64,
    pub argmin_time: f64,
    pub argmax_time: f64,
}

/// Exact extrema of a recorded series; ties resolve to the first occurrence.
pub fn trajectory_extremes(time: &[f64], values: &[f64]) -> Result<Extremes, LabError> {
    if values.is_empty() || time.len() != values.len() {
        return Err(LabError::Analysis("extremes need a nonempty series with matching time axis".into()));
    }
    let (mut imin, mut imax) = (0, 0);
    for (i, &v) in values.iter().enumerate() {
        if v < values[imin] {
            imin = i;
        }
        if v > values[imax] {
            imax = i;
        }
    }
    Ok(Extremes { min: values[imin], max: values[imax], argmin_time: time[imin], argmax_time: time[imax] })
}

/// Linear-interpolated percentile (`q` in 0..=100) of sorted data.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = (q / 100.0).clamp(0.0, 1.0) * (n - 1) as f64;
    let i = pos.floor() as usize;
    if i + 1 >= n {
        return sorted[n - 1];
    }
    let f = pos - i as f64;
    sorted[i] + f * (sorted[i + 1] - sorted[i])
}

/// Per-time-step percentile curves plus pointwise envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct Bands {
    pub levels: Vec<f64>,
    /// One curve per level.
    pub curves: Vec<Vec<f64>>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

pub fn percentile_bands(series: &[&[f64]], levels: &[f64]) -> Result<Bands, LabError> {
    let Some(first) = series.first() else {
        return Err(LabError::Analysis("no trajectories".into()));
    };
    let len = first.len();
    if series.iter().any(|s| s.len() != len) {
        return Err(LabError::Analysis("trajectories do not share a time axis".into()));
    }
    let mut curves = vec![Vec::with_capacity(len); levels.len()];
    let (mut min, mut max) = (Vec::with_capacity(len), Vec::with_capacity(len));
    let mut column = Vec::with_capacity(series.len());
    for t in 0..len {
        column.clear();
        column.extend(series.iter().map(|s| s[t]));
        column.sort_by(f64::total_cmp);
        for (curve, &q) in curves.iter_mut().zip(levels) {
            curve.push(percentile(&column, q));
        }
        min.push(column[0]);
        max.push(column[column.len() - 1]);
    }
    Ok(Bands { levels: levels.to_vec(), curves, min, max })
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 1.0;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Concatenation of several series.
pub fn pooled<'a>(series: impl IntoIterator<Item = &'a [f64]>) -> Vec<f64> {
    series.into_iter().flat_map(|s| s.iter().copied()).collect()
}
