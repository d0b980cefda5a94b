use super::stats::{ks_distance, percentile};
use crate::LabError;

/// Values of one channel at the per-run extreme instants of another.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditional {
    pub at_max: Vec<f64>,
    pub at_min: Vec<f64>,
    /// KS distance between the max- and min-conditioned samples.
    pub overlap_ks: f64,
    /// KS distance of each conditioned sample from the pooled marginal.
    pub ks_vs_marginal: (f64, f64),
    /// 5/25/50/75/95th percentiles of `at_max` and `at_min`.
    pub percentiles_max: [f64; 5],
    pub percentiles_min: [f64; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollocationReport {
    /// Pitch at heave extremes.
    pub pitch_given_heave: Conditional,
    /// Heave at pitch extremes.
    pub heave_given_pitch: Conditional,
}

impl CollocationReport {
    /// Largest KS distance of any conditioned sample from its marginal.
    pub fn max_ks_vs_marginal(&self) -> f64 {
        let (a, b) = self.pitch_given_heave.ks_vs_marginal;
        let (c, d) = self.heave_given_pitch.ks_vs_marginal;
        a.max(b).max(c).max(d)
    }
}

const LEVELS: [f64; 5] = [5.0, 25.0, 50.0, 75.0, 95.0];

fn quantiles(v: &[f64]) -> [f64; 5] {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    LEVELS.map(|q| percentile(&s, q))
}

fn argext(s: &[f64]) -> (usize, usize) {
    let (mut lo, mut hi) = (0, 0);
    for (i, &v) in s.iter().enumerate() {
        if v < s[lo] {
            lo = i;
        }
        if v > s[hi] {
            hi = i;
        }
    }
    (hi, lo)
}

fn conditional(runs: &[(&[f64], &[f64])], marginal: &[f64]) -> Conditional {
    let (mut at_max, mut at_min) = (Vec::with_capacity(runs.len()), Vec::with_capacity(runs.len()));
    for (cond, other) in runs {
        let (hi, lo) = argext(cond);
        at_max.push(other[hi]);
        at_min.push(other[lo]);
    }
    Conditional {
        overlap_ks: ks_distance(&at_max, &at_min),
        ks_vs_marginal: (ks_distance(&at_max, marginal), ks_distance(&at_min, marginal)),
        percentiles_max: quantiles(&at_max),
        percentiles_min: quantiles(&at_min),
        at_max,
        at_min,
    }
}

/// `runs` holds `(heave, pitch)` per trajectory on a shared time axis.
pub fn extreme_collocation(runs: &[(&[f64], &[f64])]) -> Result<CollocationReport, LabError> {
    if runs.is_empty() {
        return Err(LabError::Analysis("no runs".into()));
    }
    if runs.iter().any(|(h, p)| h.is_empty() || h.len() != p.len()) {
        return Err(LabError::Analysis("each run needs equal-length nonempty heave and pitch".into()));
    }
    let heave: Vec<f64> = runs.iter().flat_map(|r| r.0.iter().copied()).collect();
    let pitch: Vec<f64> = runs.iter().flat_map(|r| r.1.iter().copied()).collect();
    let swapped: Vec<(&[f64], &[f64])> = runs.iter().map(|&(h, p)| (p, h)).collect();
    Ok(CollocationReport {
        pitch_given_heave: conditional(runs, &pitch),
        heave_given_pitch: conditional(&swapped, &heave),
    })
}
