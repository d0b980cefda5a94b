use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinPoint {
    pub bin: usize,
    pub center: f64,
    pub mean: f64,
    pub count: usize,
}

/// Count-weighted least-squares line through the bin means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    /// 95 % confidence interval of the slope.
    pub ci: (f64, f64),
}

impl LinearFit {
    pub fn slope_excludes_zero(&self) -> bool {
        self.ci.0 > 0.0 || self.ci.1 < 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinnedScatter {
    pub points: Vec<BinPoint>,
    pub empty_bins: Vec<usize>,
    pub fit: Option<LinearFit>,
}

/// Splits the x range into `n_bins` equal intervals and averages y in each.
pub fn binned_scatter(x: &[f64], y: &[f64], n_bins: usize) -> Result<BinnedScatter, LabError> {
    if x.len() != y.len() {
        return Err(LabError::Analysis(format!("{} x samples but {} y samples", x.len(), y.len())));
    }
    if x.is_empty() || n_bins == 0 {
        return Err(LabError::Analysis("binned scatter needs samples and at least one bin".into()));
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let width = if hi > lo { (hi - lo) / n_bins as f64 } else { 1.0 };
    let mut sum = vec![0.0; n_bins];
    let mut count = vec![0usize; n_bins];
    for (&xv, &yv) in x.iter().zip(y) {
        let i = (((xv - lo) / width) as usize).min(n_bins - 1);
        sum[i] += yv;
        count[i] += 1;
    }
    let mut points = Vec::new();
    let mut empty_bins = Vec::new();
    for i in 0..n_bins {
        if count[i] == 0 {
            empty_bins.push(i);
        } else {
            points.push(BinPoint {
                bin: i,
                center: lo + (i as f64 + 0.5) * width,
                mean: sum[i] / count[i] as f64,
                count: count[i],
            });
        }
    }
    let fit = fit_line(&points);
    Ok(BinnedScatter { points, empty_bins, fit })
}

/// A bin mean of `n` samples has variance `σ²/n`, so bins are weighted by
/// count and `σ²` is estimated from the weighted residuals.
fn fit_line(points: &[BinPoint]) -> Option<LinearFit> {
    if points.len() < 3 {
        return None;
    }
    let w: Vec<f64> = points.iter().map(|p| p.count as f64).collect();
    let sw: f64 = w.iter().sum();
    let xm = points.iter().zip(&w).map(|(p, w)| w * p.center).sum::<f64>() / sw;
    let ym = points.iter().zip(&w).map(|(p, w)| w * p.mean).sum::<f64>() / sw;
    let sxx: f64 = points.iter().zip(&w).map(|(p, w)| w * (p.center - xm).powi(2)).sum();
    let sxy: f64 = points.iter().zip(&w).map(|(p, w)| w * (p.center - xm) * (p.mean - ym)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let dof = (points.len() - 2) as f64;
    let rss: f64 = points.iter().zip(&w).map(|(p, w)| w * (p.mean - intercept - slope * p.center).powi(2)).sum();
    let slope_se = (rss / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).ok()?.inverse_cdf(0.975);
    Some(LinearFit { slope, intercept, slope_se, ci: (slope - t * slope_se, slope + t * slope_se) })
}
