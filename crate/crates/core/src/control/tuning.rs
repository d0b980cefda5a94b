//! Empirical gain tuning.
//!
//! Each procedure takes the closed-loop experiment as a closure, so the same
//! search runs against the full turbine model or a synthetic plant.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::Error;

/// Declares a rotor-speed record unstable when its oscillation does not decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstabilityDetector {
    /// Window length, s.
    pub window: f64,
    /// Relative shrink between consecutive windows still counted as "not decaying".
    pub tolerance: f64,
    /// Peak-to-peak amplitudes below this are treated as settled.
    pub floor: f64,
}

impl Default for InstabilityDetector {
    fn default() -> Self {
        Self { window: 60.0, tolerance: 0.02, floor: 1e-3 }
    }
}

impl InstabilityDetector {
    /// Compares peak-to-peak amplitude over the last three windows of `series`.
    pub fn is_unstable(&self, series: &[f64], dt: f64) -> bool {
        let w = (self.window / dt).round() as usize;
        if w == 0 || series.len() < 3 * w {
            return false;
        }
        let tail = &series[series.len() - 3 * w..];
        let ptp = |s: &[f64]| {
            let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            hi - lo
        };
        let a = [ptp(&tail[..w]), ptp(&tail[w..2 * w]), ptp(&tail[2 * w..])];
        if a.iter().any(|v| !v.is_finite()) {
            return true;
        }
        let keeps = |prev: f64, next: f64| next >= prev * (1.0 - self.tolerance);
        a[2] > self.floor && keeps(a[0], a[1]) && keeps(a[1], a[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionalSearch {
    pub start: f64,
    pub upper: f64,
    /// Multiplicative ramp step.
    pub growth: f64,
    pub bisections: usize,
}

impl Default for ProportionalSearch {
    fn default() -> Self {
        Self { start: 0.01, upper: 100.0, growth: 2.0, bisections: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalTuning {
    /// Half the critical multiplier.
    pub a_p: f64,
    pub critical: f64,
    /// `(a_p, unstable)` for every experiment run.
    pub trials: Vec<(f64, bool)>,
}

/// Ramps the proportional multiplier until `unstable` reports loss of
/// stability, refines the boundary by bisection and returns half of it.
pub fn tune_proportional(
    search: &ProportionalSearch,
    mut unstable: impl FnMut(f64) -> bool,
) -> Result<ProportionalTuning, Error> {
    let mut trials = Vec::new();
    let mut stable = 0.0;
    let mut a = search.start;
    let mut critical = None;
    while a <= search.upper {
        let u = unstable(a);
        trials.push((a, u));
        if u {
            critical = Some(a);
            break;
        }
        stable = a;
        a *= search.growth;
    }
    let mut hi = critical.ok_or(Error::NoInstability { upper: search.upper })?;
    let mut lo = stable;
    for _ in 0..search.bisections {
        let mid = 0.5 * (lo + hi);
        let u = unstable(mid);
        trials.push((mid, u));
        if u {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ProportionalTuning { a_p: hi / 2.0, critical: hi, trials })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralSearch {
    pub start: f64,
    pub lower: f64,
    pub upper: f64,
    /// Target for the time-mean rotor speed, rad/s.
    pub target: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl IntegralSearch {
    /// Starts at 1 and accepts a mean within 0.5 % of the rated speed.
    pub fn new(rated_speed: f64) -> Self {
        Self {
            start: 1.0,
            lower: 1e-4,
            upper: 1e2,
            target: rated_speed,
            tolerance: 0.005 * rated_speed,
            max_iterations: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTuning {
    pub a_i: f64,
    pub mean_speed: f64,
    pub trials: Vec<(f64, f64)>,
}

/// Adjusts the integral multiplier until the mean rotor speed reported by
/// `mean_speed` is within tolerance of the target. The bracket is widened by
/// decades from the start value, then refined by Illinois false position in
/// log space.
pub fn tune_integral(search: &IntegralSearch, mut mean_speed: impl FnMut(f64) -> f64) -> Result<IntegralTuning, Error> {
    let mut trials = Vec::new();
    let mut eval = |a: f64, trials: &mut Vec<(f64, f64)>| {
        let m = mean_speed(a);
        trials.push((a, m));
        m
    };
    let done = |m: f64| (m - search.target).abs() <= search.tolerance;
    let a0 = search.start;
    let m0 = eval(a0, &mut trials);
    if done(m0) {
        return Ok(IntegralTuning { a_i: a0, mean_speed: m0, trials });
    }
    let f0 = m0 - search.target;
    let mut bracket = None;
    let (mut up, mut down) = (a0, a0);
    while bracket.is_none() && (up < search.upper || down > search.lower) {
        for cand in [up * 10.0, down / 10.0] {
            if cand > search.upper * (1.0 + 1e-12) || cand < search.lower * (1.0 - 1e-12) {
                continue;
            }
            let m = eval(cand, &mut trials);
            if done(m) {
                return Ok(IntegralTuning { a_i: cand, mean_speed: m, trials });
            }
            let f = m - search.target;
            if f.signum() != f0.signum() {
                bracket = Some(if cand > a0 { (a0, f0, cand, f) } else { (cand, f, a0, f0) });
                break;
            }
        }
        up *= 10.0;
        down /= 10.0;
    }
    let (a, mut fa, b, mut fb) = bracket.ok_or(Error::NoBracket)?;
    let (mut la, mut lb) = (a.ln(), b.ln());
    let mut side = 0i8;
    for _ in 0..search.max_iterations {
        let lc = (la * fb - lb * fa) / (fb - fa);
        let c = lc.exp();
        let m = eval(c, &mut trials);
        if done(m) {
            return Ok(IntegralTuning { a_i: c, mean_speed: m, trials });
        }
        let fc = m - search.target;
        if fc.signum() == fb.signum() {
            lb = lc;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            la = lc;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::NonConvergence { iterations: search.max_iterations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTuning {
    pub k_d: f64,
    /// `(K_d, rotor-speed standard deviation)` over the sweep.
    pub curve: Vec<(f64, f64)>,
}

impl DerivativeTuning {
    /// True when the minimum is not at either end of the sweep.
    pub fn interior_minimum(&self) -> bool {
        let i = self.curve.iter().position(|c| c.0 == self.k_d).unwrap_or(0);
        i > 0 && i + 1 < self.curve.len()
    }
}

/// Evenly spaced `K_d` grid over `range` (inclusive).
pub fn derivative_grid(range: (f64, f64), points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| if i + 1 == n { range.1 } else { range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Sweeps the derivative gain and keeps the value with the smallest
/// rotor-speed spread.
pub fn tune_derivative(grid: &[f64], mut spread: impl FnMut(f64) -> f64) -> DerivativeTuning {
    let curve: Vec<(f64, f64)> = grid.iter().map(|&k| (k, spread(k))).collect();
    let best = curve
        .iter()
        .filter(|c| c.1.is_finite())
        .fold(None::<(f64, f64)>, |acc, &c| match acc {
            Some(a) if a.1 <= c.1 => Some(a),
            _ => Some(c),
        })
        .unwrap_or((grid[0], f64::NAN));
    DerivativeTuning { k_d: best.0, curve }
}
