use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::bracket;
use crate::Error;

#[allow(unused_imports)]
use num_traits::Float;

/// The single degree→radian conversion used everywhere, so surface nodes and
/// operating points written in degrees coincide bit-for-bit.
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * (PI / 180.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Power,
    Thrust,
}

impl SurfaceKind {
    pub fn upper_bound(self) -> f64 {
        match self {
            SurfaceKind::Power => 0.593,
            SurfaceKind::Thrust => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Power => "power",
            SurfaceKind::Thrust => "thrust",
        }
    }
}

/// Gridded rotor coefficient over tip-speed ratio and blade pitch (rad).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSurface {
    kind: SurfaceKind,
    lambda: Vec<f64>,
    beta: Vec<f64>,
    /// Row-major: `values[i * beta.len() + j]` is at `(lambda[i], beta[j])`.
    values: Vec<f64>,
}

impl CoefficientSurface {
    pub fn new(kind: SurfaceKind, lambda: Vec<f64>, beta: Vec<f64>, values: Vec<f64>) -> Result<Self, Error> {
        check_axis("lambda", &lambda)?;
        check_axis("beta", &beta)?;
        if values.len() != lambda.len() * beta.len() {
            return Err(Error::Surface(format!(
                "expected {}x{} values, got {}",
                lambda.len(),
                beta.len(),
                values.len()
            )));
        }
        let hi = kind.upper_bound();
        for (n, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(0.0..=hi).contains(&v) {
                return Err(Error::Surface(format!(
                    "{} coefficient {v} at lambda={}, beta={} outside [0, {hi}]",
                    kind.name(),
                    lambda[n / beta.len()],
                    beta[n % beta.len()]
                )));
            }
        }
        Ok(Self { kind, lambda, beta, values })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn lambda_grid(&self) -> &[f64] {
        &self.lambda
    }

    pub fn beta_grid(&self) -> &[f64] {
        &self.beta
    }

    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.beta.len() + j]
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda[self.lambda.len() - 1]
    }

    /// Bilinear lookup, exact at nodes. Queries outside the grid are clamped
    /// to its boundary; the flag reports whether that happened.
    pub fn interp(&self, lambda: f64, beta: f64) -> (f64, bool) {
        let (l, cl) = clamp(&self.lambda, lambda);
        let (b, cb) = clamp(&self.beta, beta);
        let i = bracket(&self.lambda, l);
        let j = bracket(&self.beta, b);
        let tl = (l - self.lambda[i]) / (self.lambda[i + 1] - self.lambda[i]);
        let tb = (b - self.beta[j]) / (self.beta[j + 1] - self.beta[j]);
        let lerp = |a: f64, c: f64, t: f64| if t == 0.0 { a } else { a + t * (c - a) };
        let lo = lerp(self.node(i, j), self.node(i + 1, j), tl);
        let hi = lerp(self.node(i, j + 1), self.node(i + 1, j + 1), tl);
        (lerp(lo, hi, tb), cl || cb)
    }

    pub fn value(&self, lambda: f64, beta: f64) -> f64 {
        self.interp(lambda, beta).0
    }

    /// Writes the delimited form read by [`load_surface`], pitch axis in degrees
    /// when `degrees` is set.
    pub fn to_text(&self, degrees: bool) -> String {
        let mut out = String::from(if degrees { "lambda\\beta_deg" } else { "lambda\\beta_rad" });
        for &b in &self.beta {
            let v = if degrees { to_degrees_exact(b) } else { b };
            out.push_str(&format!(",{v:?}"));
        }
        out.push('\n');
        for (i, &l) in self.lambda.iter().enumerate() {
            out.push_str(&format!("{l:?}"));
            for j in 0..self.beta.len() {
                out.push_str(&format!(",{:?}", self.node(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

fn clamp(grid: &[f64], x: f64) -> (f64, bool) {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if x < lo {
        (lo, true)
    } else if x > hi {
        (hi, true)
    } else if x.is_nan() {
        (lo, true)
    } else {
        (x, false)
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<(), Error> {
    if axis.len() < 2 {
        return Err(Error::Surface(format!("{name} axis needs at least two nodes")));
    }
    if axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::Surface(format!("{name} axis has non-finite entries")));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Surface(format!("{name} axis is not strictly increasing")));
    }
    Ok(())
}

/// Parses a comma- (or whitespace-) delimited grid. The first header cell is
/// `lambda\beta_deg` or `lambda\beta_rad` (radians when absent); the rest of
/// the header row is the pitch axis, the first column the tip-speed-ratio axis.
/// Degree value that maps back to exactly `rad` through [`deg_to_rad`],
/// preferring a whole number of degrees when one does.
fn to_degrees_exact(rad: f64) -> f64 {
    let d = rad * 180.0 / PI;
    let whole = d.round();
    if deg_to_rad(whole) == rad {
        whole
    } else {
        d
    }
}

pub fn load_surface(text: &str, kind: SurfaceKind) -> Result<CoefficientSurface, Error> {
    let mut rows = text
        .lines()
        .map(|l| match l.find('#') {
            Some(p) => &l[..p],
            None => l,
        })
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(|c: char| c == ',' || c.is_whitespace()).filter(|c| !c.is_empty()).collect::<Vec<_>>());
    let header = rows.next().ok_or_else(|| Error::Surface("empty surface file".to_string()))?;
    let degrees = header[0].ends_with("deg");
    let num = |s: &str| -> Result<f64, Error> {
        s.parse::<f64>().map_err(|_| Error::Surface(format!("`{s}` is not a number")))
    };
    let beta = header[1..]
        .iter()
        .map(|s| num(s).map(|v| if degrees { deg_to_rad(v) } else { v }))
        .collect::<Result<Vec<_>, _>>()?;
    let mut lambda = Vec::new();
    let mut values = Vec::new();
    for (r, row) in rows.enumerate() {
        if row.len() != beta.len() + 1 {
            return Err(Error::Surface(format!(
                "row {} has {} values, expected {}",
                r + 1,
                row.len() - 1,
                beta.len()
            )));
        }
        lambda.push(num(row[0])?);
        for c in &row[1..] {
            values.push(num(c)?);
        }
    }
    CoefficientSurface::new(kind, lambda, beta, values)
}
