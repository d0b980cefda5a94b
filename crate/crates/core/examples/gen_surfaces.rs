//! Regenerates the shipped rotor coefficient tables.
//!
//! Both tables follow smooth closed forms. The power table is a rescaled
//! exponential blade-element fit, calibrated so that it yields the 40 kN·m
//! generator balance at 11 m/s (pitch 0°) and rated power at 20 m/s (pitch
//! 18°), both at rated rotor speed. The thrust table passes through 0.7718
//! and 0.1033 at the same two operating points.
//!
//! ```text
//! cargo run -p fowt-core --example gen_surfaces -- crates/core/data
//! ```

use std::path::PathBuf;

use fowt_core::aero::tip_speed_ratio;
use fowt_core::params::{deg_to_rad, reference, CoefficientSurface, SurfaceKind};

const LAMBDA_SCALE: f64 = 1.06;

fn fit(lambda: f64, beta_deg: f64) -> f64 {
    let inv = 1.0 / (lambda + 0.08 * beta_deg) - 0.035 / (beta_deg.powi(3) + 1.0);
    let li = 1.0 / inv;
    0.5176 * (116.0 / li - 0.4 * beta_deg - 5.0) * (-21.0 / li).exp() + 0.0068 * lambda
}

fn thrust(lambda: f64, beta_deg: f64) -> f64 {
    1.1 * (1.0 - (-lambda * lambda / 43.55).exp()) * (-0.0657 * beta_deg).exp()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let up = f(lo) < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if (f(m) < 0.0) == up {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

fn main() {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "crates/core/data".into()));
    let p = reference();
    let w = p.rated_speed;
    let l11 = tip_speed_ratio(w, p.rotor_radius, 11.0).unwrap();
    let l20 = tip_speed_ratio(w, p.rotor_radius, 20.0).unwrap();
    let q = 0.5 * p.rho_air * p.rotor_area;
    let cp11 = p.gear_ratio * 40_000.0 * w / (q * 11f64.powi(3));
    let cp20 = p.rated_power / (q * 20f64.powi(3));

    let gain = cp11 / fit(LAMBDA_SCALE * l11, 0.0);
    let beta_scale = bisect(0.5, 3.0, |b| gain * fit(LAMBDA_SCALE * l20, b * 18.0) - cp20);
    let cp = |l: f64, b: f64| (gain * fit(LAMBDA_SCALE * l, beta_scale * b)).clamp(0.0, 0.593);
    eprintln!("power fit: gain {gain:.6}, pitch scale {beta_scale:.6}");

    let mut lambda: Vec<f64> = (2..=64).map(|i| i as f64 * 0.25).collect();
    lambda.extend([l11, l20]);
    lambda.sort_by(f64::total_cmp);
    let beta_deg: Vec<f64> = (0..=45).map(f64::from).collect();
    let beta: Vec<f64> = beta_deg.iter().map(|&b| deg_to_rad(b)).collect();

    let table = |f: &dyn Fn(f64, f64) -> f64, pins: [(f64, f64, f64); 2]| {
        let mut v = Vec::with_capacity(lambda.len() * beta.len());
        for &l in &lambda {
            for &b in &beta_deg {
                let pin = pins.iter().find(|(pl, pb, _)| *pl == l && *pb == b);
                v.push(pin.map_or_else(|| f(l, b), |p| p.2));
            }
        }
        v
    };
    let power = table(&cp, [(l11, 0.0, cp11), (l20, 18.0, cp20)]);
    let thrust = table(&thrust, [(l11, 0.0, 0.7718), (l20, 18.0, 0.1033)]);

    for (name, kind, values) in
        [("cp_5mw_like.csv", SurfaceKind::Power, power), ("ct_5mw_like.csv", SurfaceKind::Thrust, thrust)]
    {
        let s = CoefficientSurface::new(kind, lambda.clone(), beta.clone(), values).expect("valid table");
        let path = out.join(name);
        std::fs::write(&path, s.to_text(true)).expect("write table");
        eprintln!("wrote {}", path.display());
    }
}
