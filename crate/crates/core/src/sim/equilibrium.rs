#[allow(unused_imports)]
use num_traits::Float;

use crate::aero;
use crate::dynamics::{Channels, Inputs, Plant, StateVector};
use crate::environment::WaveField;
use crate::Error;

const MAX_ITERATIONS: usize = 60;

/// Weight of the whole structure, N. Used to scale residual tolerances.
pub fn force_scale(plant: &Plant<'_>) -> f64 {
    plant.params.total_mass() * plant.params.g
}

/// Net generalized force with all rates zero.
pub fn static_residual(
    plant: &Plant<'_>,
    pose: [f64; 3],
    wind_speed: f64,
    blade_pitch: f64,
    rotor_speed: f64,
) -> Channels {
    let still = WaveField::still();
    let s = StateVector {
        surge: pose[0],
        heave: pose[1],
        pitch: pose[2],
        rotor_speed,
        ..StateVector::default()
    };
    let u = Inputs { t: 0.0, wind_speed, waves: &still, blade_pitch, generator_torque: 0.0 };
    plant.assemble(&s, &u).breakdown.total()
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut x = [0.0; 3];
    for (j, xj) in x.iter_mut().enumerate() {
        let mut m = a;
        for i in 0..3 {
            m[i][j] = b[i];
        }
        *xj = det(&m) / d;
    }
    Some(x)
}

/// Surge, heave and pitch at which the structure is at rest under a steady
/// wind with the rotor turning at `rotor_speed`. Rates are zero in the
/// result. Newton iteration with a finite-difference Jacobian, starting from
/// the reference heave with no offset.
pub fn static_equilibrium(
    plant: &Plant<'_>,
    wind_speed: f64,
    blade_pitch: f64,
    rotor_speed: f64,
) -> Result<StateVector, Error> {
    let scale = force_scale(plant);
    let r = |x: [f64; 3]| {
        let q = static_residual(plant, x, wind_speed, blade_pitch, rotor_speed);
        // pitch moments are scaled by a 100 m lever so all three are forces
        [q.surge, q.heave, q.pitch / 100.0]
    };
    let norm = |v: [f64; 3]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut x = [0.0, plant.params.heave_offset, 0.0];
    let mut fx = r(x);
    for _ in 0..MAX_ITERATIONS {
        if norm(fx) <= 1e-11 * scale {
            return Ok(StateVector { surge: x[0], heave: x[1], pitch: x[2], rotor_speed, ..StateVector::default() });
        }
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let h = 1e-6 * x[j].abs().max(if j == 2 { 1e-2 } else { 1.0 });
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (r(xp), r(xm));
            for i in 0..3 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let step = solve3(jac, fx).ok_or(Error::NonConvergence { iterations: MAX_ITERATIONS })?;
        let mut lambda = 1.0;
        loop {
            let trial = [x[0] - lambda * step[0], x[1] - lambda * step[1], x[2] - lambda * step[2]];
            let ft = r(trial);
            if norm(ft) < norm(fx) || lambda < 1e-4 {
                x = trial;
                fx = ft;
                break;
            }
            lambda *= 0.5;
        }
        if norm(step) * lambda < 1e-14 {
            break;
        }
    }
    if norm(fx) <= 1e-9 * scale {
        Ok(StateVector { surge: x[0], heave: x[1], pitch: x[2], rotor_speed, ..StateVector::default() })
    } else {
        Err(Error::NonConvergence { iterations: MAX_ITERATIONS })
    }
}

/// Blade pitch at which the rotor delivers rated power at `rotor_speed` in a
/// steady wind, by bisection over the pitch range. Below rated the lower
/// pitch bound is returned, and the upper bound if rated power cannot be shed.
pub fn trim_pitch(plant: &Plant<'_>, wind_speed: f64, rotor_speed: f64) -> f64 {
    let p = plant.params;
    let excess = |beta: f64| aero::aerodynamic_power(p, plant.power, wind_speed, rotor_speed, beta) - p.rated_power;
    let (mut lo, mut hi) = (p.pitch_min, p.pitch_max);
    if excess(lo) <= 0.0 {
        return lo;
    }
    if excess(hi) > 0.0 {
        return hi;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
