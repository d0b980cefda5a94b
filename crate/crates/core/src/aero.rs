//! Wind thrust on tower, nacelle and rotor, aerodynamic power and the
//! one-mass drivetrain.
//!
//! Forces follow the surge axis, which points upwind, so wind loads come out
//! negative. The inflow speed seen by an element is the wind speed plus the
//! element's own upwind velocity. For the rotor that is
//! `v_blade = v_w + v_zeta + d·ω·cos α`. Heave motion is not streamwise and
//! does not enter.

#[allow(unused_imports)]
use num_traits::Float;

use crate::params::{CoefficientSurface, ParameterSet};
use crate::Error;

/// `λ = ω_R·R / v`.
pub fn tip_speed_ratio(omega_r: f64, radius: f64, v_blade: f64) -> Result<f64, Error> {
    if v_blade == 0.0 {
        return Err(Error::DegenerateInflow);
    }
    Ok(omega_r * radius / v_blade)
}

/// Tip-speed ratio used for table lookups. Vanishing or reversed inflow maps
/// to the largest tabulated ratio; the `v²`/`v³` factors then take the force
/// to zero smoothly.
pub fn lookup_ratio(omega_r: f64, radius: f64, v_blade: f64, surface: &CoefficientSurface) -> f64 {
    match tip_speed_ratio(omega_r, radius, v_blade) {
        Ok(l) if l >= 0.0 => l,
        _ => surface.lambda_max(),
    }
}

/// Bilinear coefficient lookup with a clamp flag.
pub fn interp_coefficient(surface: &CoefficientSurface, lambda: f64, beta: f64) -> (f64, bool) {
    surface.interp(lambda, beta)
}

fn drag(rho: f64, coeff: f64, area: f64, v: f64) -> f64 {
    -0.5 * rho * coeff * area * v * v.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Tower,
    Nacelle,
}

/// Parasitic drag on tower or nacelle, N (sign-preserving in `v_e`).
pub fn thrust_parasitic(p: &ParameterSet, v_e: f64, element: Element) -> f64 {
    match element {
        Element::Tower => drag(p.rho_air, p.tower_drag, p.tower_area, v_e),
        Element::Nacelle => drag(p.rho_air, p.nacelle_drag, p.nacelle_area, v_e),
    }
}

/// Rotor thrust `-½·ρ·A·C_t(λ, β)·v²`, N.
pub fn thrust_blade(p: &ParameterSet, thrust: &CoefficientSurface, v_blade: f64, omega_r: f64, beta: f64) -> f64 {
    let lambda = lookup_ratio(omega_r, p.rotor_radius, v_blade, thrust);
    let (ct, _) = thrust.interp(lambda, beta);
    drag(p.rho_air, ct, p.rotor_area, v_blade)
}

/// Aerodynamic power `½·ρ·A·C_p(λ, β)·v³`, W.
///
/// The rotor area is included; the expression it derives from omits it,
/// which would not yield watts.
pub fn aerodynamic_power(p: &ParameterSet, power: &CoefficientSurface, v_blade: f64, omega_r: f64, beta: f64) -> f64 {
    let lambda = lookup_ratio(omega_r, p.rotor_radius, v_blade, power);
    let (cp, _) = power.interp(lambda, beta);
    0.5 * p.rho_air * p.rotor_area * cp * v_blade * v_blade * v_blade
}

/// Inflow speeds at tower, nacelle and rotor for a structure moving with
/// surge rate `v_zeta` and pitch rate `omega` at pitch `alpha`.
pub fn element_inflow(p: &ParameterSet, v_w: f64, v_zeta: f64, alpha: f64, omega: f64) -> [f64; 3] {
    let c = alpha.cos();
    [
        v_w + v_zeta + p.tower_aero_height * omega * c,
        v_w + v_zeta + p.nacelle_height * omega * c,
        v_w + v_zeta + p.hub_height * omega * c,
    ]
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WindForceBreakdown {
    pub tower: f64,
    pub nacelle: f64,
    pub blade: f64,
    pub total: f64,
    /// Pitch moment of the three loads about the reference point, N·m.
    pub moment: f64,
}

/// Wind loads on the three elements for the structure state
/// `(v_zeta, alpha, omega)` and rotor state `(omega_r, beta)`.
pub fn total_wind_force(
    p: &ParameterSet,
    thrust: &CoefficientSurface,
    v_w: f64,
    v_zeta: f64,
    alpha: f64,
    omega: f64,
    omega_r: f64,
    beta: f64,
) -> WindForceBreakdown {
    let [vt, vn, vb] = element_inflow(p, v_w, v_zeta, alpha, omega);
    let tower = thrust_parasitic(p, vt, Element::Tower);
    let nacelle = thrust_parasitic(p, vn, Element::Nacelle);
    let blade = thrust_blade(p, thrust, vb, omega_r, beta);
    let c = alpha.cos();
    WindForceBreakdown {
        tower,
        nacelle,
        blade,
        total: tower + nacelle + blade,
        moment: (tower * p.tower_aero_height + nacelle * p.nacelle_height + blade * p.hub_height) * c,
    }
}

/// Generator torque that holds rated power, `P_0 / (η_G·ω_R)`, N·m on the
/// generator shaft. Speeds at or below the stall floor use the floor; the
/// flag reports that.
pub fn generator_torque_region3(rated_power: f64, gear_ratio: f64, omega_r: f64, floor: f64) -> (f64, bool) {
    let w = omega_r.max(floor);
    (rated_power / (gear_ratio * w), omega_r <= floor)
}

/// Rotor acceleration `(P_A/ω_R − T̃_E) / J̃` where `T̃_E = η_G·T_E` is the
/// generator resistance referred to the rotor shaft.
pub fn rotor_derivative(omega_r: f64, aero_power: f64, shaft_torque: f64, p: &ParameterSet) -> (f64, bool) {
    let w = omega_r.max(p.stall_floor);
    ((aero_power / w - shaft_torque) / p.drivetrain_inertia(), omega_r <= p.stall_floor)
}
