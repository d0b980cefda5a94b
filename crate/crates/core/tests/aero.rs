use fowt_core::aero::{
    aerodynamic_power, element_inflow, generator_torque_region3, interp_coefficient, rotor_derivative,
    thrust_blade, thrust_parasitic, tip_speed_ratio, total_wind_force, Element,
};
use fowt_core::data;
use fowt_core::params::{deg_to_rad, load_surface, reference, CoefficientSurface, ParameterSet, SurfaceKind};
use fowt_core::Error;
use proptest::prelude::*;

fn constant(kind: SurfaceKind, v: f64) -> CoefficientSurface {
    CoefficientSurface::new(kind, vec![0.0, 20.0], vec![0.0, 1.6], vec![v; 4]).unwrap()
}

fn ct() -> CoefficientSurface {
    load_surface(data::CT_5MW_LIKE, SurfaceKind::Thrust).unwrap()
}

fn cp() -> CoefficientSurface {
    load_surface(data::CP_5MW_LIKE, SurfaceKind::Power).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn tip_speed_ratio_examples() {
    assert_eq!(tip_speed_ratio(0.0, 63.0, 11.4).unwrap(), 0.0);
    let l = tip_speed_ratio(1.26711, 63.0, 11.4).unwrap();
    assert!((l - 7.003).abs() < 1e-3, "{l}");
    assert_eq!(tip_speed_ratio(2.0 * 1.3, 63.0, 2.0 * 9.0).unwrap(), tip_speed_ratio(1.3, 63.0, 9.0).unwrap());
    assert_eq!(tip_speed_ratio(1.0, 63.0, 0.0), Err(Error::DegenerateInflow));
}

#[test]
fn operating_point_nodes() {
    let p = reference();
    let s = ct();
    let l20 = p.rated_speed * p.rotor_radius / 20.0;
    assert_eq!(interp_coefficient(&s, l20, deg_to_rad(18.0)), (0.1033, false));
    // midway along pitch between two nodes
    let i = s.lambda_grid().iter().position(|&l| l == l20).unwrap();
    let (b0, b1) = (s.beta_grid()[3], s.beta_grid()[4]);
    let mid = interp_coefficient(&s, l20, 0.5 * (b0 + b1)).0;
    assert!((mid - 0.5 * (s.node(i, 3) + s.node(i, 4))).abs() < 1e-15);
}

#[test]
fn parasitic_drag_examples() {
    let mut p = reference();
    p.rho_air = 1.225;
    p.tower_drag = 1.0;
    p.tower_area = 100.0;
    assert_eq!(thrust_parasitic(&p, 0.0, Element::Tower), 0.0);
    assert!((thrust_parasitic(&p, 10.0, Element::Tower) + 6125.0).abs() < 1e-9);
    let q = thrust_parasitic(&p, 7.0, Element::Nacelle);
    assert!(rel(thrust_parasitic(&p, 14.0, Element::Nacelle), 4.0 * q) < 1e-15);
    // motion that outruns the wind reverses the load
    assert!(thrust_parasitic(&p, -3.0, Element::Tower) > 0.0);
}

#[test]
fn blade_thrust_examples() {
    let mut p = reference();
    assert_eq!(thrust_blade(&p, &ct(), 0.0, p.rated_speed, 0.0), 0.0);
    let q11 = thrust_blade(&p, &ct(), 11.0, p.rated_speed, 0.0);
    let q20 = thrust_blade(&p, &ct(), 20.0, p.rated_speed, deg_to_rad(18.0));
    let expected = 0.7718 * 121.0 / (0.1033 * 400.0);
    assert!(rel(q11 / q20, expected) < 1e-12);
    assert!((q11 / q20 - 2.26).abs() < 0.01);
    p.rho_air = 1.225;
    p.rotor_area = 1000.0;
    let q = thrust_blade(&p, &constant(SurfaceKind::Thrust, 0.5), 10.0, 1.0, 0.0);
    assert!((q + 30625.0).abs() < 1e-9);
}

#[test]
fn power_examples() {
    let mut p = reference();
    assert_eq!(aerodynamic_power(&p, &cp(), 0.0, p.rated_speed, 0.0), 0.0);
    p.rho_air = 1.225;
    p.rotor_area = 12469.0;
    let w = aerodynamic_power(&p, &constant(SurfaceKind::Power, 0.4), 11.4, 1.0, 0.0);
    let hand = 0.5 * 1.225 * 12469.0 * 0.4 * 11.4f64.powi(3);
    assert!(rel(w, hand) < 1e-14);
    assert!((w - 4.53e6).abs() < 0.01e6);
}

#[test]
fn shipped_power_table_pins_rated_operation() {
    // the 11 m/s case balances 40 kN·m at rated speed with zero pitch
    let p = reference();
    let w = aerodynamic_power(&p, &cp(), 11.0, p.rated_speed, 0.0);
    assert!(rel(w, 97.0 * 40000.0 * p.rated_speed) < 1e-3, "{w}");
    let w = aerodynamic_power(&p, &cp(), 20.0, p.rated_speed, deg_to_rad(18.0));
    assert!(rel(w, p.rated_power) < 1e-3, "{w}");
}

#[test]
fn still_air_gives_no_load() {
    let p = reference();
    let b = total_wind_force(&p, &ct(), 0.0, 0.0, 0.0, 0.0, p.rated_speed, 0.0);
    assert_eq!((b.tower, b.nacelle, b.blade, b.total, b.moment), (0.0, 0.0, 0.0, 0.0, 0.0));
}

#[test]
fn still_structure_at_twenty() {
    let p = reference();
    let s = ct();
    let beta = deg_to_rad(18.0);
    let b = total_wind_force(&p, &s, 20.0, 0.0, 0.0, 0.0, p.rated_speed, beta);
    let tower = -0.5 * p.rho_air * p.tower_drag * p.tower_area * 400.0;
    let nacelle = -0.5 * p.rho_air * p.nacelle_drag * p.nacelle_area * 400.0;
    let blade = -0.5 * p.rho_air * p.rotor_area * 0.1033 * 400.0;
    assert!(rel(b.total, tower + nacelle + blade) < 1e-14);
    assert!(rel(b.blade, blade) < 1e-14);
}

#[test]
fn region3_torque() {
    let p = reference();
    let (t, clamped) = generator_torque_region3(p.rated_power, p.gear_ratio, p.rated_speed, p.stall_floor);
    assert!(!clamped);
    assert!((t - 43093.55).abs() < 0.01, "{t}");
    assert!((t - p.rated_torque).abs() < 0.01);
    let (t2, _) = generator_torque_region3(p.rated_power, p.gear_ratio, 2.0 * p.rated_speed, p.stall_floor);
    assert!(rel(t2, 0.5 * t) < 1e-15);
    let (floor, clamped) = generator_torque_region3(p.rated_power, p.gear_ratio, 0.01, 0.1);
    assert!(clamped);
    assert_eq!(floor, generator_torque_region3(p.rated_power, p.gear_ratio, 0.1, 0.1).0);
}

#[test]
fn rotor_derivative_examples() {
    let mut p: ParameterSet = reference();
    let (d, _) = rotor_derivative(1.2, 3.6e6, 3.0e6, &p);
    assert_eq!(d, 0.0);
    assert!(rotor_derivative(1.2, 0.0, 4e6, &p).0 < 0.0);
    p.rotor_inertia = 1e7;
    p.generator_inertia = 500.0;
    p.gear_ratio = 97.0;
    let w = 1.267;
    let shaft = 3.9e6 / 1.267;
    let hand = (5e6 / w - shaft) / (1e7 + 97.0 * 97.0 * 500.0);
    let (d, clamped) = rotor_derivative(w, 5e6, shaft, &p);
    assert!(!clamped);
    assert!(rel(d, hand) < 1e-9);
    let (_, clamped) = rotor_derivative(0.05, 5e6, shaft, &p);
    assert!(clamped);
}

proptest! {
    #[test]
    fn breakdown_sums(
        v_w in -5.0f64..40.0, v_zeta in -3.0f64..3.0, alpha in -0.3f64..0.3, omega in -0.2f64..0.2,
        omega_r in 0.0f64..2.0, beta in 0.0f64..1.5,
    ) {
        let p = reference();
        let b = total_wind_force(&p, &ct(), v_w, v_zeta, alpha, omega, omega_r, beta);
        prop_assert_eq!(b.total, b.tower + b.nacelle + b.blade);
        let inflow = element_inflow(&p, v_w, v_zeta, alpha, omega);
        prop_assert_eq!(b.tower, thrust_parasitic(&p, inflow[0], Element::Tower));
    }

    #[test]
    fn torque_power_identity(power in 1e5f64..1e7, ratio in 1.0f64..200.0, w in 0.2f64..3.0) {
        let (t, _) = generator_torque_region3(power, ratio, w, 0.1);
        prop_assert!(rel(t * ratio * w, power) < 1e-14);
    }

    #[test]
    fn rotor_derivative_sign(w in 0.5f64..2.0, power in 0.0f64..1e7, shaft in 0.0f64..1e7) {
        let p = reference();
        let (d, _) = rotor_derivative(w, power, shaft, &p);
        let excess = power / w - shaft;
        prop_assert!(d * excess >= 0.0);
        prop_assert_eq!(d == 0.0, excess == 0.0);
    }

    #[test]
    fn coefficients_continuous_inside_grid(l in 0.6f64..15.9, b in 0.01f64..0.78) {
        let s = cp();
        let h = 1e-9;
        let (a, c) = (s.value(l, b), s.value(l + h, b + h));
        // bilinear patches with bounded slopes
        prop_assert!((a - c).abs() < 1e-6);
    }

    #[test]
    fn power_below_betz(v in 0.1f64..40.0, w in 0.0f64..3.0, beta in 0.0f64..1.5) {
        let p = reference();
        let bound = 0.5 * p.rho_air * p.rotor_area * 0.593 * v.powi(3);
        prop_assert!(aerodynamic_power(&p, &cp(), v, w, beta) <= bound * (1.0 + 1e-12));
    }
}
