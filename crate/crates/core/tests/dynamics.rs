use fowt_core::data;
use fowt_core::dynamics::forces::{body_point, line_tension};
use fowt_core::dynamics::{
    buoyancy_forces, from_rccs, mass_matrix, tie_rod_forces, tie_rod_linear_weight, to_rccs, wave_hydro_forces,
    weight_forces, FailureKind, Inputs, Plant, ReportedState, StateVector,
};
use fowt_core::environment::{WaveComponent, WaveField};
use fowt_core::params::{load_surface, reference, CoefficientSurface, ParameterSet, SurfaceKind, TieRod};
use fowt_core::sim::{force_scale, simulate, static_equilibrium, static_residual, Control, Initial, SimConfig, TorqueMode, WindInput};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn surfaces() -> (CoefficientSurface, CoefficientSurface) {
    (
        load_surface(data::CP_5MW_LIKE, SurfaceKind::Power).unwrap(),
        load_surface(data::CT_5MW_LIKE, SurfaceKind::Thrust).unwrap(),
    )
}

fn zero(kind: SurfaceKind) -> CoefficientSurface {
    CoefficientSurface::new(kind, vec![0.0, 20.0], vec![0.0, 1.6], vec![0.0; 4]).unwrap()
}

fn state(pitch: f64) -> StateVector {
    StateVector { surge: 0.3, surge_rate: 0.2, heave: 37.6, heave_rate: -0.1, pitch, pitch_rate: 0.05, rotor_speed: 1.2 }
}

fn to_dmatrix(e: &[[f64; 6]; 6]) -> DMatrix<f64> {
    DMatrix::from_fn(6, 6, |i, j| e[i][j])
}

#[test]
fn mass_matrix_layout_at_zero_pitch() {
    let p = reference();
    let e = mass_matrix(&state(0.0), &p);
    assert_eq!(e[1][5], p.coupling_moment);
    assert_eq!(e[3][5], 0.0);
    assert_eq!((e[1][1], e[3][3], e[5][5]), (p.surge_mass, p.heave_mass, p.pitch_inertia));
    for k in [0, 2, 4] {
        assert_eq!(e[k][k], 1.0);
    }
}

#[test]
fn mass_matrix_positive_determinant_over_pitch_sweep() {
    let p = reference();
    for deg in -60..=60 {
        let e = mass_matrix(&state(f64::from(deg).to_radians()), &p);
        assert!(to_dmatrix(&e).determinant() > 0.0, "{deg}°");
    }
}

proptest! {
    #[test]
    fn mass_matrix_symmetric(alpha in -1.5f64..1.5) {
        let e = mass_matrix(&state(alpha), &reference());
        for i in 0..6 {
            for j in 0..6 {
                prop_assert_eq!(e[i][j], e[j][i]);
            }
        }
    }

    #[test]
    fn rccs_round_trip(a in prop::array::uniform7(-100.0f64..100.0)) {
        let s = StateVector::from_array(a);
        let r = to_rccs(&s, 37.55);
        prop_assert_eq!(r.surge, -s.surge);
        prop_assert_eq!(r.pitch, -s.pitch);
        prop_assert_eq!(r.heave, 37.55 - s.heave);
        prop_assert_eq!(r.heave_rate, -s.heave_rate);
        let back = from_rccs(&r, 37.55);
        let mut expect = s;
        expect.heave = back.heave;
        prop_assert_eq!(back, expect);
        // offset − (offset − η) rounds at most once at the offset's scale
        prop_assert!((back.heave - s.heave).abs() <= f64::EPSILON * 37.55f64.max(s.heave.abs()));
    }

    #[test]
    fn solve_residual_and_explicit_inverse(
        a in prop::array::uniform7(-1.0f64..1.0),
        wind in 0.0f64..25.0,
        beta in 0.0f64..0.5,
    ) {
        let p = reference();
        let (cp, ct) = surfaces();
        let plant = Plant::new(&p, &cp, &ct);
        let s = StateVector {
            surge: 5.0 * a[0],
            surge_rate: a[1],
            heave: 37.55 + 0.5 * a[2],
            heave_rate: 0.3 * a[3],
            pitch: 0.2 * a[4],
            pitch_rate: 0.05 * a[5],
            rotor_speed: 1.27 + 0.3 * a[6],
        };
        let still = WaveField::still();
        let u = Inputs { t: 0.0, wind_speed: wind, waves: &still, blade_pitch: beta, generator_torque: 4e4 };
        let (d, ev) = plant.state_derivative(&s, &u).unwrap();
        let e = to_dmatrix(&ev.mass);
        let f = DVector::from_column_slice(&ev.force);
        let x = DVector::from_column_slice(&d[..6]);
        prop_assert!((&e * &x - &f).norm() <= 1e-9 * f.norm());
        let oracle = e.try_inverse().unwrap() * &f;
        for i in 0..6 {
            prop_assert!((oracle[i] - x[i]).abs() <= 1e-8 * oracle[i].abs().max(1e-8 * f.norm() / 1e7));
        }
    }
}

#[test]
fn heave_report_of_zero_depth() {
    let p = reference();
    let r = to_rccs(&StateVector::default(), p.heave_offset);
    assert_eq!(r.heave, 37.55);
    let r = to_rccs(&StateVector { surge: 1.0, pitch: 0.1, ..Default::default() }, 37.55);
    assert_eq!((r.surge, r.pitch), (-1.0, -0.1));
    assert_eq!(from_rccs(&ReportedState { heave: 37.55, ..Default::default() }, 37.55).heave, 0.0);
}

#[test]
fn weight_forces_formula() {
    let mut p = reference();
    let s0 = state(0.0);
    let w = weight_forces(&s0, &p);
    assert_eq!(w.surge, 0.0);
    assert_eq!(w.heave, (p.nacelle_mass + p.platform_mass + p.tower_mass) * p.g);
    assert!((w.pitch - (p.nacelle_mass * p.nacelle_offset + p.platform_mass * p.platform_offset) * p.g).abs() < 1e-6);
    let mut seed = 12345u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..50 {
        p.nacelle_mass = 1e5 + 1e6 * next();
        p.platform_mass = 1e6 + 1e7 * next();
        p.nacelle_height = 200.0 * next() - 100.0;
        p.nacelle_offset = 10.0 * next() - 5.0;
        p.platform_height = 20.0 * next() - 10.0;
        p.platform_offset = 2.0 * next() - 1.0;
        let a = 1.2 * next() - 0.6;
        let w = weight_forces(&state(a), &p);
        let v = p.g
            * ((p.nacelle_mass * p.nacelle_height + p.platform_mass * p.platform_height) * a.sin()
                + (p.nacelle_mass * p.nacelle_offset + p.platform_mass * p.platform_offset) * a.cos());
        assert!((w.pitch - v).abs() <= 1e-9 * v.abs().max(1.0));
    }
}

#[test]
fn buoyancy_examples() {
    let mut p = reference();
    let b = buoyancy_forces(&state(0.0), &p);
    assert_eq!(b.pitch, 0.0);
    assert!(b.heave < 0.0 && weight_forces(&state(0.0), &p).heave > 0.0);
    p.rho_water = 1025.0;
    p.displaced_volume = 8000.0;
    p.g = 9.81;
    let b = buoyancy_forces(&state(0.0), &p);
    assert!((b.heave + 8.0442e7).abs() < 1.0);
}

#[test]
fn line_weight_examples() {
    let r = 0.2;
    let neutral = 1025.0 * std::f64::consts::PI * r * r;
    assert!(tie_rod_linear_weight(neutral, r, 1025.0, 9.81).abs() < 1e-9);
    let w = tie_rod_linear_weight(100.0, 0.1, 1025.0, 9.81);
    // 981.0 − 315.90 by hand
    assert!((w - 665.06).abs() < 0.05, "{w}");
    assert!((w - (981.0 - 1025.0 * 9.81 * std::f64::consts::PI * 0.01)).abs() < 1e-9);
    let slope = tie_rod_linear_weight(101.0, 0.1, 1025.0, 9.81) - w;
    assert!((slope - 9.81).abs() < 1e-12 * 981.0);
}

fn one_rod(p: &mut ParameterSet, attach: [f64; 2], anchor: [f64; 2], l0: f64, k: f64) {
    let r = 0.1;
    p.tie_rods = vec![TieRod {
        attach,
        anchor,
        unstretched_length: l0,
        stiffness: k,
        mass_per_length: p.rho_water * std::f64::consts::PI * r * r,
        radius: r,
    }];
}

#[test]
fn single_line_tension_by_hand() {
    let mut p = reference();
    let s = StateVector { surge: 2.0, heave: 30.0, ..Default::default() };
    // attachment at (2 + 5, 30 + 10) = (7, 40); anchor (10, 44) → length 5
    one_rod(&mut p, [5.0, 10.0], [10.0, 44.0], 4.5, 1e6);
    let q = tie_rod_forces(&s, &p);
    let (fx, fz) = (5e5 * 3.0 / 5.0, 5e5 * 4.0 / 5.0);
    assert!((q.surge - fx).abs() < 1e-6);
    assert!((q.heave - fz).abs() < 1e-6);
    // moment about the reference point: F_x·(−b_z) + F_z·b_x
    assert!((q.pitch - (-fx * 10.0 + fz * 5.0)).abs() < 1e-4);
}

#[test]
fn slack_lines_carry_no_tension() {
    let mut p = reference();
    one_rod(&mut p, [0.0, 10.0], [0.0, 100.0], 200.0, 1e6);
    let (_, t, _) = line_tension(&StateVector { heave: 30.0, ..Default::default() }, &p.tie_rods[0]);
    assert_eq!(t, 0.0);
}

#[test]
fn symmetric_lines_at_rest_length() {
    let p = reference();
    let rod = &p.tie_rods[0];
    let heave = rod.anchor[1] - rod.attach[1] - rod.unstretched_length;
    let s = StateVector { heave, ..Default::default() };
    let q = tie_rod_forces(&s, &p);
    let w: f64 = p
        .tie_rods
        .iter()
        .map(|r| tie_rod_linear_weight(r.mass_per_length, r.radius, p.rho_water, p.g) * r.unstretched_length)
        .sum();
    assert!(q.surge.abs() < 1e-6);
    assert!((q.heave - w).abs() < 1e-6 * w);
    assert!(q.pitch.abs() < 1e-6 * w);
}

#[test]
fn symmetric_lines_restore_surge() {
    let mut p = reference();
    // attachments at the reference depth so horizontal tension has no arm
    for r in &mut p.tie_rods {
        r.attach[1] = 0.0;
    }
    for offset in [-3.0, 3.0] {
        let s = StateVector { surge: offset, heave: 37.55, ..Default::default() };
        let q = tie_rod_forces(&s, &p);
        assert!(q.surge * offset < 0.0);
        assert!(q.pitch.abs() < 1e-6 * q.surge.abs());
    }
    // the shipped layout attaches below the reference point: restoring
    // force still opposes surge
    let p = reference();
    let q = tie_rod_forces(&StateVector { surge: 3.0, heave: 37.55, ..Default::default() }, &p);
    assert!(q.surge < 0.0);
}

#[test]
fn still_water_and_rest_give_no_hydro_load() {
    let p = reference();
    let s = StateVector { heave: 37.55, ..Default::default() };
    let h = wave_hydro_forces(&s, &WaveField::still(), 3.0, &p);
    assert_eq!(h.wave, Default::default());
    assert_eq!(h.drag, Default::default());
    let moving = StateVector { surge_rate: 0.5, ..s };
    let h = wave_hydro_forces(&moving, &WaveField::still(), 3.0, &p);
    assert!(h.drag.surge < 0.0);
    let moving = StateVector { surge_rate: -0.5, ..s };
    assert!(wave_hydro_forces(&moving, &WaveField::still(), 3.0, &p).drag.surge > 0.0);
}

#[test]
fn wave_surge_force_matches_depth_quadrature() {
    let mut p = reference();
    p.drag_coeff = 0.0;
    p.heave_drag_coeff = 0.0;
    let omega: f64 = 0.6;
    let field = WaveField {
        components: vec![WaveComponent { amplitude: 1.2, omega, wavenumber: omega * omega / p.g, phase: 0.4 }],
        spec: None,
    };
    let s = StateVector { surge: 1.5, heave: 37.55, ..Default::default() };
    let keel = s.heave + p.keel_depth();
    let area = p.waterplane_area();
    let period = 2.0 * std::f64::consts::PI / omega;
    for i in 0..12 {
        let t = i as f64 * period / 12.0 + 0.37;
        // Simpson over depth; model +x is upwind, waves run the other way
        let n = 2000;
        let h = keel / n as f64;
        let acc = |z: f64| -field.kinematics(-s.surge, -z, t).acceleration[0];
        let mut sum = acc(0.0) + acc(keel);
        for j in 1..n {
            sum += acc(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        let oracle = p.rho_water * p.inertia_coeff * area * sum * h / 3.0;
        let model = wave_hydro_forces(&s, &field, t, &p).wave.surge;
        assert!((model - oracle).abs() < 1e-8 * oracle.abs().max(1e3), "{model} vs {oracle}");
        let later = wave_hydro_forces(&s, &field, t + period, &p).wave.surge;
        assert!((later - model).abs() < 1e-6 * model.abs().max(1.0));
    }
}

#[test]
fn centripetal_entries() {
    let p = reference();
    let (cp, ct) = surfaces();
    let plant = Plant::new(&p, &cp, &ct);
    let still = WaveField::still();
    let s = StateVector { heave: 37.5, pitch: 0.15, pitch_rate: 0.3, rotor_speed: 1.2, ..Default::default() };
    let u = Inputs { t: 0.0, wind_speed: 12.0, waves: &still, blade_pitch: 0.0, generator_torque: 4e4 };
    let ev = plant.assemble(&s, &u);
    let q = ev.breakdown.total();
    let w2 = 0.3 * 0.3;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * q.heave.abs();
    assert!(close(ev.force[1] - q.surge, p.coupling_moment * w2 * 0.15f64.sin()));
    assert!(close(ev.force[3] - q.heave, -p.coupling_moment * w2 * 0.15f64.cos()));
    assert_eq!([ev.force[0], ev.force[2], ev.force[4]], [s.surge_rate, s.heave_rate, s.pitch_rate]);
}

#[test]
fn breakdown_bookkeeping() {
    let p = reference();
    let (cp, ct) = surfaces();
    let plant = Plant::new(&p, &cp, &ct);
    let field = WaveField {
        components: vec![WaveComponent { amplitude: 2.0, omega: 0.5, wavenumber: 0.25 / 9.81, phase: 0.0 }],
        spec: None,
    };
    let s = state(0.05);
    let u = Inputs { t: 12.0, wind_speed: 18.0, waves: &field, blade_pitch: 0.2, generator_torque: 4e4 };
    let ev = plant.assemble(&s, &u);
    let b = ev.breakdown;
    let t = b.total();
    let sum = b.weight.surge + b.buoyancy.surge + b.wind.surge + b.tie_rod.surge + b.wave.surge + b.hydro_drag.surge;
    assert_eq!(t.surge, sum);
    assert_eq!(b.wind.surge, ev.wind.total);
}

#[test]
fn diagonal_mass_gives_componentwise_derivative() {
    let mut p = reference();
    p.coupling_moment = 0.0;
    let (cp, ct) = surfaces();
    let plant = Plant::new(&p, &cp, &ct);
    let still = WaveField::still();
    let s = state(0.0);
    let u = Inputs { t: 0.0, wind_speed: 11.0, waves: &still, blade_pitch: 0.0, generator_torque: 4e4 };
    let (d, ev) = plant.state_derivative(&s, &u).unwrap();
    let diag = [1.0, p.surge_mass, 1.0, p.heave_mass, 1.0, p.pitch_inertia];
    for i in 0..6 {
        assert!((d[i] - ev.force[i] / diag[i]).abs() <= 1e-15 * d[i].abs().max(1e-300));
    }
}

#[test]
fn failures_carry_the_state() {
    let mut p = reference();
    let (cp, ct) = surfaces();
    let still = WaveField::still();
    let u = Inputs { t: 4.0, wind_speed: 11.0, waves: &still, blade_pitch: 0.0, generator_torque: 4e4 };
    let s = state(1.6);
    let f = Plant::new(&p, &cp, &ct).state_derivative(&s, &u).unwrap_err();
    assert_eq!(f.kind, FailureKind::Capsize);
    assert_eq!(f.state, s);
    assert_eq!(f.time, 4.0);

    let s = StateVector { surge: f64::NAN, ..state(0.0) };
    let f = Plant::new(&p, &cp, &ct).state_derivative(&s, &u).unwrap_err();
    assert_eq!(f.kind, FailureKind::NonFinite);

    // inertia that makes the surge–pitch block nearly singular
    p.pitch_inertia = p.coupling_moment * p.coupling_moment / p.surge_mass * (1.0 + 1e-15);
    let f = Plant::new(&p, &cp, &ct).state_derivative(&state(0.0), &u).unwrap_err();
    assert!(matches!(f.kind, FailureKind::Singular { .. }), "{f:?}");
}

#[test]
fn static_balance_in_still_air() {
    let p = reference();
    let (cp, ct) = surfaces();
    let plant = Plant::new(&p, &cp, &ct);
    let s = static_equilibrium(&plant, 0.0, 0.0, p.rated_speed).unwrap();
    let q = static_residual(&plant, [s.surge, s.heave, s.pitch], 0.0, 0.0, p.rated_speed);
    let scale = force_scale(&plant);
    assert!(q.surge.abs() <= 1e-6 * scale && q.heave.abs() <= 1e-6 * scale && q.pitch.abs() <= 1e-6 * scale * 100.0);
    let still = WaveField::still();
    let u = Inputs { t: 0.0, wind_speed: 0.0, waves: &still, blade_pitch: 0.0, generator_torque: 0.0 };
    let (d, _) = plant.state_derivative(&s, &u).unwrap();
    for i in [1, 3, 5] {
        assert!(d[i].abs() < 1e-6, "{i}: {}", d[i]);
    }
    // tension never negative at or around the balance point
    for dz in [-2.0, 0.0, 2.0] {
        let probe = StateVector { heave: s.heave + dz, ..s };
        for rod in &p.tie_rods {
            assert!(line_tension(&probe, rod).1 >= 0.0);
        }
    }
}

/// Kinetic energy from the mass matrix quadratic form.
fn kinetic(s: &StateVector, p: &ParameterSet) -> f64 {
    let (sa, ca) = s.pitch.sin_cos();
    0.5 * p.surge_mass * s.surge_rate * s.surge_rate
        + 0.5 * p.heave_mass * s.heave_rate * s.heave_rate
        + 0.5 * p.pitch_inertia * s.pitch_rate * s.pitch_rate
        + p.coupling_moment * s.pitch_rate * (ca * s.surge_rate + sa * s.heave_rate)
}

/// Gravity, buoyancy and elastic-line potential (z down).
fn potential(s: &StateVector, p: &ParameterSet) -> f64 {
    let (sa, ca) = s.pitch.sin_cos();
    let g = p.g;
    let vert = p.nacelle_mass * p.nacelle_height + p.platform_mass * p.platform_height;
    let horiz = p.nacelle_mass * p.nacelle_offset + p.platform_mass * p.platform_offset;
    let weight = -g * (p.total_mass() * s.heave + horiz * sa - vert * ca);
    let lift = p.rho_water * p.displaced_volume * g;
    let buoyancy = lift * (s.heave + p.buoyancy_depth * ca);
    let lines: f64 = p
        .tie_rods
        .iter()
        .map(|r| {
            let a = body_point(s, r.attach);
            let len = ((r.anchor[0] - a[0]).powi(2) + (r.anchor[1] - a[1]).powi(2)).sqrt();
            let stretch = (len - r.unstretched_length).max(0.0);
            let w = tie_rod_linear_weight(r.mass_per_length, r.radius, p.rho_water, g) * r.unstretched_length;
            0.5 * r.stiffness * stretch * stretch - w * a[1]
        })
        .sum();
    weight + buoyancy + lines
}

#[test]
fn conservative_plant_keeps_its_energy() {
    let mut p = reference();
    p.tower_drag = 0.0;
    p.nacelle_drag = 0.0;
    p.drag_coeff = 0.0;
    p.heave_drag_coeff = 0.0;
    let cp = zero(SurfaceKind::Power);
    let ct = zero(SurfaceKind::Thrust);
    let plant = Plant::new(&p, &cp, &ct);
    let eq = static_equilibrium(&plant, 0.0, 0.0, p.rated_speed).unwrap();
    let start = StateVector { surge: eq.surge + 2.0, heave: eq.heave - 0.05, pitch: eq.pitch + 0.01, ..eq };
    let cfg = SimConfig {
        dt: 0.05,
        duration: 100.0,
        initial: Initial::State(start),
        initial_pitch: Some(0.0),
        control: Control::Fixed,
        torque: TorqueMode::Fixed(0.0),
        wind: WindInput::Constant(0.0),
        ..SimConfig::default()
    };
    let traj = simulate(&cfg, &plant).unwrap();
    assert!(traj.failure.is_none());
    let energy = |i: usize| {
        let r = traj.row(i);
        let rep = ReportedState {
            surge: r[1],
            surge_rate: r[2],
            heave: r[3],
            heave_rate: r[4],
            pitch: r[5],
            pitch_rate: r[6],
            rotor_speed: r[7],
        };
        let s = from_rccs(&rep, p.heave_offset);
        kinetic(&s, &p) + potential(&s, &p)
    };
    let base = potential(&eq, &p);
    let e0 = energy(0) - base;
    assert!(e0 > 0.0);
    let worst = (0..traj.len()).map(|i| (energy(i) - base - e0).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-3 * e0, "drift {worst} of {e0}");
}
