//! Turbine, platform, environment and controller constants.
//!
//! Parameters are read from the flat key/value format in [`crate::kv`]. Angles
//! and angular speeds may carry a unit suffix (`[deg]`, `[rad]`, `[rpm]`,
//! `[rad/s]`, `[deg/s]`); everything is stored in SI with radians. Tie rods
//! are listed as `tie_rod.<n>.<field>` with `n` counting from zero.
//!
//! Lever arms are signed. Vertical arms are heights above the reference point
//! (the structure's centre of mass); horizontal arms are measured positive
//! upwind. `d_G` is the depth of the centre of buoyancy below the reference
//! point, so it is negative when buoyancy acts above it.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::kv::{self, Entry};
use crate::Error;

mod surface;

pub use surface::{deg_to_rad, load_surface, CoefficientSurface, SurfaceKind};

/// One taut mooring line.
#[derive(Debug, Clone, PartialEq)]
pub struct TieRod {
    /// Attachment point in the body frame: (upwind offset, depth below reference point), m.
    pub attach: [f64; 2],
    /// Anchor point in the global frame: (upwind position, depth below sea level), m.
    pub anchor: [f64; 2],
    pub unstretched_length: f64,
    /// Axial stiffness, N/m.
    pub stiffness: f64,
    /// Mass per unit length, kg/m.
    pub mass_per_length: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    pub surge_mass: f64,
    pub heave_mass: f64,
    /// Mass-weighted height of the structure above the reference point, kg·m.
    pub coupling_moment: f64,
    pub pitch_inertia: f64,
    pub nacelle_mass: f64,
    pub platform_mass: f64,
    pub tower_mass: f64,

    pub nacelle_height: f64,
    pub nacelle_offset: f64,
    pub platform_height: f64,
    pub platform_offset: f64,
    pub buoyancy_depth: f64,
    pub hub_height: f64,
    pub tower_aero_height: f64,
    pub rotor_radius: f64,
    pub rotor_area: f64,
    pub tower_area: f64,
    pub nacelle_area: f64,
    pub displaced_volume: f64,

    pub rho_air: f64,
    pub rho_water: f64,
    pub g: f64,
    pub tower_drag: f64,
    pub nacelle_drag: f64,

    pub platform_diameter: f64,
    pub platform_draft: f64,
    pub inertia_coeff: f64,
    pub drag_coeff: f64,
    pub heave_drag_coeff: f64,
    pub water_depth: f64,

    pub tie_rods: Vec<TieRod>,

    pub rotor_inertia: f64,
    pub generator_inertia: f64,
    pub gear_ratio: f64,
    pub rated_power: f64,
    pub rated_torque: f64,

    pub rated_speed: f64,
    pub loop_frequency: f64,
    pub loop_damping: f64,
    pub schedule_knee: f64,
    pub a_p: f64,
    pub a_i: f64,
    pub k_d: f64,
    pub pitch_sensitivity: f64,
    pub pitch_rate_limit: f64,
    pub pitch_min: f64,
    pub pitch_max: f64,

    pub heave_offset: f64,
    pub stall_floor: f64,
}

impl ParameterSet {
    /// Drivetrain inertia seen by the rotor, `J_R + η_G²·J_G`.
    pub fn drivetrain_inertia(&self) -> f64 {
        self.rotor_inertia + self.gear_ratio * self.gear_ratio * self.generator_inertia
    }

    pub fn total_mass(&self) -> f64 {
        self.nacelle_mass + self.platform_mass + self.tower_mass
    }

    /// Keel depth below the reference point.
    pub fn keel_depth(&self) -> f64 {
        self.platform_draft - self.heave_offset
    }

    pub fn waterplane_area(&self) -> f64 {
        0.25 * PI * self.platform_diameter * self.platform_diameter
    }

    /// Stable fingerprint of every field (FNV-1a of the serialized form).
    pub fn fingerprint(&self) -> u64 {
        kv::fnv1a(serialize(self).as_bytes())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Plain,
    Angle,
    Speed,
    Rate,
}

impl Unit {
    fn canonical(self) -> Option<&'static str> {
        match self {
            Unit::Plain => None,
            Unit::Angle => Some("rad"),
            Unit::Speed | Unit::Rate => Some("rad/s"),
        }
    }

    fn to_si(self, key: &str, v: f64, unit: Option<&str>) -> Result<f64, Error> {
        let bad = |u: &str| Error::BadValue { key: key.to_string(), msg: format!("unsupported unit `{u}`") };
        match (self, unit) {
            (_, None) => Ok(v),
            (Unit::Angle, Some("rad")) | (Unit::Speed | Unit::Rate, Some("rad/s")) => Ok(v),
            (Unit::Angle, Some("deg")) => Ok(deg_to_rad(v)),
            (Unit::Speed, Some("rpm")) => Ok(v * 2.0 * PI / 60.0),
            (Unit::Rate, Some("deg/s")) => Ok(deg_to_rad(v)),
            (Unit::Plain, Some(u)) => {
                // informational SI suffixes are accepted as-is
                if u.contains("deg") || u == "rpm" {
                    Err(bad(u))
                } else {
                    Ok(v)
                }
            }
            (_, Some(u)) => Err(bad(u)),
        }
    }
}

struct Field {
    key: &'static str,
    unit: Unit,
    default: Option<f64>,
    get: fn(&ParameterSet) -> f64,
    set: fn(&mut ParameterSet, f64),
}

macro_rules! fields {
    ($( $key:literal => $field:ident, $unit:ident, $default:expr; )*) => {
        const FIELDS: &[Field] = &[
            $( Field {
                key: $key,
                unit: Unit::$unit,
                default: $default,
                get: |p| p.$field,
                set: |p, v| p.$field = v,
            }, )*
        ];
    };
}

fields! {
    "M_X" => surge_mass, Plain, None;
    "M_Y" => heave_mass, Plain, None;
    "M_d" => coupling_moment, Plain, None;
    "J_TOT" => pitch_inertia, Plain, None;
    "M_n" => nacelle_mass, Plain, None;
    "M_p" => platform_mass, Plain, None;
    "M_s" => tower_mass, Plain, None;
    "d_nv" => nacelle_height, Plain, None;
    "d_nh" => nacelle_offset, Plain, None;
    "d_pv" => platform_height, Plain, None;
    "d_ph" => platform_offset, Plain, None;
    "d_G" => buoyancy_depth, Plain, None;
    "d" => hub_height, Plain, None;
    "d_tower" => tower_aero_height, Plain, None;
    "R" => rotor_radius, Plain, None;
    "A_blade" => rotor_area, Plain, None;
    "A_tower" => tower_area, Plain, None;
    "A_nacelle" => nacelle_area, Plain, None;
    "V_g" => displaced_volume, Plain, None;
    "rho_air" => rho_air, Plain, None;
    "rho_water" => rho_water, Plain, None;
    "g" => g, Plain, None;
    "C_tower" => tower_drag, Plain, None;
    "C_nacelle" => nacelle_drag, Plain, None;
    "platform_diameter" => platform_diameter, Plain, None;
    "platform_draft" => platform_draft, Plain, None;
    "C_m" => inertia_coeff, Plain, Some(2.0);
    "C_d" => drag_coeff, Plain, Some(0.6);
    "C_d_heave" => heave_drag_coeff, Plain, Some(1.0);
    "water_depth" => water_depth, Plain, None;
    "J_R" => rotor_inertia, Plain, None;
    "J_G" => generator_inertia, Plain, None;
    "eta_G" => gear_ratio, Plain, None;
    "P_0" => rated_power, Plain, None;
    "T_E_rated" => rated_torque, Plain, None;
    "omega_0" => rated_speed, Speed, None;
    "omega_phi" => loop_frequency, Speed, Some(0.6);
    "zeta_phi" => loop_damping, Plain, Some(0.7);
    "beta_k" => schedule_knee, Angle, None;
    "a_p" => a_p, Plain, None;
    "a_i" => a_i, Plain, None;
    "K_d" => k_d, Plain, None;
    "pitch_sensitivity" => pitch_sensitivity, Plain, None;
    "pitch_rate_limit" => pitch_rate_limit, Rate, Some(8.0 * PI / 180.0);
    "pitch_min" => pitch_min, Angle, Some(0.0);
    "pitch_max" => pitch_max, Angle, Some(FRAC_PI_2);
    "heave_offset" => heave_offset, Plain, Some(37.55);
    "stall_floor" => stall_floor, Speed, Some(0.1);
}

struct RodField {
    name: &'static str,
    get: fn(&TieRod) -> f64,
    set: fn(&mut TieRod, f64),
}

const ROD_FIELDS: &[RodField] = &[
    RodField { name: "attach_x", get: |r| r.attach[0], set: |r, v| r.attach[0] = v },
    RodField { name: "attach_z", get: |r| r.attach[1], set: |r, v| r.attach[1] = v },
    RodField { name: "anchor_x", get: |r| r.anchor[0], set: |r, v| r.anchor[0] = v },
    RodField { name: "anchor_z", get: |r| r.anchor[1], set: |r, v| r.anchor[1] = v },
    RodField { name: "L0", get: |r| r.unstretched_length, set: |r, v| r.unstretched_length = v },
    RodField { name: "k", get: |r| r.stiffness, set: |r, v| r.stiffness = v },
    RodField { name: "lambda_l", get: |r| r.mass_per_length, set: |r, v| r.mass_per_length = v },
    RodField { name: "r_l", get: |r| r.radius, set: |r, v| r.radius = v },
];

const POSITIVE: &[&str] = &[
    "M_X", "M_Y", "J_TOT", "M_n", "M_p", "M_s", "d", "R", "A_blade", "A_tower", "A_nacelle", "V_g",
    "rho_air", "rho_water", "g", "platform_diameter", "platform_draft", "water_depth", "J_R", "J_G",
    "eta_G", "P_0", "T_E_rated", "omega_0", "omega_phi", "zeta_phi", "beta_k", "pitch_sensitivity",
    "pitch_rate_limit", "stall_floor",
];

const NON_NEGATIVE: &[&str] =
    &["C_tower", "C_nacelle", "C_m", "C_d", "C_d_heave", "a_p", "a_i", "K_d", "heave_offset", "d_tower"];

fn blank() -> ParameterSet {
    ParameterSet {
        surge_mass: 0.0,
        heave_mass: 0.0,
        coupling_moment: 0.0,
        pitch_inertia: 0.0,
        nacelle_mass: 0.0,
        platform_mass: 0.0,
        tower_mass: 0.0,
        nacelle_height: 0.0,
        nacelle_offset: 0.0,
        platform_height: 0.0,
        platform_offset: 0.0,
        buoyancy_depth: 0.0,
        hub_height: 0.0,
        tower_aero_height: 0.0,
        rotor_radius: 0.0,
        rotor_area: 0.0,
        tower_area: 0.0,
        nacelle_area: 0.0,
        displaced_volume: 0.0,
        rho_air: 0.0,
        rho_water: 0.0,
        g: 0.0,
        tower_drag: 0.0,
        nacelle_drag: 0.0,
        platform_diameter: 0.0,
        platform_draft: 0.0,
        inertia_coeff: 0.0,
        drag_coeff: 0.0,
        heave_drag_coeff: 0.0,
        water_depth: 0.0,
        tie_rods: Vec::new(),
        rotor_inertia: 0.0,
        generator_inertia: 0.0,
        gear_ratio: 0.0,
        rated_power: 0.0,
        rated_torque: 0.0,
        rated_speed: 0.0,
        loop_frequency: 0.0,
        loop_damping: 0.0,
        schedule_knee: 0.0,
        a_p: 0.0,
        a_i: 0.0,
        k_d: 0.0,
        pitch_sensitivity: 0.0,
        pitch_rate_limit: 0.0,
        pitch_min: 0.0,
        pitch_max: 0.0,
        heave_offset: 0.0,
        stall_floor: 0.0,
    }
}

fn field(key: &str) -> Option<&'static Field> {
    FIELDS.iter().find(|f| f.key == key)
}

/// Reads one parameter by its config key (`tie_rod.<n>.<field>` included).
pub fn get(p: &ParameterSet, key: &str) -> Option<f64> {
    if let Some(f) = field(key) {
        return Some((f.get)(p));
    }
    let (idx, name) = split_rod_key(key)?;
    let rod = p.tie_rods.get(idx)?;
    ROD_FIELDS.iter().find(|f| f.name == name).map(|f| (f.get)(rod))
}

/// Overwrites one parameter; the value is interpreted in SI.
pub fn set(p: &mut ParameterSet, key: &str, value: f64) -> Result<(), Error> {
    if let Some(f) = field(key) {
        (f.set)(p, value);
        return Ok(());
    }
    let unknown = || Error::UnknownKey(key.to_string());
    let (idx, name) = split_rod_key(key).ok_or_else(unknown)?;
    let rf = ROD_FIELDS.iter().find(|f| f.name == name).ok_or_else(unknown)?;
    let rod = p.tie_rods.get_mut(idx).ok_or_else(unknown)?;
    (rf.set)(rod, value);
    Ok(())
}

fn split_rod_key(key: &str) -> Option<(usize, &str)> {
    let rest = key.strip_prefix("tie_rod.")?;
    let (idx, name) = rest.split_once('.')?;
    Some((idx.parse().ok()?, name))
}

/// Parses and validates a parameter file.
pub fn load_parameters(text: &str) -> Result<ParameterSet, Error> {
    let entries = kv::parse(text)?;
    from_entries(&entries)
}

pub fn from_entries(entries: &[Entry]) -> Result<ParameterSet, Error> {
    let mut p = blank();
    let mut rods: Vec<(usize, &'static RodField, f64)> = Vec::new();
    let mut found = alloc::collections::BTreeSet::new();
    for e in entries {
        if let Some(f) = field(&e.key) {
            let v = kv::parse_f64(&e.key, &e.value)?;
            (f.set)(&mut p, f.unit.to_si(&e.key, v, e.unit.as_deref())?);
            found.insert(f.key);
        } else if let Some((idx, name)) = split_rod_key(&e.key) {
            let rf = ROD_FIELDS
                .iter()
                .find(|f| f.name == name)
                .ok_or_else(|| Error::UnknownKey(e.key.clone()))?;
            let v = kv::parse_f64(&e.key, &e.value)?;
            Unit::Plain.to_si(&e.key, v, e.unit.as_deref())?;
            rods.push((idx, rf, v));
        } else {
            return Err(Error::UnknownKey(e.key.clone()));
        }
    }
    for f in FIELDS {
        if !found.contains(f.key) {
            match f.default {
                Some(d) => (f.set)(&mut p, d),
                None => return Err(Error::MissingKey(f.key.to_string())),
            }
        }
    }
    let n_rods = rods.iter().map(|r| r.0 + 1).max().unwrap_or(0);
    let mut set_mask = alloc::vec![0u32; n_rods];
    p.tie_rods = alloc::vec![
        TieRod {
            attach: [0.0; 2],
            anchor: [0.0; 2],
            unstretched_length: 0.0,
            stiffness: 0.0,
            mass_per_length: 0.0,
            radius: 0.0,
        };
        n_rods
    ];
    for (idx, rf, v) in rods {
        (rf.set)(&mut p.tie_rods[idx], v);
        let bit = ROD_FIELDS.iter().position(|f| core::ptr::eq(f, rf)).unwrap_or(0);
        set_mask[idx] |= 1 << bit;
    }
    for (idx, mask) in set_mask.iter().enumerate() {
        for (bit, rf) in ROD_FIELDS.iter().enumerate() {
            if mask & (1 << bit) == 0 {
                return Err(Error::MissingKey(format!("tie_rod.{idx}.{}", rf.name)));
            }
        }
    }
    let diags = validate(&p);
    if diags.is_empty() {
        Ok(p)
    } else {
        Err(Error::Invalid(diags))
    }
}

/// Every invariant violation, one message per offending key.
pub fn validate(p: &ParameterSet) -> Vec<String> {
    let mut out = Vec::new();
    for f in FIELDS {
        let v = (f.get)(p);
        if !v.is_finite() {
            out.push(format!("{} must be finite", f.key));
        } else if POSITIVE.contains(&f.key) && v <= 0.0 {
            out.push(format!("{} must be positive", f.key));
        } else if NON_NEGATIVE.contains(&f.key) && v < 0.0 {
            out.push(format!("{} must be non-negative", f.key));
        }
    }
    if p.pitch_min < 0.0 || p.pitch_max > FRAC_PI_2 {
        out.push("pitch range must lie within [0, pi/2]".to_string());
    }
    if p.pitch_min >= p.pitch_max {
        out.push("pitch range lower bound must be below upper bound".to_string());
    }
    if p.tie_rods.is_empty() {
        out.push("at least one tie rod is required".to_string());
    }
    for (i, r) in p.tie_rods.iter().enumerate() {
        for rf in ROD_FIELDS {
            let v = (rf.get)(r);
            let key = format!("tie_rod.{i}.{}", rf.name);
            if !v.is_finite() {
                out.push(format!("{key} must be finite"));
            } else if matches!(rf.name, "L0" | "k" | "lambda_l" | "r_l") && v <= 0.0 {
                out.push(format!("{key} must be positive"));
            }
        }
    }
    out
}

/// Writes every field in SI units; `load_parameters(serialize(p)) == p`.
pub fn serialize(p: &ParameterSet) -> String {
    let mut out = String::new();
    for f in FIELDS {
        kv::push_f64(&mut out, f.key, (f.get)(p), f.unit.canonical());
    }
    for (i, r) in p.tie_rods.iter().enumerate() {
        for rf in ROD_FIELDS {
            kv::push_f64(&mut out, &format!("tie_rod.{i}.{}", rf.name), (rf.get)(r), None);
        }
    }
    out
}

/// The shipped NREL 5 MW / tension-leg parameter set.
pub fn reference() -> ParameterSet {
    load_parameters(crate::data::NREL_5MW_TLP).expect("shipped parameter file is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rated_speed_converted_from_rpm() {
        let p = reference();
        assert!((p.rated_speed - 1.26711).abs() < 1e-5);
        assert_eq!(p.rated_speed, 12.1 * 2.0 * PI / 60.0);
    }

    #[test]
    fn missing_and_negative_keys_are_named() {
        let text = crate::data::NREL_5MW_TLP;
        let no_g: String = text.lines().filter(|l| !l.trim_start().starts_with("g ")).map(|l| format!("{l}\n")).collect();
        assert_eq!(load_parameters(&no_g).unwrap_err().to_string(), "missing key: g");
        let neg: String = text
            .lines()
            .map(|l| if l.starts_with("rho_water") { "rho_water = -1\n".to_string() } else { format!("{l}\n") })
            .collect();
        assert_eq!(load_parameters(&neg).unwrap_err().to_string(), "rho_water must be positive");
    }

    #[test]
    fn validate_diagnostics() {
        let mut p = reference();
        assert!(validate(&p).is_empty());
        p.pitch_inertia = 0.0;
        assert_eq!(validate(&p), ["J_TOT must be positive"]);
        let mut p = reference();
        p.pitch_min = 0.5;
        p.pitch_max = 0.1;
        assert_eq!(validate(&p), ["pitch range lower bound must be below upper bound"]);
    }

    #[test]
    fn degrees_accepted_for_angles() {
        let text = crate::data::NREL_5MW_TLP.replace("pitch_max = 90 [deg]", "pitch_max = 1.5707963267948966 [rad]");
        assert_eq!(load_parameters(&text).unwrap(), reference());
    }
}
