/// Mainframe and rotor state in the model frame: surge along the upwind
/// horizontal, heave as depth of the reference point below sea level, pitch
/// positive when the tower top leans upwind.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StateVector {
    pub surge: f64,
    pub surge_rate: f64,
    pub heave: f64,
    pub heave_rate: f64,
    pub pitch: f64,
    pub pitch_rate: f64,
    pub rotor_speed: f64,
}

impl StateVector {
    pub fn to_array(&self) -> [f64; 7] {
        [
            self.surge,
            self.surge_rate,
            self.heave,
            self.heave_rate,
            self.pitch,
            self.pitch_rate,
            self.rotor_speed,
        ]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        Self {
            surge: a[0],
            surge_rate: a[1],
            heave: a[2],
            heave_rate: a[3],
            pitch: a[4],
            pitch_rate: a[5],
            rotor_speed: a[6],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// State in the right-handed reporting frame: surge positive downwind, heave
/// positive up relative to the nominal reference depth, pitch positive when
/// the tower leans downwind.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReportedState {
    pub surge: f64,
    pub surge_rate: f64,
    pub heave: f64,
    pub heave_rate: f64,
    pub pitch: f64,
    pub pitch_rate: f64,
    pub rotor_speed: f64,
}

pub fn to_rccs(s: &StateVector, heave_offset: f64) -> ReportedState {
    ReportedState {
        surge: -s.surge,
        surge_rate: -s.surge_rate,
        heave: heave_offset - s.heave,
        heave_rate: -s.heave_rate,
        pitch: -s.pitch,
        pitch_rate: -s.pitch_rate,
        rotor_speed: s.rotor_speed,
    }
}

pub fn from_rccs(r: &ReportedState, heave_offset: f64) -> StateVector {
    StateVector {
        surge: -r.surge,
        surge_rate: -r.surge_rate,
        heave: heave_offset - r.heave,
        heave_rate: -r.heave_rate,
        pitch: -r.pitch,
        pitch_rate: -r.pitch_rate,
        rotor_speed: r.rotor_speed,
    }
}
