//! World state: two aircraft plus their TCAS intents.

use std::fmt;

/// Vertical direction of an advisory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Up,
    Level,
    Down,
}

impl Sense {
    /// Sign of the vertical rate this sense commands.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Up => 1.0,
            Sense::Level => 0.0,
            Sense::Down => -1.0,
        }
    }
}

/// Intent broadcast by an aircraft's TCAS once it has issued an advisory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TcasIntent {
    #[default]
    None,
    Issued(Sense),
}

impl TcasIntent {
    pub fn sense(self) -> Option<Sense> {
        match self {
            TcasIntent::None => None,
            TcasIntent::Issued(s) => Some(s),
        }
    }

    pub fn is_issued(self) -> bool {
        self != TcasIntent::None
    }

    /// Numeric code used inside the net: 0 none, 1 up, 2 level, 3 down.
    pub fn code(self) -> f64 {
        match self {
            TcasIntent::None => 0.0,
            TcasIntent::Issued(Sense::Up) => 1.0,
            TcasIntent::Issued(Sense::Level) => 2.0,
            TcasIntent::Issued(Sense::Down) => 3.0,
        }
    }

    pub fn from_code(code: f64) -> Option<Self> {
        match code {
            c if c == 0.0 => Some(TcasIntent::None),
            c if c == 1.0 => Some(TcasIntent::Issued(Sense::Up)),
            c if c == 2.0 => Some(TcasIntent::Issued(Sense::Level)),
            c if c == 3.0 => Some(TcasIntent::Issued(Sense::Down)),
            _ => None,
        }
    }

    pub const ALL: [TcasIntent; 4] = [
        TcasIntent::None,
        TcasIntent::Issued(Sense::Up),
        TcasIntent::Issued(Sense::Level),
        TcasIntent::Issued(Sense::Down),
    ];
}

/// Kinematic state and commands of one aircraft. Distances in ft, angles in
/// rad, times in s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AircraftState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub z_dot: f64,
    pub f: f64,
    pub phi_c: f64,
    pub z_dot_c: f64,
    pub f_c: f64,
}

/// Number of values per aircraft in the flat encoding.
pub const AIRCRAFT_DIM: usize = 10;
/// Length of the flat world-state encoding: two aircraft and two intents.
pub const WORLD_DIM: usize = 2 * AIRCRAFT_DIM + 2;

impl AircraftState {
    pub fn to_array(&self) -> [f64; AIRCRAFT_DIM] {
        [
            self.x,
            self.y,
            self.z,
            self.theta,
            self.theta_dot,
            self.z_dot,
            self.f,
            self.phi_c,
            self.z_dot_c,
            self.f_c,
        ]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        AircraftState {
            x: v[0],
            y: v[1],
            z: v[2],
            theta: v[3],
            theta_dot: v[4],
            z_dot: v[5],
            f: v[6],
            phi_c: v[7],
            z_dot_c: v[8],
            f_c: v[9],
        }
    }

    /// The kinematic part a pilot can observe: x, y, z, theta, theta_dot,
    /// z_dot, f.
    pub fn observable(&self) -> [f64; 7] {
        [
            self.x,
            self.y,
            self.z,
            self.theta,
            self.theta_dot,
            self.z_dot,
            self.f,
        ]
    }

    pub fn is_valid(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
            && self.f > 0.0
            && (-50.0..=50.0).contains(&self.z_dot_c)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WorldState {
    pub aircraft: [AircraftState; 2],
    pub intents: [TcasIntent; 2],
    pub time: f64,
}

impl WorldState {
    /// Flat encoding without the time: aircraft 0, aircraft 1, intent codes.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(WORLD_DIM);
        v.extend_from_slice(&self.aircraft[0].to_array());
        v.extend_from_slice(&self.aircraft[1].to_array());
        v.push(self.intents[0].code());
        v.push(self.intents[1].code());
        v
    }

    /// Inverse of [`WorldState::to_vector`]; time is set to 0. Unknown
    /// intent codes decode as no intent.
    pub fn from_vector(v: &[f64]) -> Self {
        WorldState {
            aircraft: [
                AircraftState::from_slice(&v[..AIRCRAFT_DIM]),
                AircraftState::from_slice(&v[AIRCRAFT_DIM..]),
            ],
            intents: [
                TcasIntent::from_code(v[2 * AIRCRAFT_DIM]).unwrap_or_default(),
                TcasIntent::from_code(v[2 * AIRCRAFT_DIM + 1]).unwrap_or_default(),
            ],
            time: 0.0,
        }
    }

    pub fn horizontal_range(&self) -> f64 {
        let [a, b] = &self.aircraft;
        (b.x - a.x).hypot(b.y - a.y)
    }

    pub fn vertical_separation(&self) -> f64 {
        (self.aircraft[1].z - self.aircraft[0].z).abs()
    }

    /// 3-D distance between the aircraft.
    pub fn separation(&self) -> f64 {
        self.horizontal_range().hypot(self.vertical_separation())
    }

    /// True horizontal range rate; 0 when the aircraft coincide.
    pub fn range_rate(&self) -> f64 {
        let [a, b] = &self.aircraft;
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let r = dx.hypot(dy);
        if r == 0.0 {
            return 0.0;
        }
        let (dvx, dvy) = (
            b.f * b.theta.cos() - a.f * a.theta.cos(),
            b.f * b.theta.sin() - a.f * a.theta.sin(),
        );
        (dx * dvx + dy * dvy) / r
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Up => "up",
            Sense::Level => "level",
            Sense::Down => "down",
        })
    }
}
