//! First-order aircraft kinematics.

use crate::state::{AircraftState, WorldState};

/// Standard gravity, ft/s^2.
pub const GRAVITY: f64 = 32.174;

/// Time constants of the first-order filters on heading rate, vertical
/// rate and forward speed (s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterTimeConstants {
    pub theta_dot: f64,
    pub z_dot: f64,
    pub f: f64,
}

impl Default for FilterTimeConstants {
    fn default() -> Self {
        FilterTimeConstants {
            theta_dot: 2.0,
            z_dot: 3.0,
            f: 5.0,
        }
    }
}

/// Heading rate a coordinated turn at roll `phi` and speed `f` produces
/// (small-angle form).
pub fn turn_rate(phi: f64, f: f64) -> f64 {
    GRAVITY * phi / f
}

/// Roll command giving heading rate `rate` at speed `f`.
pub fn roll_for_turn_rate(rate: f64, f: f64) -> f64 {
    rate * f / GRAVITY
}

/// One forward-Euler step. Position and heading advance with the rates at
/// the start of the step; the rates then move toward their commands.
pub fn kinematics_step(a: &AircraftState, dt: f64, taus: &FilterTimeConstants) -> AircraftState {
    let theta_dot_cmd = turn_rate(a.phi_c, a.f);
    AircraftState {
        x: a.x + dt * a.f * a.theta.cos(),
        y: a.y + dt * a.f * a.theta.sin(),
        z: a.z + dt * a.z_dot,
        theta: a.theta + dt * a.theta_dot,
        theta_dot: a.theta_dot + dt / taus.theta_dot * (theta_dot_cmd - a.theta_dot),
        z_dot: a.z_dot + dt / taus.z_dot * (a.z_dot_c - a.z_dot),
        f: a.f + dt / taus.f * (a.f_c - a.f),
        ..*a
    }
}

/// Steps both aircraft; intents are carried over and time advances.
pub fn world_step(s: &WorldState, dt: f64, taus: &FilterTimeConstants) -> WorldState {
    WorldState {
        aircraft: [
            kinematics_step(&s.aircraft[0], dt, taus),
            kinematics_step(&s.aircraft[1], dt, taus),
        ],
        intents: s.intents,
        time: s.time + dt,
    }
}

/// Smallest 3-D separation over a trajectory.
///
/// # Panics
/// On an empty trajectory.
pub fn min_approach_distance(trajectory: &[WorldState]) -> f64 {
    assert!(!trajectory.is_empty(), "empty trajectory");
    trajectory
        .iter()
        .map(WorldState::separation)
        .fold(f64::INFINITY, f64::min)
}

/// Recognises that two aircraft have passed each other: the range is
/// opening and has grown over two consecutive steps.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PassDetector {
    history: [Option<f64>; 2],
}

impl PassDetector {
    /// Feeds the range after a step; returns whether the aircraft have
    /// passed.
    pub fn update(&mut self, s: &WorldState) -> bool {
        let r = s.horizontal_range();
        let passed = match self.history {
            [Some(r2), Some(r1)] => s.range_rate() > 0.0 && r > r1 && r1 > r2,
            _ => false,
        };
        self.history = [self.history[1], Some(r)];
        passed
    }
}
