//! What pilots see and what they want.

use netgame::normal_pdf;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::state::WorldState;
use crate::tcas::ResolutionAdvisory;

/// Base standard deviations of a pilot's view of each aircraft, scaled by
/// the noise multiplier: x, y, z, theta, theta_dot, z_dot, f.
pub const PILOT_NOISE_SIGMA: [f64; 7] = [100.0, 100.0, 20.0, 0.05, 0.0, 5.0, 10.0];

/// Index of z_dot within one aircraft's block of a pilot observation.
pub const OBS_Z_DOT: usize = 5;

/// A pilot's noisy view of both aircraft, 7 values per aircraft.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PilotObservation {
    pub aircraft: [[f64; 7]; 2],
}

impl PilotObservation {
    pub fn to_vector(&self) -> Vec<f64> {
        self.aircraft.concat()
    }

    pub fn from_slice(v: &[f64]) -> Self {
        let mut aircraft = [[0.0; 7]; 2];
        aircraft[0].copy_from_slice(&v[..7]);
        aircraft[1].copy_from_slice(&v[7..14]);
        PilotObservation { aircraft }
    }
}

pub fn pilot_observe<R: Rng + ?Sized>(s: &WorldState, noise: f64, rng: &mut R) -> PilotObservation {
    let mut out = PilotObservation::default();
    for (k, a) in s.aircraft.iter().enumerate() {
        let exact = a.observable();
        for c in 0..7 {
            let sigma = noise * PILOT_NOISE_SIGMA[c];
            out.aircraft[k][c] = if sigma == 0.0 {
                exact[c]
            } else {
                let e: f64 = rng.sample(StandardNormal);
                exact[c] + sigma * e
            };
        }
    }
    out
}

/// Density of a flattened observation given the true state. Components
/// with zero noise contribute an indicator.
pub fn pilot_observation_density(obs: &[f64], s: &WorldState, noise: f64) -> f64 {
    let mut p = 1.0;
    for (k, a) in s.aircraft.iter().enumerate() {
        let exact = a.observable();
        for c in 0..7 {
            p *= normal_pdf(obs[7 * k + c], exact[c], noise * PILOT_NOISE_SIGMA[c]);
            if p == 0.0 {
                return 0.0;
            }
        }
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityWeights {
    /// Weight on log miss distance.
    pub alpha1: f64,
    /// Weight on deviating from the current vertical rate.
    pub alpha2: f64,
    /// Weight on deviating from the advisory.
    pub alpha3: f64,
    /// Offset inside the logarithm, ft.
    pub delta: f64,
}

impl Default for UtilityWeights {
    fn default() -> Self {
        UtilityWeights {
            alpha1: 5.0,
            alpha2: 0.2,
            alpha3: 0.1,
            delta: 1.0,
        }
    }
}

/// Pilot utility for choosing vertical rate `action` given the observed own
/// vertical rate, the advisory and the resulting miss distance. The
/// advisory term is absent without an advisory.
pub fn pilot_utility(
    w: &UtilityWeights,
    d_min: f64,
    observed_z_dot: f64,
    advisory: ResolutionAdvisory,
    action: f64,
) -> f64 {
    let mut u = w.alpha1 * (w.delta + d_min).ln() - w.alpha2 * (observed_z_dot - action).abs();
    if let Some(rate) = advisory.rate() {
        u -= w.alpha3 * (rate - action).abs();
    }
    u
}
