//! Noisy TCAS sensing and the mini-TCAS advisory logic.

use std::fmt;

use netgame::normal_pdf;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::state::{Sense, TcasIntent, WorldState};

/// Base standard deviations of the TCAS observation, scaled by the noise
/// multiplier: r_h, r_h_dot, h_dot, h, h_i.
pub const TCAS_NOISE_SIGMA: [f64; 5] = [100.0, 50.0, 4.0, 10.0, 10.0];

/// What one aircraft's TCAS measures about the other. `h` and `h_dot` are
/// intruder minus own.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TcasObservation {
    pub r_h: f64,
    pub r_h_dot: f64,
    pub h_dot: f64,
    pub h: f64,
    pub h_i: f64,
    /// The aircraft coincided horizontally; `r_h_dot` was set to 0.
    pub coincident: bool,
}

impl TcasObservation {
    pub fn to_array(&self) -> [f64; 5] {
        [self.r_h, self.r_h_dot, self.h_dot, self.h, self.h_i]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        TcasObservation {
            r_h: v[0],
            r_h_dot: v[1],
            h_dot: v[2],
            h: v[3],
            h_i: v[4],
            coincident: v[0] == 0.0,
        }
    }
}

/// Exact TCAS quantities for aircraft `own` (0 or 1).
pub fn tcas_exact(s: &WorldState, own: usize) -> TcasObservation {
    let i = &s.aircraft[own];
    let j = &s.aircraft[1 - own];
    let (dx, dy) = (j.x - i.x, j.y - i.y);
    let r_h = dx.hypot(dy);
    let coincident = r_h == 0.0;
    let r_h_dot = if coincident {
        0.0
    } else {
        (dx * (j.f * j.theta.cos() - i.f * i.theta.cos())
            + dy * (j.f * j.theta.sin() - i.f * i.theta.sin()))
            / r_h
    };
    TcasObservation {
        r_h,
        r_h_dot,
        h_dot: j.z_dot - i.z_dot,
        h: j.z - i.z,
        h_i: i.z,
        coincident,
    }
}

/// Noisy observation with standard deviations `noise * TCAS_NOISE_SIGMA`.
/// The measured range is clamped at 0.
pub fn tcas_observe<R: Rng + ?Sized>(
    s: &WorldState,
    own: usize,
    noise: f64,
    rng: &mut R,
) -> TcasObservation {
    let exact = tcas_exact(s, own).to_array();
    let mut v = [0.0; 5];
    for k in 0..5 {
        let e: f64 = rng.sample(StandardNormal);
        v[k] = exact[k] + noise * TCAS_NOISE_SIGMA[k] * e;
    }
    v[0] = v[0].max(0.0);
    let mut obs = TcasObservation::from_slice(&v);
    obs.coincident = exact[0] == 0.0;
    obs
}

/// Density of `obs` given the true state, ignoring the clamp at 0.
pub fn tcas_observation_density(obs: &[f64], s: &WorldState, own: usize, noise: f64) -> f64 {
    let exact = tcas_exact(s, own).to_array();
    (0..5)
        .map(|k| normal_pdf(obs[k], exact[k], noise * TCAS_NOISE_SIGMA[k]))
        .product()
}

/// A resolution advisory: a target vertical rate in ft/s, or none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ResolutionAdvisory {
    #[default]
    None,
    Descend42,
    Descend25,
    Level,
    Climb25,
    Climb42,
}

impl ResolutionAdvisory {
    pub const ALL: [ResolutionAdvisory; 6] = [
        ResolutionAdvisory::None,
        ResolutionAdvisory::Descend42,
        ResolutionAdvisory::Descend25,
        ResolutionAdvisory::Level,
        ResolutionAdvisory::Climb25,
        ResolutionAdvisory::Climb42,
    ];

    /// Commanded vertical rate, ft/s.
    pub fn rate(self) -> Option<f64> {
        match self {
            ResolutionAdvisory::None => None,
            ResolutionAdvisory::Descend42 => Some(-42.0),
            ResolutionAdvisory::Descend25 => Some(-25.0),
            ResolutionAdvisory::Level => Some(0.0),
            ResolutionAdvisory::Climb25 => Some(25.0),
            ResolutionAdvisory::Climb42 => Some(42.0),
        }
    }

    pub fn sense(self) -> Option<Sense> {
        match self {
            ResolutionAdvisory::None => None,
            ResolutionAdvisory::Descend42 | ResolutionAdvisory::Descend25 => Some(Sense::Down),
            ResolutionAdvisory::Level => Some(Sense::Level),
            ResolutionAdvisory::Climb25 | ResolutionAdvisory::Climb42 => Some(Sense::Up),
        }
    }

    pub fn is_some(self) -> bool {
        self != ResolutionAdvisory::None
    }

    /// Position in [`ResolutionAdvisory::ALL`]; the encoding of T in the net.
    pub fn code(self) -> i64 {
        Self::ALL.iter().position(|&r| r == self).unwrap_or(0) as i64
    }

    pub fn from_code(code: i64) -> Option<Self> {
        usize::try_from(code)
            .ok()
            .and_then(|c| Self::ALL.get(c).copied())
    }

    fn of(sense: Sense, strong: bool) -> Self {
        match (sense, strong) {
            (Sense::Up, false) => ResolutionAdvisory::Climb25,
            (Sense::Up, true) => ResolutionAdvisory::Climb42,
            (Sense::Down, false) => ResolutionAdvisory::Descend25,
            (Sense::Down, true) => ResolutionAdvisory::Descend42,
            (Sense::Level, _) => ResolutionAdvisory::Level,
        }
    }

    /// Whether `next`, following `first`, reverses its sense or asks for a
    /// larger rate. Dropping to no advisory or weakening is neither.
    pub fn is_reversal_or_strengthening(first: Self, next: Self) -> bool {
        match (first.rate(), next.rate()) {
            (Some(a), Some(b)) => first.sense() != next.sense() || b.abs() > a.abs(),
            _ => false,
        }
    }
}

impl fmt::Display for ResolutionAdvisory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResolutionAdvisory::None => "none",
            ResolutionAdvisory::Descend42 => "-42",
            ResolutionAdvisory::Descend25 => "-25",
            ResolutionAdvisory::Level => "0",
            ResolutionAdvisory::Climb25 => "+25",
            ResolutionAdvisory::Climb42 => "+42",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcasParams {
    /// Horizontal protection radius, ft.
    pub dmod: f64,
    /// Vertical protection threshold, ft.
    pub zthr: f64,
    /// Time threshold, s.
    pub tau: f64,
    /// Separation an advisory of 25 ft/s must achieve before 42 is used, ft.
    pub alim: f64,
    /// Pilot response delay assumed when predicting own displacement, s.
    pub response_delay: f64,
    /// Vertical acceleration assumed for the response, ft/s^2.
    pub response_accel: f64,
    /// Below this own altitude no descend advisory is issued, ft.
    pub descend_inhibit: f64,
}

impl Default for TcasParams {
    fn default() -> Self {
        TcasParams {
            dmod: 3500.0,
            zthr: 600.0,
            tau: 25.0,
            alim: 400.0,
            response_delay: 5.0,
            response_accel: 8.05,
            descend_inhibit: 1000.0,
        }
    }
}

impl TcasParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [
            ("dmod", self.dmod),
            ("zthr", self.zthr),
            ("tau", self.tau),
            ("alim", self.alim),
            ("response_accel", self.response_accel),
        ] {
            if !(v.is_finite() && v > 0.0) {
                out.push(format!("tcas.{name} must be positive, got {v}"));
            }
        }
        if !(self.response_delay.is_finite() && self.response_delay >= 0.0) {
            out.push(format!(
                "tcas.response_delay must be non-negative, got {}",
                self.response_delay
            ));
        }
        out
    }

    /// Own vertical displacement after `t` seconds when responding to a
    /// target `rate` from level flight.
    pub fn displacement(&self, t: f64, rate: f64) -> f64 {
        self.displacement_after(t, rate, self.response_delay)
    }

    fn displacement_after(&self, t: f64, rate: f64, delay: f64) -> f64 {
        let t = t - delay;
        if t <= 0.0 || rate == 0.0 {
            return 0.0;
        }
        let t_acc = rate.abs() / self.response_accel;
        let d = if t <= t_acc {
            0.5 * self.response_accel * t * t
        } else {
            rate.abs() * (t - t_acc) + 0.5 * rate.abs() * t_acc
        };
        d * rate.signum()
    }
}

/// Memoryless advisory logic.
///
/// An advisory is issued when the range, altitude and predicted-separation
/// tests all pass. An own intent that is still allowed keeps its sense.
/// Otherwise, among the senses not taken by the intruder (and not descend
/// below the inhibit altitude), the one maximising predicted separation at
/// closest approach wins, ties going to up, down, level. The 25 ft/s strength is used when it achieves
/// `alim`, otherwise 42.
pub fn mini_tcas(
    obs: &TcasObservation,
    own_intent: TcasIntent,
    intruder_intent: TcasIntent,
    p: &TcasParams,
) -> ResolutionAdvisory {
    let (r, rdot, h, hdot) = (obs.r_h, obs.r_h_dot, obs.h, obs.h_dot);
    let range_ok = r <= p.dmod || (rdot < 0.0 && (r * r - p.dmod * p.dmod) / (r * -rdot) <= p.tau);
    if !range_ok {
        return ResolutionAdvisory::None;
    }
    let alt_ok = h.abs() <= p.zthr || (h * hdot < 0.0 && -h / hdot <= p.tau);
    if !alt_ok {
        return ResolutionAdvisory::None;
    }
    let tau = if rdot < 0.0 { r / -rdot } else { 0.0 };
    let h_cpa = h + hdot * tau;
    if h_cpa.abs() > p.zthr {
        return ResolutionAdvisory::None;
    }

    let mut order = Vec::with_capacity(4);
    if let Some(s) = own_intent.sense() {
        order.push(s);
    }
    for s in [Sense::Up, Sense::Down, Sense::Level] {
        if !order.contains(&s) {
            order.push(s);
        }
    }
    let blocked = intruder_intent.sense();
    let allowed =
        |s: Sense| Some(s) != blocked && !(s == Sense::Down && obs.h_i < p.descend_inhibit);
    // An advisory in progress keeps its sense, and its pilot is taken to be
    // responding already, so no further response delay is assumed.
    let delay = if own_intent.is_issued() {
        0.0
    } else {
        p.response_delay
    };
    let sep_of = |s: Sense| (h_cpa - p.displacement_after(tau, 25.0 * s.sign(), delay)).abs();
    let mut best: Option<(Sense, f64)> = own_intent
        .sense()
        .filter(|&s| allowed(s))
        .map(|s| (s, sep_of(s)));
    if best.is_none() {
        for s in order {
            if !allowed(s) {
                continue;
            }
            let sep = sep_of(s);
            if best.is_none_or(|(_, b)| sep > b) {
                best = Some((s, sep));
            }
        }
    }
    match best {
        None => ResolutionAdvisory::None,
        Some((s, sep)) => ResolutionAdvisory::of(s, s != Sense::Level && sep < p.alim),
    }
}
