//! Time-extended encounter simulation.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EncounterError;
use crate::game::{pilot_decide, GameParams, PilotView};
use crate::kinematics::{roll_for_turn_rate, world_step, PassDetector};
use crate::pilot::{pilot_observe, PilotObservation};
use crate::state::{AircraftState, TcasIntent, WorldState};
use crate::tcas::{mini_tcas, tcas_observe, ResolutionAdvisory, TcasObservation};

/// Ranges the encounter generator draws from. All ranges are `(low, high)`
/// and may be degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    /// Time of horizontal closest approach, s.
    pub t_target: (f64, f64),
    /// Forward speed, ft/s.
    pub speed: (f64, f64),
    /// Vertical rate, ft/s.
    pub vertical_rate: (f64, f64),
    /// Own altitude at closest approach, ft.
    pub cpa_altitude: (f64, f64),
    /// Signed horizontal miss distance, ft. Its magnitude is the miss
    /// distance and its sign the side.
    pub hmd: (f64, f64),
    /// Intruder minus own altitude at closest approach, ft.
    pub vmd: (f64, f64),
    /// Heading of aircraft 0, rad.
    pub heading: (f64, f64),
    /// Heading of aircraft 1 relative to aircraft 0, rad.
    pub approach_angle: (f64, f64),
    /// Smallest acceptable horizontal closing speed, ft/s.
    pub min_closing_speed: f64,
    /// Draws before giving up on the closing-speed requirement.
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            t_target: (40.0, 60.0),
            speed: (250.0, 450.0),
            vertical_rate: (-15.0, 15.0),
            cpa_altitude: (5000.0, 15000.0),
            hmd: (-500.0, 500.0),
            vmd: (-100.0, 100.0),
            heading: (0.0, 2.0 * PI),
            approach_angle: (0.0, 2.0 * PI),
            min_closing_speed: 50.0,
            max_attempts: 1000,
        }
    }
}

impl GeneratorConfig {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, (lo, hi)) in [
            ("t_target", self.t_target),
            ("speed", self.speed),
            ("vertical_rate", self.vertical_rate),
            ("cpa_altitude", self.cpa_altitude),
            ("hmd", self.hmd),
            ("vmd", self.vmd),
            ("heading", self.heading),
            ("approach_angle", self.approach_angle),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                out.push(format!(
                    "generator.{name} must be a finite range with low <= high"
                ));
            }
        }
        if self.speed.0 <= 0.0 {
            out.push("generator.speed must be positive".to_string());
        }
        if self.t_target.0 < 0.0 {
            out.push("generator.t_target must be non-negative".to_string());
        }
        if self.vertical_rate.0 < -50.0 || self.vertical_rate.1 > 50.0 {
            out.push("generator.vertical_rate must lie within [-50, 50]".to_string());
        }
        if self.max_attempts == 0 {
            out.push("generator.max_attempts must be at least 1".to_string());
        }
        out
    }
}

fn draw<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// A generated initial state and the closest-approach time it was built
/// around.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedEncounter {
    pub state: WorldState,
    pub t_target: f64,
}

/// Builds the geometry at the target time and propagates it back to t = 0
/// along straight, constant-rate tracks. Commands start at their current
/// values, so both aircraft fly straight until something changes them.
pub fn generate_encounter<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<GeneratedEncounter, EncounterError> {
    let problems = cfg.problems();
    if !problems.is_empty() {
        return Err(EncounterError::InvalidConfig(problems.join("; ")));
    }
    for _ in 0..cfg.max_attempts {
        let t = draw(rng, cfg.t_target);
        let f = [draw(rng, cfg.speed), draw(rng, cfg.speed)];
        let z_dot = [draw(rng, cfg.vertical_rate), draw(rng, cfg.vertical_rate)];
        let theta0 = draw(rng, cfg.heading);
        let theta = [theta0, theta0 + draw(rng, cfg.approach_angle)];
        let z_cpa = draw(rng, cfg.cpa_altitude);
        let hmd = draw(rng, cfg.hmd);
        let vmd = draw(rng, cfg.vmd);

        let v = [0, 1].map(|k| (f[k] * theta[k].cos(), f[k] * theta[k].sin()));
        let rel = (v[1].0 - v[0].0, v[1].1 - v[0].1);
        let closing = rel.0.hypot(rel.1);
        if closing < cfg.min_closing_speed {
            continue;
        }
        // Intruder offset at closest approach is perpendicular to the
        // relative velocity.
        let (px, py) = (-rel.1 / closing * hmd, rel.0 / closing * hmd);
        let cpa = [(0.0, 0.0, z_cpa), (px, py, z_cpa + vmd)];
        let aircraft = [0, 1].map(|k| AircraftState {
            x: cpa[k].0 - v[k].0 * t,
            y: cpa[k].1 - v[k].1 * t,
            z: cpa[k].2 - z_dot[k] * t,
            theta: theta[k],
            theta_dot: 0.0,
            z_dot: z_dot[k],
            f: f[k],
            phi_c: 0.0,
            z_dot_c: z_dot[k],
            f_c: f[k],
        });
        return Ok(GeneratedEncounter {
            state: WorldState {
                aircraft,
                intents: [TcasIntent::None; 2],
                time: 0.0,
            },
            t_target: t,
        });
    }
    Err(EncounterError::GeneratorExhausted(cfg.max_attempts))
}

/// Horizontal closest-approach time of the straight-line extrapolation.
pub fn straight_line_cpa_time(s: &WorldState) -> f64 {
    let [a, b] = &s.aircraft;
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let (vx, vy) = (
        b.f * b.theta.cos() - a.f * a.theta.cos(),
        b.f * b.theta.sin() - a.f * a.theta.sin(),
    );
    let v2 = vx * vx + vy * vy;
    if v2 == 0.0 {
        0.0
    } else {
        -(dx * vx + dy * vy) / v2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncounterConfig {
    pub game: GameParams,
    pub generator: GeneratorConfig,
    /// Longest simulated time, s.
    pub max_duration: f64,
    /// Near mid-air collision: horizontal and vertical separation both
    /// strictly below these, ft.
    pub nmac_horizontal: f64,
    pub nmac_vertical: f64,
    /// Issue horizontal advisories alongside the vertical ones.
    pub horizontal: bool,
}

impl Default for EncounterConfig {
    fn default() -> Self {
        EncounterConfig {
            game: GameParams::default(),
            generator: GeneratorConfig::default(),
            max_duration: 120.0,
            nmac_horizontal: 500.0,
            nmac_vertical: 100.0,
            horizontal: false,
        }
    }
}

impl EncounterConfig {
    pub fn problems(&self) -> Vec<String> {
        let mut out = self.game.problems();
        out.extend(self.generator.problems());
        if !(self.max_duration.is_finite() && self.max_duration >= self.game.dt) {
            out.push(format!(
                "max_duration must be at least dt, got {}",
                self.max_duration
            ));
        }
        if !(self.nmac_horizontal > 0.0 && self.nmac_vertical > 0.0) {
            out.push("NMAC thresholds must be positive".to_string());
        }
        out
    }

    pub fn validate(&self) -> Result<(), EncounterError> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(EncounterError::InvalidConfig(p.join("; ")))
        }
    }
}

pub fn detect_nmac(s: &WorldState, cfg: &EncounterConfig) -> bool {
    s.horizontal_range() < cfg.nmac_horizontal && s.vertical_separation() < cfg.nmac_vertical
}

/// Candidate horizontal advisories, deg/s, in tie-break order: maintain,
/// moderate left and right, hard left and right. Positive is a left
/// (counter-clockwise) turn.
pub const HEADING_CANDIDATES_DEG: [f64; 5] = [0.0, 1.5, -1.5, 3.0, -3.0];

/// Chooses the heading rate (rad/s) for the second aircraft to receive an
/// advisory. The simulation is paused just before that aircraft's pilot
/// decides; see [`EncounterSim::counterfactual`].
pub trait HorizontalAdvisor {
    fn advise(&self, sim: &EncounterSim, aircraft: usize) -> Result<f64, String>;
}

/// Both aircraft keep their heading.
pub struct MaintainHeading;

impl HorizontalAdvisor for MaintainHeading {
    fn advise(&self, _sim: &EncounterSim, _aircraft: usize) -> Result<f64, String> {
        Ok(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndReason {
    Nmac,
    Passed,
    MaxDuration,
    Discarded,
    Failed,
}

impl std::fmt::Display for EndReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EndReason::Nmac => "nmac",
            EndReason::Passed => "passed",
            EndReason::MaxDuration => "max_duration",
            EndReason::Discarded => "discarded",
            EndReason::Failed => "failed",
        })
    }
}

/// What happened to one pilot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PilotRecord {
    /// First advisory received.
    pub ra: ResolutionAdvisory,
    /// Time of the first advisory, s.
    pub t_ra: Option<f64>,
    /// Chosen vertical rate, ft/s.
    pub action: Option<f64>,
    /// Horizontal advisory followed, rad/s.
    pub heading_rate: Option<f64>,
    /// Candidate rates and their estimated utilities.
    pub estimates: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub state: WorldState,
    /// Advisory each aircraft's TCAS showed at this time (none before the
    /// first observation).
    pub ras: [ResolutionAdvisory; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub seed: u64,
    pub t_target: f64,
    pub d_min: f64,
    pub nmac: bool,
    /// Social welfare: 0 on NMAC, otherwise the miss distance.
    pub welfare: f64,
    pub discarded: bool,
    pub failure: Option<String>,
    pub end: EndReason,
    pub duration: f64,
    pub pilots: [PilotRecord; 2],
    pub trajectory: Option<Vec<TrajectoryPoint>>,
    /// Excluded from comparisons between runs.
    pub wall_time: Duration,
}

impl OutcomeRecord {
    /// Counted in statistics: neither discarded nor failed.
    pub fn is_valid(&self) -> bool {
        !self.discarded && self.failure.is_none()
    }

    /// Everything but the wall time, floats as raw bits.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let bits = |x: f64| format!("{:016x}", x.to_bits());
        let opt = |x: Option<f64>| x.map_or("-".to_string(), bits);
        let _ = write!(
            s,
            "seed={} t_target={} d_min={} nmac={} F={} discarded={} failure={} end={} duration={}",
            self.seed,
            bits(self.t_target),
            bits(self.d_min),
            self.nmac,
            bits(self.welfare),
            self.discarded,
            self.failure.as_deref().unwrap_or("-"),
            self.end,
            bits(self.duration)
        );
        for p in &self.pilots {
            let _ = write!(
                s,
                " | ra={} t={} a={} h={}",
                p.ra,
                opt(p.t_ra),
                opt(p.action),
                opt(p.heading_rate)
            );
            for (c, e) in &p.estimates {
                let _ = write!(s, " {}:{}", bits(*c), bits(*e));
            }
        }
        if let Some(t) = &self.trajectory {
            for pt in t {
                let _ = write!(s, "\n{} {} {}", bits(pt.state.time), pt.ras[0], pt.ras[1]);
                for v in pt.state.to_vector() {
                    let _ = write!(s, " {}", bits(v));
                }
            }
        }
        s
    }
}

/// Writes a trajectory as CSV, one row per aircraft per time step.
pub fn write_trajectory_csv<W: io::Write>(points: &[TrajectoryPoint], mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "time,aircraft,x,y,z,theta,theta_dot,z_dot,f,phi_c,z_dot_c,f_c,intent,ra"
    )?;
    for pt in points {
        for (k, a) in pt.state.aircraft.iter().enumerate() {
            let intent = pt.state.intents[k]
                .sense()
                .map_or("none".to_string(), |s| s.to_string());
            write!(w, "{},{}", pt.state.time, k + 1)?;
            for v in a.to_array() {
                write!(w, ",{v}")?;
            }
            writeln!(w, ",{intent},{}", pt.ras[k])?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct PendingCommand {
    at: f64,
    aircraft: usize,
    z_dot_c: f64,
    heading_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct Observed {
    pilot: [PilotObservation; 2],
    tcas: [TcasObservation; 2],
    ras: [ResolutionAdvisory; 2],
    /// Intents each aircraft's TCAS saw.
    views: [[TcasIntent; 2]; 2],
    /// Pilots receiving their first advisory this step.
    new: [bool; 2],
}

/// A resumable, clonable encounter. One call to [`EncounterSim::step`]
/// observes, lets pilots with a new advisory decide, and integrates one
/// time step.
#[derive(Debug, Clone)]
pub struct EncounterSim {
    cfg: EncounterConfig,
    seed: u64,
    rng: ChaCha8Rng,
    state: WorldState,
    t_target: f64,
    pilots: [PilotRecord; 2],
    pending: Vec<PendingCommand>,
    pass: PassDetector,
    d_min: f64,
    end: Option<EndReason>,
    failure: Option<String>,
    trajectory: Option<Vec<TrajectoryPoint>>,
    observed: Option<Observed>,
    awaiting: Option<usize>,
    started: Instant,
}

impl EncounterSim {
    /// Generates the encounter from `seed` and prepares to run it.
    pub fn new(cfg: EncounterConfig, seed: u64) -> Result<Self, EncounterError> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate_encounter(&cfg.generator, &mut rng)?;
        Ok(Self::start(cfg, seed, rng, g.state, g.t_target))
    }

    /// Starts from a given state; `seed` drives the noise and the pilots.
    pub fn from_state(
        cfg: EncounterConfig,
        state: WorldState,
        seed: u64,
    ) -> Result<Self, EncounterError> {
        cfg.validate()?;
        if !state.aircraft.iter().all(AircraftState::is_valid) {
            return Err(EncounterError::InvalidConfig(
                "initial state is not finite or has a bad command".into(),
            ));
        }
        let t = straight_line_cpa_time(&state);
        Ok(Self::start(
            cfg,
            seed,
            ChaCha8Rng::seed_from_u64(seed),
            state,
            t,
        ))
    }

    fn start(
        cfg: EncounterConfig,
        seed: u64,
        rng: ChaCha8Rng,
        state: WorldState,
        t_target: f64,
    ) -> Self {
        let mut pass = PassDetector::default();
        pass.update(&state);
        let mut sim = EncounterSim {
            cfg,
            seed,
            rng,
            d_min: state.separation(),
            end: None,
            t_target,
            pilots: Default::default(),
            pending: Vec::new(),
            pass,
            failure: None,
            trajectory: None,
            observed: None,
            awaiting: None,
            started: Instant::now(),
            state,
        };
        if detect_nmac(&sim.state, &sim.cfg) {
            sim.end = Some(EndReason::Nmac);
        }
        sim
    }

    /// Records every state (and the advisories shown) from now on.
    pub fn record_trajectory(mut self) -> Self {
        let ras = self
            .observed
            .as_ref()
            .map_or([ResolutionAdvisory::None; 2], |o| o.ras);
        self.trajectory = Some(vec![TrajectoryPoint {
            state: self.state.clone(),
            ras,
        }]);
        self
    }

    pub fn config(&self) -> &EncounterConfig {
        &self.cfg
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn state(&self) -> &WorldState {
        &self.state
    }

    pub fn pilots(&self) -> &[PilotRecord; 2] {
        &self.pilots
    }

    pub fn is_finished(&self) -> bool {
        self.end.is_some()
    }

    /// The aircraft waiting for a horizontal advisory, if paused.
    pub fn awaiting_heading(&self) -> Option<usize> {
        self.awaiting
    }

    fn finish(&mut self, reason: EndReason) {
        self.end.get_or_insert(reason);
    }

    /// Phase 1: sensing and advisories. In horizontal mode this may leave
    /// the simulation paused for a heading decision.
    fn observe(&mut self) {
        if self.end.is_some() || self.observed.is_some() {
            return;
        }
        let g = &self.cfg.game;
        let s = &self.state;
        let pilot = [0, 1].map(|_| pilot_observe(s, g.pilot_noise, &mut self.rng));
        let tcas = [0, 1].map(|k| tcas_observe(s, k, g.tcas_noise, &mut self.rng));
        // Intents go out as soon as an advisory is issued, so the second
        // aircraft in index order already sees a first advisory issued in
        // the same step.
        let mut intents = s.intents;
        let mut views = [intents; 2];
        let mut ras = [ResolutionAdvisory::None; 2];
        for k in 0..2 {
            views[k] = intents;
            ras[k] = mini_tcas(&tcas[k], intents[k], intents[1 - k], &g.tcas);
            if !intents[k].is_issued() {
                if let Some(sense) = ras[k].sense() {
                    intents[k] = TcasIntent::Issued(sense);
                }
            }
        }
        if let Some(t) = self.trajectory.as_mut().and_then(|t| t.last_mut()) {
            t.ras = ras;
        }
        for k in 0..2 {
            let first = self.pilots[k].ra;
            if first.is_some() && ResolutionAdvisory::is_reversal_or_strengthening(first, ras[k]) {
                self.finish(EndReason::Discarded);
                return;
            }
        }
        let had = [0, 1].map(|k| self.pilots[k].ra.is_some());
        let new = [0, 1].map(|k| !had[k] && ras[k].is_some());
        if self.cfg.horizontal {
            // The second aircraft to be alerted gets the horizontal
            // advisory; with a simultaneous first alert that is aircraft
            // index 1.
            self.awaiting = match (had, new) {
                ([true, false], [false, true]) => Some(1),
                ([false, true], [true, false]) => Some(0),
                ([false, false], [true, true]) => Some(1),
                _ => None,
            };
        }
        self.observed = Some(Observed {
            pilot,
            tcas,
            ras,
            views,
            new,
        });
    }

    /// Phase 2: pilots with a new advisory decide; commands are latched.
    fn resolve(&mut self, heading_for_awaiting: Option<f64>) {
        let Some(obs) = self.observed.take() else {
            return;
        };
        let awaiting = self.awaiting.take();
        for k in 0..2 {
            if obs.new[k] {
                let p = &mut self.pilots[k];
                p.ra = obs.ras[k];
                p.t_ra = Some(self.state.time);
                if self.cfg.horizontal {
                    p.heading_rate = Some(if awaiting == Some(k) {
                        heading_for_awaiting.unwrap_or(0.0)
                    } else {
                        0.0
                    });
                }
            }
        }
        let plan = [self.pilots[0].heading_rate, self.pilots[1].heading_rate];
        let g = self.cfg.game;
        for k in 0..2 {
            if !obs.new[k] {
                continue;
            }
            let reference = WorldState {
                intents: obs.views[k],
                ..self.state.clone()
            };
            let view = PilotView {
                state: &reference,
                own: k,
                observation: &obs.pilot[k],
                advisory: obs.ras[k],
                tcas: &obs.tcas[k],
            };
            match pilot_decide(&g, view, plan, &mut self.rng) {
                Ok(d) => {
                    self.pilots[k].action = Some(d.action);
                    self.pilots[k].estimates = d
                        .decision
                        .estimates
                        .iter()
                        .map(|e| (e.candidate.as_real().unwrap_or(f64::NAN), e.estimate))
                        .collect();
                    self.pending.push(PendingCommand {
                        at: self.state.time + g.reaction_delay,
                        aircraft: k,
                        z_dot_c: d.action,
                        heading_rate: plan[k],
                    });
                }
                Err(e) => {
                    self.failure = Some(format!("pilot {} decision failed: {e}", k + 1));
                    self.finish(EndReason::Failed);
                    return;
                }
            }
        }
        for k in 0..2 {
            if obs.new[k] {
                self.state.intents[k] = obs.ras[k]
                    .sense()
                    .map_or(TcasIntent::None, TcasIntent::Issued);
            }
        }
        self.apply_due_commands();
        if let Some(t) = self.trajectory.as_mut().and_then(|t| t.last_mut()) {
            t.state = self.state.clone();
        }
    }

    /// Latched commands take effect on the state at their due time.
    fn apply_due_commands(&mut self) {
        let now = self.state.time;
        let (due, later): (Vec<_>, Vec<_>) = self.pending.iter().partition(|c| c.at <= now + 1e-9);
        self.pending = later;
        for c in due {
            let a = &mut self.state.aircraft[c.aircraft];
            a.z_dot_c = c.z_dot_c;
            if let Some(rate) = c.heading_rate {
                a.phi_c = roll_for_turn_rate(rate, a.f);
            }
        }
    }

    /// Phase 3: the world moves one step.
    fn integrate(&mut self) {
        if self.end.is_some() {
            return;
        }
        let g = self.cfg.game;
        self.state = world_step(&self.state, g.dt, &g.filters);
        self.apply_due_commands();
        self.d_min = self.d_min.min(self.state.separation());
        if let Some(t) = self.trajectory.as_mut() {
            t.push(TrajectoryPoint {
                state: self.state.clone(),
                ras: [ResolutionAdvisory::None; 2],
            });
        }
        if detect_nmac(&self.state, &self.cfg) {
            self.finish(EndReason::Nmac);
        } else if self.pass.update(&self.state) {
            self.finish(EndReason::Passed);
        } else if self.state.time >= self.cfg.max_duration - 1e-9 {
            self.finish(EndReason::MaxDuration);
        }
    }

    /// Advances one time step, asking `advisor` for a heading if needed.
    pub fn step(&mut self, advisor: &dyn HorizontalAdvisor) {
        self.observe();
        if self.end.is_some() {
            return;
        }
        let heading = match self.awaiting {
            Some(k) => match advisor.advise(self, k) {
                Ok(rate) => Some(rate),
                Err(e) => {
                    self.failure = Some(format!("horizontal advisory failed: {e}"));
                    self.finish(EndReason::Failed);
                    return;
                }
            },
            None => None,
        };
        self.resolve(heading);
        self.integrate();
    }

    /// Advances until the pause for a heading decision or the end. Returns
    /// whether it is paused.
    pub fn run_until_heading_decision(&mut self) -> bool {
        loop {
            if self.end.is_some() {
                return false;
            }
            self.observe();
            if self.end.is_some() {
                return false;
            }
            if self.awaiting.is_some() {
                return true;
            }
            self.resolve(None);
            self.integrate();
        }
    }

    /// Runs to the end.
    pub fn run(mut self, advisor: &dyn HorizontalAdvisor) -> OutcomeRecord {
        while self.end.is_none() {
            self.step(advisor);
        }
        self.outcome()
    }

    /// From a paused state, completes the encounter with heading rate
    /// `rate` for the waiting aircraft, using fresh randomness from `seed`.
    /// The original simulation is untouched.
    pub fn counterfactual(&self, rate: f64, seed: u64) -> Result<OutcomeRecord, EncounterError> {
        if self.awaiting.is_none() {
            return Err(EncounterError::NotAwaiting);
        }
        let mut sim = self.clone();
        sim.trajectory = None;
        sim.rng = ChaCha8Rng::seed_from_u64(seed);
        sim.started = Instant::now();
        sim.resolve(Some(rate));
        sim.integrate();
        Ok(sim.run(&MaintainHeading))
    }

    /// The record so far; complete once the simulation has finished.
    pub fn outcome(&self) -> OutcomeRecord {
        let nmac = self.end == Some(EndReason::Nmac);
        OutcomeRecord {
            seed: self.seed,
            t_target: self.t_target,
            d_min: self.d_min,
            nmac,
            welfare: if nmac { 0.0 } else { self.d_min },
            discarded: self.end == Some(EndReason::Discarded),
            failure: self.failure.clone(),
            end: self.end.unwrap_or(EndReason::MaxDuration),
            duration: self.state.time,
            pilots: self.pilots.clone(),
            trajectory: self.trajectory.clone(),
            wall_time: self.started.elapsed(),
        }
    }
}

/// Generates and runs one encounter. With `trajectory` the full state
/// history is kept.
pub fn run_encounter(
    cfg: &EncounterConfig,
    seed: u64,
    advisor: &dyn HorizontalAdvisor,
    trajectory: bool,
) -> Result<OutcomeRecord, EncounterError> {
    let sim = EncounterSim::new(*cfg, seed)?;
    let sim = if trajectory {
        sim.record_trajectory()
    } else {
        sim
    };
    Ok(sim.run(advisor))
}
