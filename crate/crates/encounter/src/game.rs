//! The pilots' game: a semi net-form game over one decision instant.
//!
//! Nodes: `S` world state, `W_TCAS1`/`W_TCAS2` TCAS sensing, `T_1`/`T_2`
//! advisories, `W_1`/`W_2` pilot views, `A_1`/`A_2` chosen vertical rates,
//! `H` outcome (next state and lookahead miss distance).

use netgame::{
    normal_pdf, Cpd, Decision, GameNet, Instantiation, Limits, NodeIdx, Proposal, StrategyConfig,
    StrategyEngine, Value, VariableSpace, Variant,
};
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::EncounterError;
use crate::kinematics::{roll_for_turn_rate, world_step, FilterTimeConstants, PassDetector};
use crate::pilot::{
    pilot_observation_density, pilot_observe, pilot_utility, PilotObservation, UtilityWeights,
    OBS_Z_DOT,
};
use crate::state::{TcasIntent, WorldState, AIRCRAFT_DIM, WORLD_DIM};
use crate::tcas::{
    mini_tcas, tcas_observation_density, tcas_observe, ResolutionAdvisory, TcasObservation,
    TcasParams,
};

/// Bounds on the vertical-rate action, ft/s.
pub const ACTION_BOUND: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilotStrategy {
    pub level: u32,
    /// Candidate rates drawn per decision (M).
    pub move_samples: usize,
    /// Imagined worlds per decision (M').
    pub env_samples: usize,
    /// Spread of the level-0 response around the advisory, ft/s.
    pub level0_sigma: f64,
    pub variant: Variant,
}

impl Default for PilotStrategy {
    fn default() -> Self {
        PilotStrategy {
            level: 2,
            move_samples: 5,
            env_samples: 10,
            level0_sigma: 20.0,
            variant: Variant::LikelihoodWeighted,
        }
    }
}

/// Importance proposal over the world state and the own TCAS reading,
/// centred on the reference values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalParams {
    /// Per observable kinematic component: x, y, z, theta, theta_dot,
    /// z_dot, f.
    pub kinematic_sigma: [f64; 7],
    /// r_h, r_h_dot, h_dot, h, h_i.
    pub tcas_sigma: [f64; 5],
    /// Probability of keeping the reference intruder intent; otherwise all
    /// four intents are equally likely.
    pub intent_keep: f64,
}

impl Default for ProposalParams {
    fn default() -> Self {
        ProposalParams {
            kinematic_sigma: [5.0, 5.0, 2.0, 0.01, 0.0, 1.0, 5.0],
            tcas_sigma: [5.0, 2.0, 2.0, 2.0, 2.0],
            intent_keep: 0.8,
        }
    }
}

/// Everything the pilots' game depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    /// Multiplier on the pilot observation noise.
    pub pilot_noise: f64,
    /// Multiplier on the TCAS observation noise.
    pub tcas_noise: f64,
    pub tcas: TcasParams,
    pub utility: UtilityWeights,
    pub filters: FilterTimeConstants,
    /// Integration step, s.
    pub dt: f64,
    /// Time between a decision and the command taking effect, s.
    pub reaction_delay: f64,
    /// Horizon of the rollout behind `H`, s.
    pub lookahead: f64,
    pub strategy: PilotStrategy,
    pub proposal: ProposalParams,
    pub limits: Limits,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams {
            pilot_noise: 1.0,
            tcas_noise: 1.0,
            tcas: TcasParams::default(),
            utility: UtilityWeights::default(),
            filters: FilterTimeConstants::default(),
            dt: 1.0,
            reaction_delay: 5.0,
            lookahead: 60.0,
            strategy: PilotStrategy::default(),
            proposal: ProposalParams::default(),
            limits: Limits::default(),
        }
    }
}

impl GameParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = self.tcas.problems();
        for (name, v) in [
            ("pilot_noise", self.pilot_noise),
            ("tcas_noise", self.tcas_noise),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                out.push(format!("{name} must be non-negative, got {v}"));
            }
        }
        let f = &self.filters;
        if ![f.theta_dot, f.z_dot, f.f]
            .iter()
            .all(|t| t.is_finite() && *t >= self.dt)
        {
            out.push(format!(
                "filter time constants must be at least dt = {}",
                self.dt
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            out.push(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.reaction_delay.is_finite() && self.reaction_delay >= 0.0) {
            out.push(format!(
                "reaction_delay must be non-negative, got {}",
                self.reaction_delay
            ));
        }
        if !(self.lookahead.is_finite() && self.lookahead >= self.dt) {
            out.push(format!(
                "lookahead must be at least dt, got {}",
                self.lookahead
            ));
        }
        let s = &self.strategy;
        if s.move_samples == 0 || s.env_samples == 0 {
            out.push("move_samples and env_samples must be at least 1".to_string());
        }
        if !(s.level0_sigma.is_finite() && s.level0_sigma > 0.0) {
            out.push(format!(
                "level0_sigma must be positive, got {}",
                s.level0_sigma
            ));
        }
        let u = &self.utility;
        if !(u.delta > 0.0) || ![u.alpha1, u.alpha2, u.alpha3].iter().all(|a| a.is_finite()) {
            out.push("utility weights must be finite with delta > 0".to_string());
        }
        let q = self.proposal.intent_keep;
        if !(0.0..=1.0).contains(&q) {
            out.push(format!("intent_keep must lie in [0, 1], got {q}"));
        }
        if self
            .proposal
            .kinematic_sigma
            .iter()
            .chain(&self.proposal.tcas_sigma)
            .any(|s| !(s.is_finite() && *s >= 0.0))
        {
            out.push("proposal spreads must be non-negative".to_string());
        }
        out
    }

    fn effective_proposal(&self) -> ProposalParams {
        let mut p = self.proposal;
        // With exact observations the imagined state must match them exactly.
        if self.pilot_noise == 0.0 {
            p.kinematic_sigma = [0.0; 7];
        }
        if self.tcas_noise == 0.0 {
            p.tcas_sigma = [0.0; 5];
        }
        p
    }
}

/// Node indices of the encounter net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeIds {
    pub s: NodeIdx,
    pub w_tcas: [NodeIdx; 2],
    pub t: [NodeIdx; 2],
    pub w: [NodeIdx; 2],
    pub a: [NodeIdx; 2],
    pub h: NodeIdx,
}

impl NodeIds {
    fn of(net: &GameNet) -> Self {
        let ix = |id: &str| net.index_of(id).expect("encounter node");
        NodeIds {
            s: ix("S"),
            w_tcas: [ix("W_TCAS1"), ix("W_TCAS2")],
            t: [ix("T_1"), ix("T_2")],
            w: [ix("W_1"), ix("W_2")],
            a: [ix("A_1"), ix("A_2")],
            h: ix("H"),
        }
    }
}

pub struct EncounterNet {
    pub net: GameNet,
    pub ids: NodeIds,
}

fn world_space() -> VariableSpace {
    let lo = [
        -1e8,
        -1e8,
        -1e5,
        -1e3,
        -10.0,
        -1e3,
        1.0,
        -10.0,
        -ACTION_BOUND,
        1.0,
    ];
    let hi = [1e8, 1e8, 1e6, 1e3, 10.0, 1e3, 1e4, 10.0, ACTION_BOUND, 1e4];
    let mut lower = [lo, lo].concat();
    let mut upper = [hi, hi].concat();
    lower.extend([0.0, 0.0]);
    upper.extend([3.0, 3.0]);
    VariableSpace::boxed(lower, upper)
}

fn vec_of(v: &Value) -> &[f64] {
    v.as_vector().expect("vector value")
}

fn world_of(v: &Value) -> WorldState {
    WorldState::from_vector(vec_of(v))
}

/// Rolls the world forward under the given vertical-rate actions (and
/// optional heading rates) applied after the reaction delay. Returns the
/// state one step ahead and the smallest separation seen before the
/// aircraft pass or the horizon ends.
pub fn lookahead_rollout(
    s: &WorldState,
    actions: [f64; 2],
    heading: [Option<f64>; 2],
    p: &GameParams,
) -> (WorldState, f64) {
    let steps = (p.lookahead / p.dt).round().max(1.0) as usize;
    let delay_steps = (p.reaction_delay / p.dt).round() as usize;
    let mut w = s.clone();
    let mut d_min = w.separation();
    let mut next = None;
    let mut pass = PassDetector::default();
    pass.update(&w);
    for k in 0..steps {
        if k == delay_steps {
            for i in 0..2 {
                w.aircraft[i].z_dot_c = actions[i];
                if let Some(rate) = heading[i] {
                    w.aircraft[i].phi_c = roll_for_turn_rate(rate, w.aircraft[i].f);
                }
            }
        }
        w = world_step(&w, p.dt, &p.filters);
        d_min = d_min.min(w.separation());
        if next.is_none() {
            next = Some(w.clone());
        }
        if pass.update(&w) {
            break;
        }
    }
    (next.expect("at least one step"), d_min)
}

/// Builds the encounter net. `heading` fixes each aircraft's heading-rate
/// command in the outcome rollout (`None` keeps the current roll command).
pub fn build_encounter_net(
    p: &GameParams,
    heading: [Option<f64>; 2],
) -> Result<EncounterNet, EncounterError> {
    let problems = p.problems();
    if !problems.is_empty() {
        return Err(EncounterError::InvalidConfig(problems.join("; ")));
    }
    let p = *p;
    let obs_space = || {
        let lo = [-1e9, -1e9, -1e9, -1e4, -10.0, -1e4, -1e5];
        let hi = [1e9, 1e9, 1e9, 1e4, 10.0, 1e4, 1e5];
        VariableSpace::boxed([lo, lo].concat(), [hi, hi].concat())
    };
    let tcas_space = || {
        VariableSpace::boxed(
            vec![0.0, -1e6, -1e5, -1e8, -1e8],
            vec![1e9, 1e6, 1e5, 1e8, 1e8],
        )
    };
    let ra_space = || VariableSpace::discrete(0..6);
    let action_space = || VariableSpace::interval(-ACTION_BOUND, ACTION_BOUND);
    let mut h_lo = vec![f64::MIN; WORLD_DIM + 1];
    h_lo[WORLD_DIM] = 0.0;
    let h_hi = vec![f64::MAX; WORLD_DIM + 1];

    let space = world_space();
    let prior_space = space.clone();
    let s_cpd = Cpd::new(
        move |_: &[&Value], rng: &mut dyn RngCore| {
            let VariableSpace::Continuous { lower, upper } = &prior_space else {
                unreachable!()
            };
            let mut v: Vec<f64> = lower
                .iter()
                .zip(upper)
                .map(|(l, u)| rng.random_range(*l..*u))
                .collect();
            v[2 * AIRCRAFT_DIM] = v[2 * AIRCRAFT_DIM].round();
            v[2 * AIRCRAFT_DIM + 1] = v[2 * AIRCRAFT_DIM + 1].round();
            Value::Vector(v)
        },
        // Flat prior: the pilots' beliefs come from their observations.
        |_: &Value, _: &[&Value]| 1.0,
    );

    let w_cpd = || {
        Cpd::new(
            move |pa: &[&Value], rng: &mut dyn RngCore| {
                Value::Vector(pilot_observe(&world_of(pa[0]), p.pilot_noise, rng).to_vector())
            },
            move |x: &Value, pa: &[&Value]| {
                pilot_observation_density(vec_of(x), &world_of(pa[0]), p.pilot_noise)
            },
        )
    };
    let w_tcas_cpd = |own: usize| {
        Cpd::new(
            move |pa: &[&Value], rng: &mut dyn RngCore| {
                Value::Vector(
                    tcas_observe(&world_of(pa[0]), own, p.tcas_noise, rng)
                        .to_array()
                        .to_vec(),
                )
            },
            move |x: &Value, pa: &[&Value]| {
                tcas_observation_density(vec_of(x), &world_of(pa[0]), own, p.tcas_noise)
            },
        )
    };
    let t_cpd = |own: usize| {
        Cpd::deterministic(move |pa: &[&Value]| {
            let obs = TcasObservation::from_slice(vec_of(pa[0]));
            let s = world_of(pa[1]);
            Value::Discrete(mini_tcas(&obs, s.intents[own], s.intents[1 - own], &p.tcas).code())
        })
    };
    let h_cpd = Cpd::deterministic(move |pa: &[&Value]| {
        let s = world_of(pa[0]);
        let actions = [
            pa[1].as_real().expect("action"),
            pa[2].as_real().expect("action"),
        ];
        let (next, d_min) = lookahead_rollout(&s, actions, heading, &p);
        let mut v = next.to_vector();
        v.push(d_min);
        Value::Vector(v)
    });

    let mut b = GameNet::builder()
        .chance("S", space, &[], s_cpd)
        .chance("W_1", obs_space(), &["S"], w_cpd())
        .chance("W_2", obs_space(), &["S"], w_cpd())
        .chance("W_TCAS1", tcas_space(), &["S"], w_tcas_cpd(0))
        .chance("W_TCAS2", tcas_space(), &["S"], w_tcas_cpd(1))
        .chance("T_1", ra_space(), &["W_TCAS1", "S"], t_cpd(0))
        .chance("T_2", ra_space(), &["W_TCAS2", "S"], t_cpd(1))
        .decision("A_1", action_space(), &["W_1", "T_1"], 0)
        .decision("A_2", action_space(), &["W_2", "T_2"], 1)
        .chance(
            "H",
            VariableSpace::boxed(h_lo, h_hi),
            &["S", "A_1", "A_2"],
            h_cpd,
        );
    for (player, (w, t, a)) in [("W_1", "T_1", "A_1"), ("W_2", "T_2", "A_2")]
        .into_iter()
        .enumerate()
    {
        let weights = p.utility;
        b = b.utility(player, move |x| {
            let d_min = x.vector("H")[WORLD_DIM];
            let z_dot = x.vector(w)[7 * player + OBS_Z_DOT];
            let ra = ResolutionAdvisory::from_code(x.discrete(t)).unwrap_or_default();
            pilot_utility(&weights, d_min, z_dot, ra, x.real(a))
        });
    }
    let net = b.build()?;
    let ids = NodeIds::of(&net);
    Ok(EncounterNet { net, ids })
}

/// Level-0 response: a normal around the advisory rate (around the observed
/// own rate without one), truncated to the action bounds.
fn level0_cpd(own: usize, sigma: f64) -> Cpd {
    let centre = move |pa: &[&Value]| -> f64 {
        let ra =
            ResolutionAdvisory::from_code(pa[1].as_discrete().unwrap_or(0)).unwrap_or_default();
        ra.rate().unwrap_or_else(|| {
            vec_of(pa[0])[7 * own + OBS_Z_DOT].clamp(-ACTION_BOUND, ACTION_BOUND)
        })
    };
    let standard = Normal::new(0.0, 1.0).expect("standard normal");
    Cpd::new(
        move |pa: &[&Value], rng: &mut dyn RngCore| {
            let mu = centre(pa);
            loop {
                let e: f64 = rng.sample(StandardNormal);
                let x = mu + sigma * e;
                if (-ACTION_BOUND..=ACTION_BOUND).contains(&x) {
                    return Value::Real(x);
                }
            }
        },
        move |x: &Value, pa: &[&Value]| {
            let Some(x) = x.as_real() else { return 0.0 };
            if !(-ACTION_BOUND..=ACTION_BOUND).contains(&x) {
                return 0.0;
            }
            let mu = centre(pa);
            let mass = standard.cdf((ACTION_BOUND - mu) / sigma)
                - standard.cdf((-ACTION_BOUND - mu) / sigma);
            normal_pdf(x, mu, sigma) / mass
        },
    )
}

/// Strategy configuration of pilot `own`. Without an advisory the pilot
/// keeps the observed own vertical rate.
pub fn pilot_strategy_config(own: usize, s: &PilotStrategy) -> StrategyConfig {
    StrategyConfig::new(
        s.level,
        s.move_samples,
        s.env_samples,
        Cpd::uniform_interval(-ACTION_BOUND, ACTION_BOUND),
        level0_cpd(own, s.level0_sigma),
    )
    .with_default_move(move |pa| {
        if pa[1].as_discrete() == Some(ResolutionAdvisory::None.code()) {
            let z_dot = vec_of(pa[0])[7 * own + OBS_Z_DOT];
            Some(Value::Real(z_dot.clamp(-ACTION_BOUND, ACTION_BOUND)))
        } else {
            None
        }
    })
}

/// Proposal for the likelihood-weighted pilot: the world state is drawn
/// around the reference state and the own TCAS reading around the
/// reference reading.
pub struct EncounterProposal {
    ids: NodeIds,
    params: ProposalParams,
}

impl EncounterProposal {
    pub fn new(ids: NodeIds, params: ProposalParams) -> Self {
        EncounterProposal { ids, params }
    }

    fn own(&self, decision: NodeIdx) -> Option<usize> {
        self.ids.a.iter().position(|&a| a == decision)
    }

    fn reference<'r>(
        &self,
        node: NodeIdx,
        reference: &'r Instantiation,
    ) -> Result<&'r [f64], String> {
        reference
            .get(node)
            .and_then(Value::as_vector)
            .ok_or_else(|| "reference value is not assigned".to_string())
    }

    fn intent_probability(&self, reference: f64, x: f64) -> f64 {
        let q = self.params.intent_keep;
        (1.0 - q) / 4.0 + if x == reference { q } else { 0.0 }
    }
}

impl Proposal for EncounterProposal {
    fn covers(&self, _net: &GameNet, decision: NodeIdx, node: NodeIdx) -> bool {
        match self.own(decision) {
            Some(own) => node == self.ids.s || node == self.ids.w_tcas[own],
            None => false,
        }
    }

    fn propose(
        &self,
        _net: &GameNet,
        decision: NodeIdx,
        node: NodeIdx,
        reference: &Instantiation,
        _partial: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Value, String> {
        let own = self.own(decision).ok_or("not a pilot decision")?;
        let r = self.reference(node, reference)?;
        let mut gauss = |mean: f64, sigma: f64| {
            if sigma == 0.0 {
                mean
            } else {
                let e: f64 = rng.sample(StandardNormal);
                mean + sigma * e
            }
        };
        if node == self.ids.s {
            let mut v = r.to_vec();
            for k in 0..2 {
                for c in 0..7 {
                    v[AIRCRAFT_DIM * k + c] =
                        gauss(r[AIRCRAFT_DIM * k + c], self.params.kinematic_sigma[c]);
                }
            }
            let slot = 2 * AIRCRAFT_DIM + (1 - own);
            if !rng.random_bool(self.params.intent_keep) {
                v[slot] = TcasIntent::ALL[rng.random_range(0..4)].code();
            }
            Ok(Value::Vector(v))
        } else {
            Ok(Value::Vector(
                (0..5)
                    .map(|c| gauss(r[c], self.params.tcas_sigma[c]))
                    .collect(),
            ))
        }
    }

    fn density(
        &self,
        _net: &GameNet,
        decision: NodeIdx,
        node: NodeIdx,
        value: &Value,
        reference: &Instantiation,
        _partial: &Instantiation,
    ) -> Result<f64, String> {
        let own = self.own(decision).ok_or("not a pilot decision")?;
        let r = self.reference(node, reference)?;
        let x = value.as_vector().ok_or("expected a vector")?;
        if node == self.ids.s {
            let mut d = 1.0;
            for k in 0..2 {
                let base = AIRCRAFT_DIM * k;
                for c in 0..7 {
                    d *= normal_pdf(x[base + c], r[base + c], self.params.kinematic_sigma[c]);
                }
                for c in 7..AIRCRAFT_DIM {
                    d *= normal_pdf(x[base + c], r[base + c], 0.0);
                }
            }
            let own_slot = 2 * AIRCRAFT_DIM + own;
            let other_slot = 2 * AIRCRAFT_DIM + (1 - own);
            d *= normal_pdf(x[own_slot], r[own_slot], 0.0);
            d *= self.intent_probability(r[other_slot], x[other_slot]);
            Ok(d)
        } else {
            Ok((0..5)
                .map(|c| normal_pdf(x[c], r[c], self.params.tcas_sigma[c]))
                .product())
        }
    }
}

/// Outcome of one pilot's deliberation.
#[derive(Debug, Clone)]
pub struct PilotDecision {
    /// Chosen vertical rate, ft/s.
    pub action: f64,
    /// Whether the pilot deliberated (false for the no-advisory default).
    pub deliberated: bool,
    /// The engine's full record: candidates, estimates and environment.
    pub decision: Decision,
}

/// What one pilot knows when deciding.
#[derive(Debug, Clone, Copy)]
pub struct PilotView<'a> {
    /// Reference world state for the proposal.
    pub state: &'a WorldState,
    pub own: usize,
    pub observation: &'a PilotObservation,
    pub advisory: ResolutionAdvisory,
    pub tcas: &'a TcasObservation,
}

/// Runs pilot `view.own`'s level-K reasoning and returns the chosen rate.
pub fn pilot_decide(
    p: &GameParams,
    view: PilotView<'_>,
    heading: [Option<f64>; 2],
    rng: &mut dyn RngCore,
) -> Result<PilotDecision, EncounterError> {
    if view.own > 1 {
        return Err(EncounterError::InvalidConfig(format!(
            "aircraft index {} out of range",
            view.own
        )));
    }
    let en = build_encounter_net(p, heading)?;
    let ids = en.ids;
    let own = view.own;
    let proposal = EncounterProposal::new(ids, p.effective_proposal());
    let engine = StrategyEngine::new(&en.net, p.strategy.variant)?
        .with_config("A_1", pilot_strategy_config(0, &p.strategy))?
        .with_config("A_2", pilot_strategy_config(1, &p.strategy))?
        .with_proposal(&proposal)
        .with_limits(p.limits);
    let mut ctx = en.net.empty_instantiation();
    ctx.set(ids.s, Value::Vector(view.state.to_vector()));
    ctx.set(ids.w[own], Value::Vector(view.observation.to_vector()));
    ctx.set(
        ids.w_tcas[own],
        Value::Vector(view.tcas.to_array().to_vec()),
    );
    ctx.set(ids.t[own], Value::Discrete(view.advisory.code()));
    let decision = engine.decide(ids.a[own], &ctx, rng)?;
    let action = decision.chosen.as_real().expect("real action");
    Ok(PilotDecision {
        action,
        deliberated: decision.chosen_index.is_some(),
        decision,
    })
}
