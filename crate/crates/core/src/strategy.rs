//! Level-K strategies computed by sampling.
//!
//! Three estimators share one engine:
//!
//! * [`Variant::Relaxed`] draws fresh full-net samples for every candidate
//!   move, conditioning on the observed parents by rejection.
//! * [`Variant::DRelaxed`] draws one set of environment samples (everything
//!   that is not downstream of the decision) by rejection and reuses it for
//!   every candidate.
//! * [`Variant::LikelihoodWeighted`] clamps the observed parents instead of
//!   rejecting, weights each environment sample by the likelihood of the
//!   observation, and can replace the prior on some nodes with a
//!   [`Proposal`].
//!
//! Opponents are modelled one level down with their own configuration; level
//! 0 draws from the level-0 distribution.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::RngCore;

use crate::cpd::Cpd;
use crate::error::NetError;
use crate::net::{GameNet, NodeIdx, NodeKind};
use crate::value::{Instantiation, Value};
use thiserror::Error;

pub type DefaultMoveFn = dyn Fn(&[&Value]) -> Option<Value> + Send + Sync;

/// How one decision node's player reasons.
#[derive(Clone)]
pub struct StrategyConfig {
    /// Reasoning depth K.
    pub level: u32,
    /// Candidate moves drawn from the satisficing distribution (M).
    pub move_samples: usize,
    /// Environment samples per estimate (M').
    pub env_samples: usize,
    pub satisficing: Cpd,
    pub level0: Cpd,
    /// A move the player makes without deliberating, when this returns
    /// `Some` for the observed parents. Applies at every level.
    pub default_move: Option<Arc<DefaultMoveFn>>,
}

impl std::fmt::Debug for StrategyConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StrategyConfig")
            .field("level", &self.level)
            .field("move_samples", &self.move_samples)
            .field("env_samples", &self.env_samples)
            .field("default_move", &self.default_move.is_some())
            .finish()
    }
}

impl StrategyConfig {
    pub fn new(
        level: u32,
        move_samples: usize,
        env_samples: usize,
        satisficing: Cpd,
        level0: Cpd,
    ) -> Self {
        StrategyConfig {
            level,
            move_samples,
            env_samples,
            satisficing,
            level0,
            default_move: None,
        }
    }

    pub fn with_default_move<F>(mut self, f: F) -> Self
    where
        F: Fn(&[&Value]) -> Option<Value> + Send + Sync + 'static,
    {
        self.default_move = Some(Arc::new(f));
        self
    }

    fn check(&self, node: &str) -> Result<(), StrategyError> {
        if self.move_samples == 0 || self.env_samples == 0 {
            return Err(StrategyError::InvalidConfig {
                node: node.to_string(),
                reason: "move_samples and env_samples must be at least 1".to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Relaxed,
    DRelaxed,
    LikelihoodWeighted,
}

/// Importance proposal replacing the prior on some environment nodes in the
/// likelihood-weighted variant.
///
/// `reference` is the instantiation the deciding player reasons from (for
/// the top-level call, whatever the caller passed as context; for nested
/// calls, the imagined world sampled so far). `partial` is the environment
/// sample under construction.
pub trait Proposal: Send + Sync {
    /// Whether `node` is proposed while `decision` is being evaluated.
    fn covers(&self, net: &GameNet, decision: NodeIdx, node: NodeIdx) -> bool;

    fn propose(
        &self,
        net: &GameNet,
        decision: NodeIdx,
        node: NodeIdx,
        reference: &Instantiation,
        partial: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Value, String>;

    fn density(
        &self,
        net: &GameNet,
        decision: NodeIdx,
        node: NodeIdx,
        value: &Value,
        reference: &Instantiation,
        partial: &Instantiation,
    ) -> Result<f64, String>;
}

/// Attempt caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Total draws allowed while collecting rejection samples for one
    /// estimate.
    pub rejection_cap: u64,
    /// Zero-weight redraws allowed, as a multiple of the sample count.
    pub redraw_factor: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            rejection_cap: 1_000_000,
            redraw_factor: 100,
        }
    }
}

#[derive(Debug, Default)]
struct Counters {
    evaluations: AtomicU64,
    level0_draws: AtomicU64,
    environment_draws: AtomicU64,
    rejected_draws: AtomicU64,
    zero_weight_draws: AtomicU64,
}

/// Read-only view of the engine's instrumentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CounterSnapshot {
    /// Level >= 1 strategy computations, nested ones included.
    pub evaluations: u64,
    pub level0_draws: u64,
    /// Environment draws attempted, accepted or not.
    pub environment_draws: u64,
    pub rejected_draws: u64,
    pub zero_weight_draws: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilityEstimate {
    pub candidate: Value,
    pub estimate: f64,
    pub sample_count: usize,
    /// Sum of likelihood weights; `None` for the unweighted variants.
    pub weights_sum: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    pub weight: f64,
    pub values: Instantiation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub chosen: Value,
    /// Position of `chosen` in `estimates`; `None` when no deliberation took
    /// place (level 0 or a default move).
    pub chosen_index: Option<usize>,
    /// One entry per distinct candidate, in draw order.
    pub estimates: Vec<UtilityEstimate>,
    /// Shared environment samples (d-relaxed and likelihood-weighted only).
    pub environment: Vec<WeightedSample>,
}

#[derive(Debug, Clone, Error)]
pub enum StrategyError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("`{0}` is not a decision node")]
    NotDecision(String),
    #[error("no strategy configuration for `{0}`")]
    MissingConfig(String),
    #[error("bad configuration for `{node}`: {reason}")]
    InvalidConfig { node: String, reason: String },
    #[error("satisficing draw {value} is outside the space of `{node}`")]
    SatisficingOutOfSpace { node: String, value: String },
    #[error("`{node}` observes continuous `{parent}`; rejection cannot match it, use the likelihood-weighted variant")]
    ContinuousEvidence { node: String, parent: String },
    #[error("no environment sample for `{node}` matched the observation after {attempts} draws; use the likelihood-weighted variant")]
    RejectionExhausted { node: String, attempts: u64 },
    #[error("only {achieved} of {required} environment samples for `{node}` had nonzero weight after {attempts} draws")]
    InsufficientWeight {
        node: String,
        achieved: usize,
        required: usize,
        attempts: usize,
    },
    #[error("proposal for `{target}` has zero density where the prior does not (while deciding `{node}`)")]
    SupportViolation { node: String, target: String },
    #[error("proposal failed on `{target}`: {message}")]
    Proposal { target: String, message: String },
    #[error("estimate for candidate {candidate} at `{node}` is not finite")]
    NonFiniteEstimate { node: String, candidate: String },
    #[error("recursion reached level {level} at `{node}`, past its budget")]
    RecursionGuard { node: String, level: u32 },
    #[error("oracle cannot handle this net: {0}")]
    Unsupported(String),
    #[error("observation has probability zero")]
    ImpossibleEvidence,
}

/// Per-decision-node sampling orders, computed once.
struct NodePlan {
    parent_mask: Vec<bool>,
    /// Descendants in topological order.
    successors: Vec<NodeIdx>,
    /// Non-descendants, observed parents first where possible.
    environment: Vec<NodeIdx>,
    /// Every node but the decision itself, observed parents first.
    full: Vec<NodeIdx>,
}

pub struct StrategyEngine<'a> {
    net: &'a GameNet,
    variant: Variant,
    configs: Vec<Option<StrategyConfig>>,
    proposal: Option<&'a dyn Proposal>,
    limits: Limits,
    plans: Vec<Option<NodePlan>>,
    counters: Counters,
}

impl<'a> StrategyEngine<'a> {
    /// An engine for a valid net. Configurations are added per decision
    /// node with [`StrategyEngine::with_config`].
    pub fn new(net: &'a GameNet, variant: Variant) -> Result<Self, StrategyError> {
        let diags = net.validate();
        if !diags.is_empty() {
            return Err(NetError::Invalid(diags).into());
        }
        let topo = net.topological_order()?;
        let mut plans = Vec::with_capacity(net.len());
        for v in 0..net.len() {
            if !net.is_decision(v) {
                plans.push(None);
                continue;
            }
            let succ = net.descendant_mask(v);
            let mut parent_mask = vec![false; net.len()];
            for &p in net.parents(v) {
                parent_mask[p] = true;
            }
            let rank = |u: NodeIdx| -> u8 {
                if parent_mask[u] {
                    0
                } else if net.is_decision(u) {
                    2
                } else {
                    1
                }
            };
            let env_mask: Vec<bool> = (0..net.len()).map(|u| u != v && !succ[u]).collect();
            let full_mask: Vec<bool> = (0..net.len()).map(|u| u != v).collect();
            plans.push(Some(NodePlan {
                successors: topo.iter().copied().filter(|&u| succ[u]).collect(),
                environment: net.ranked_order(&env_mask, rank),
                full: net.ranked_order(&full_mask, rank),
                parent_mask,
            }));
        }
        Ok(StrategyEngine {
            net,
            variant,
            configs: vec![None; net.len()],
            proposal: None,
            limits: Limits::default(),
            plans,
            counters: Counters::default(),
        })
    }

    pub fn with_config(mut self, node: &str, cfg: StrategyConfig) -> Result<Self, StrategyError> {
        self.set_config(node, cfg)?;
        Ok(self)
    }

    pub fn set_config(&mut self, node: &str, cfg: StrategyConfig) -> Result<(), StrategyError> {
        let idx = self.net.index_of(node)?;
        if !self.net.is_decision(idx) {
            return Err(StrategyError::NotDecision(node.to_string()));
        }
        cfg.check(node)?;
        self.configs[idx] = Some(cfg);
        Ok(())
    }

    pub fn with_proposal(mut self, proposal: &'a dyn Proposal) -> Self {
        self.proposal = Some(proposal);
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn net(&self) -> &'a GameNet {
        self.net
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn config(&self, node: NodeIdx) -> Result<&StrategyConfig, StrategyError> {
        self.configs
            .get(node)
            .and_then(Option::as_ref)
            .ok_or_else(|| StrategyError::MissingConfig(self.net.id(node).to_string()))
    }

    pub fn counters(&self) -> CounterSnapshot {
        CounterSnapshot {
            evaluations: self.counters.evaluations.load(Ordering::Relaxed),
            level0_draws: self.counters.level0_draws.load(Ordering::Relaxed),
            environment_draws: self.counters.environment_draws.load(Ordering::Relaxed),
            rejected_draws: self.counters.rejected_draws.load(Ordering::Relaxed),
            zero_weight_draws: self.counters.zero_weight_draws.load(Ordering::Relaxed),
        }
    }

    pub fn reset_counters(&self) {
        for c in [
            &self.counters.evaluations,
            &self.counters.level0_draws,
            &self.counters.environment_draws,
            &self.counters.rejected_draws,
            &self.counters.zero_weight_draws,
        ] {
            c.store(0, Ordering::Relaxed);
        }
    }

    /// The player's move at its configured level. `context` must assign
    /// the node's parents; other assigned values serve as the proposal's
    /// reference.
    pub fn decide(
        &self,
        node: NodeIdx,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Decision, StrategyError> {
        let level = self.config(node)?.level;
        self.decide_at_level(node, level, context, rng)
    }

    /// Like [`StrategyEngine::decide`] at an explicit level.
    pub fn decide_at_level(
        &self,
        node: NodeIdx,
        level: u32,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Decision, StrategyError> {
        if let Some(v) = self.shortcut(node, level, context, rng)? {
            return Ok(Decision {
                chosen: v,
                chosen_index: None,
                estimates: Vec::new(),
                environment: Vec::new(),
            });
        }
        self.deliberate(node, level, level, context, rng)
    }

    /// One draw from the node's level-`level` strategy.
    pub fn sample_move(
        &self,
        node: NodeIdx,
        level: u32,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Value, StrategyError> {
        self.sample_move_within(node, level, level, context, rng)
    }

    fn sample_move_within(
        &self,
        node: NodeIdx,
        level: u32,
        budget: u32,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Value, StrategyError> {
        match self.shortcut(node, level, context, rng)? {
            Some(v) => Ok(v),
            None => Ok(self.deliberate(node, level, budget, context, rng)?.chosen),
        }
    }

    /// Handles default moves and level 0, which need no deliberation.
    fn shortcut(
        &self,
        node: NodeIdx,
        level: u32,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Value>, StrategyError> {
        if !self.net.is_decision(node) {
            return Err(StrategyError::NotDecision(self.net.id(node).to_string()));
        }
        let cfg = self.config(node)?;
        let pa = self.net.parent_values(node, context)?;
        if let Some(default) = &cfg.default_move {
            if let Some(v) = default(&pa) {
                self.net.check_in_space(node, &v)?;
                return Ok(Some(v));
            }
        }
        if level == 0 {
            self.counters.level0_draws.fetch_add(1, Ordering::Relaxed);
            let v = cfg.level0.sample(&pa, rng);
            self.net.check_in_space(node, &v)?;
            return Ok(Some(v));
        }
        Ok(None)
    }

    fn deliberate(
        &self,
        node: NodeIdx,
        level: u32,
        budget: u32,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Decision, StrategyError> {
        if level == 0 || level > budget {
            return Err(StrategyError::RecursionGuard {
                node: self.net.id(node).to_string(),
                level,
            });
        }
        self.counters.evaluations.fetch_add(1, Ordering::Relaxed);
        let cfg = self.config(node)?;
        let candidates = self.candidates(node, cfg, context, rng)?;
        let m_prime = cfg.env_samples;
        let (estimates, environment) = match self.variant {
            Variant::Relaxed => {
                let mut est = Vec::with_capacity(candidates.len());
                for c in &candidates {
                    est.push(self.relaxed_inner(node, level, c, m_prime, context, rng)?);
                }
                (est, Vec::new())
            }
            Variant::DRelaxed => {
                let env = self.rejection_environment(node, level, m_prime, context, rng)?;
                (self.score(node, level, &candidates, &env, false, rng)?, env)
            }
            Variant::LikelihoodWeighted => {
                let env = self.weighted_environment(node, level, m_prime, context, rng)?;
                (self.score(node, level, &candidates, &env, true, rng)?, env)
            }
        };
        let best = argmax(&estimates);
        Ok(Decision {
            chosen: estimates[best].candidate.clone(),
            chosen_index: Some(best),
            estimates,
            environment,
        })
    }

    /// Scores a given candidate list with the engine's variant, without the
    /// argmax: one estimate per candidate, in order.
    pub fn evaluate(
        &self,
        node: NodeIdx,
        level: u32,
        candidates: &[Value],
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<UtilityEstimate>, StrategyError> {
        if level == 0 {
            return Err(StrategyError::RecursionGuard {
                node: self.net.id(node).to_string(),
                level,
            });
        }
        let m_prime = self.config(node)?.env_samples;
        match self.variant {
            Variant::Relaxed => candidates
                .iter()
                .map(|c| self.relaxed_inner(node, level, c, m_prime, context, rng))
                .collect(),
            Variant::DRelaxed => {
                let env = self.rejection_environment(node, level, m_prime, context, rng)?;
                self.score(node, level, candidates, &env, false, rng)
            }
            Variant::LikelihoodWeighted => {
                let env = self.weighted_environment(node, level, m_prime, context, rng)?;
                self.score(node, level, candidates, &env, true, rng)
            }
        }
    }

    /// Draws `move_samples` candidates and removes duplicates, keeping the
    /// first occurrence.
    fn candidates(
        &self,
        node: NodeIdx,
        cfg: &StrategyConfig,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<Value>, StrategyError> {
        let pa = self.net.parent_values(node, context)?;
        let mut out: Vec<Value> = Vec::with_capacity(cfg.move_samples);
        for _ in 0..cfg.move_samples {
            let v = cfg.satisficing.sample(&pa, rng);
            if !self.net.space(node).contains(&v) {
                return Err(StrategyError::SatisficingOutOfSpace {
                    node: self.net.id(node).to_string(),
                    value: v.to_string(),
                });
            }
            if !out.contains(&v) {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// One plain-relaxed utility estimate for a fixed candidate: the mean
    /// utility over `env_samples` fresh full samples with the decision
    /// clamped and its parents matched to `context`.
    pub fn relaxed_estimate(
        &self,
        node: NodeIdx,
        level: u32,
        candidate: &Value,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<UtilityEstimate, StrategyError> {
        let m_prime = self.config(node)?.env_samples;
        self.relaxed_inner(node, level, candidate, m_prime, context, rng)
    }

    fn relaxed_inner(
        &self,
        node: NodeIdx,
        level: u32,
        candidate: &Value,
        m_prime: usize,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<UtilityEstimate, StrategyError> {
        let plan = self.plan(node)?;
        let player = self.net.player_of(node).expect("decision node");
        self.require_discrete_parents(node)?;
        let mut total = 0.0;
        let mut attempts = 0u64;
        for _ in 0..m_prime {
            let inst = loop {
                attempts += 1;
                if attempts > self.limits.rejection_cap {
                    return Err(StrategyError::RejectionExhausted {
                        node: self.net.id(node).to_string(),
                        attempts: attempts - 1,
                    });
                }
                let mut inst = self.net.empty_instantiation();
                inst.set(node, candidate.clone());
                if self.fill_matching(
                    level,
                    &plan.full,
                    &plan.parent_mask,
                    context,
                    &mut inst,
                    rng,
                )? {
                    break inst;
                }
            };
            total += self.net.utility(player, &inst);
        }
        let estimate = total / m_prime as f64;
        self.finite(node, candidate, estimate)?;
        Ok(UtilityEstimate {
            candidate: candidate.clone(),
            estimate,
            sample_count: m_prime,
            weights_sum: None,
        })
    }

    /// Samples `order` into `inst`, giving up as soon as an observed parent
    /// disagrees with `context`. Returns whether the sample was accepted.
    fn fill_matching(
        &self,
        level: u32,
        order: &[NodeIdx],
        parent_mask: &[bool],
        context: &Instantiation,
        inst: &mut Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<bool, StrategyError> {
        self.counters
            .environment_draws
            .fetch_add(1, Ordering::Relaxed);
        for &u in order {
            let x = self.draw(u, level, inst, rng)?;
            if parent_mask[u] && context.get(u) != Some(&x) {
                self.counters.rejected_draws.fetch_add(1, Ordering::Relaxed);
                return Ok(false);
            }
            inst.set(u, x);
        }
        Ok(true)
    }

    /// Draws one node inside an imagined world: chance nodes from their
    /// CPD, other players' decisions one level down.
    fn draw(
        &self,
        u: NodeIdx,
        level: u32,
        inst: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Value, StrategyError> {
        match self.net.kind(u) {
            NodeKind::Chance => {
                let cpd = self
                    .net
                    .cpd(u)
                    .ok_or_else(|| NetError::MissingCpd(self.net.id(u).to_string()))?;
                let pa = self.net.parent_values(u, inst)?;
                let v = cpd.sample(&pa, rng);
                self.net.check_in_space(u, &v)?;
                Ok(v)
            }
            NodeKind::Decision { .. } => {
                self.sample_move_within(u, level - 1, level - 1, inst, rng)
            }
        }
    }

    fn require_discrete_parents(&self, node: NodeIdx) -> Result<(), StrategyError> {
        for &p in self.net.parents(node) {
            if !self.net.space(p).is_discrete() {
                return Err(StrategyError::ContinuousEvidence {
                    node: self.net.id(node).to_string(),
                    parent: self.net.id(p).to_string(),
                });
            }
        }
        Ok(())
    }

    fn plan(&self, node: NodeIdx) -> Result<&NodePlan, StrategyError> {
        self.plans[node]
            .as_ref()
            .ok_or_else(|| StrategyError::NotDecision(self.net.id(node).to_string()))
    }

    fn rejection_environment(
        &self,
        node: NodeIdx,
        level: u32,
        count: usize,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<WeightedSample>, StrategyError> {
        let plan = self.plan(node)?;
        self.require_discrete_parents(node)?;
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0u64;
        while out.len() < count {
            attempts += 1;
            if attempts > self.limits.rejection_cap {
                return Err(StrategyError::RejectionExhausted {
                    node: self.net.id(node).to_string(),
                    attempts: attempts - 1,
                });
            }
            let mut inst = self.net.empty_instantiation();
            if self.fill_matching(
                level,
                &plan.environment,
                &plan.parent_mask,
                context,
                &mut inst,
                rng,
            )? {
                out.push(WeightedSample {
                    weight: 1.0,
                    values: inst,
                });
            }
        }
        Ok(out)
    }

    fn weighted_environment(
        &self,
        node: NodeIdx,
        level: u32,
        count: usize,
        context: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<WeightedSample>, StrategyError> {
        let plan = self.plan(node)?;
        let cap = self.limits.redraw_factor.saturating_mul(count).max(count);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while out.len() < count {
            if attempts >= cap {
                return Err(StrategyError::InsufficientWeight {
                    node: self.net.id(node).to_string(),
                    achieved: out.len(),
                    required: count,
                    attempts,
                });
            }
            attempts += 1;
            self.counters
                .environment_draws
                .fetch_add(1, Ordering::Relaxed);
            let mut inst = self.net.empty_instantiation();
            let mut weight = 1.0;
            for &u in &plan.environment {
                let x =
                    if plan.parent_mask[u] {
                        let x = context.get(u).cloned().ok_or_else(|| {
                            NetError::MissingParentValue {
                                node: self.net.id(node).to_string(),
                                parent: self.net.id(u).to_string(),
                            }
                        })?;
                        weight *= self.evidence_density(u, level, &x, &inst)?;
                        x
                    } else if let Some(p) = self.proposal.filter(|p| p.covers(self.net, node, u)) {
                        let (x, ratio) = self.propose(p, node, u, context, &inst, rng)?;
                        weight *= ratio;
                        x
                    } else {
                        self.draw(u, level, &inst, rng)?
                    };
                inst.set(u, x);
                if weight == 0.0 {
                    break;
                }
            }
            if weight > 0.0 && weight.is_finite() {
                out.push(WeightedSample {
                    weight,
                    values: inst,
                });
            } else {
                self.counters
                    .zero_weight_draws
                    .fetch_add(1, Ordering::Relaxed);
            }
        }
        Ok(out)
    }

    /// Draws `u` from the proposal and returns it with the importance ratio
    /// prior / proposal.
    fn propose(
        &self,
        p: &dyn Proposal,
        node: NodeIdx,
        u: NodeIdx,
        reference: &Instantiation,
        partial: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<(Value, f64), StrategyError> {
        let target = || self.net.id(u).to_string();
        if self.net.is_decision(u) {
            return Err(StrategyError::Proposal {
                target: target(),
                message: "decision nodes cannot be proposed".into(),
            });
        }
        let x = p
            .propose(self.net, node, u, reference, partial, rng)
            .map_err(|message| StrategyError::Proposal {
                target: target(),
                message,
            })?;
        if !self.net.space(u).contains(&x) {
            // Outside the space the prior is zero.
            return Ok((x, 0.0));
        }
        let prior = self.net.eval_density(u, &x, partial)?;
        if prior == 0.0 {
            return Ok((x, 0.0));
        }
        let q = p
            .density(self.net, node, u, &x, reference, partial)
            .map_err(|message| StrategyError::Proposal {
                target: target(),
                message,
            })?;
        if q <= 0.0 {
            return Err(StrategyError::SupportViolation {
                node: self.net.id(node).to_string(),
                target: target(),
            });
        }
        Ok((x, prior / q))
    }

    /// Likelihood of an observed parent value given its own parents.
    fn evidence_density(
        &self,
        u: NodeIdx,
        level: u32,
        x: &Value,
        inst: &Instantiation,
    ) -> Result<f64, StrategyError> {
        match self.net.kind(u) {
            NodeKind::Chance => Ok(self.net.eval_density(u, x, inst)?),
            NodeKind::Decision { .. } => {
                let cfg = self.config(u)?;
                let pa = self.net.parent_values(u, inst)?;
                if let Some(default) = &cfg.default_move {
                    if let Some(d) = default(&pa) {
                        return Ok(if d == *x { 1.0 } else { 0.0 });
                    }
                }
                if level - 1 == 0 {
                    if let Some(d) = cfg.level0.density(x, &pa) {
                        return Ok(d);
                    }
                }
                Err(NetError::DensityUnavailable(self.net.id(u).to_string()).into())
            }
        }
    }

    /// Per-candidate scores over a shared environment: only the decision's
    /// descendants are sampled per candidate.
    fn score(
        &self,
        node: NodeIdx,
        level: u32,
        candidates: &[Value],
        env: &[WeightedSample],
        weighted: bool,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<UtilityEstimate>, StrategyError> {
        let plan = self.plan(node)?;
        let player = self.net.player_of(node).expect("decision node");
        let weights_sum: f64 = env.iter().map(|s| s.weight).sum();
        let mut out = Vec::with_capacity(candidates.len());
        for c in candidates {
            let mut total = 0.0;
            for sample in env {
                let mut inst = sample.values.clone();
                inst.set(node, c.clone());
                for &u in &plan.successors {
                    let x = self.draw(u, level, &inst, rng)?;
                    inst.set(u, x);
                }
                total += sample.weight * self.net.utility(player, &inst);
            }
            let estimate = total / env.len() as f64;
            self.finite(node, c, estimate)?;
            out.push(UtilityEstimate {
                candidate: c.clone(),
                estimate,
                sample_count: env.len(),
                weights_sum: weighted.then_some(weights_sum),
            });
        }
        Ok(out)
    }

    fn finite(&self, node: NodeIdx, candidate: &Value, estimate: f64) -> Result<(), StrategyError> {
        if estimate.is_finite() {
            Ok(())
        } else {
            Err(StrategyError::NonFiniteEstimate {
                node: self.net.id(node).to_string(),
                candidate: candidate.to_string(),
            })
        }
    }
}

/// Relative gap below which two estimates count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Index of the best estimate. Estimates within [`TIE_TOLERANCE`] of the
/// current best are ties, and ties go to the lowest index; the tolerance
/// keeps rounding noise from deciding between equal estimates.
pub fn argmax(estimates: &[UtilityEstimate]) -> usize {
    let mut best = 0;
    for (j, e) in estimates.iter().enumerate().skip(1) {
        let b = estimates[best].estimate;
        let tol = TIE_TOLERANCE * b.abs().max(e.estimate.abs());
        if e.estimate > b + tol {
            best = j;
        }
    }
    best
}

/// Number of strategy computations needed to find every player's level-K
/// strategy once when all `players` share level `level`: each level-k
/// computation needs the other players' level-(k-1) strategies.
pub fn count_strategy_evaluations(players: u64, level: u32) -> u64 {
    (0..level)
        .map(|j| players.saturating_sub(1).pow(j) * players)
        .sum()
}
