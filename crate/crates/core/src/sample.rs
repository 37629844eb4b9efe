//! Forward sampling and density evaluation.

use std::collections::BTreeMap;

use rand::RngCore;

use crate::cpd::Cpd;
use crate::error::NetError;
use crate::net::{GameNet, NodeIdx, NodeKind};
use crate::value::{Instantiation, Value};

/// Supplies values for decision nodes during forward sampling.
pub trait DecisionSampler {
    /// Draws a value for decision node `node`. `inst` holds at least the
    /// node's parents.
    fn sample_decision(
        &self,
        net: &GameNet,
        node: NodeIdx,
        inst: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Value, NetError>;
}

/// Fixed per-node strategies given as CPDs.
#[derive(Debug, Clone, Default)]
pub struct PolicyTable {
    policies: BTreeMap<NodeIdx, Cpd>,
}

impl PolicyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, node: NodeIdx, cpd: Cpd) -> Self {
        self.policies.insert(node, cpd);
        self
    }

    pub fn insert(&mut self, node: NodeIdx, cpd: Cpd) {
        self.policies.insert(node, cpd);
    }

    pub fn get(&self, node: NodeIdx) -> Option<&Cpd> {
        self.policies.get(&node)
    }
}

impl DecisionSampler for PolicyTable {
    fn sample_decision(
        &self,
        net: &GameNet,
        node: NodeIdx,
        inst: &Instantiation,
        rng: &mut dyn RngCore,
    ) -> Result<Value, NetError> {
        let cpd = self
            .policies
            .get(&node)
            .ok_or_else(|| NetError::MissingStrategy(net.id(node).to_string()))?;
        let pa = net.parent_values(node, inst)?;
        Ok(cpd.sample(&pa, rng))
    }
}

impl GameNet {
    /// Draws one value for `node` from its CPD, or from `strategies` for a
    /// decision node. The result is checked against the node's space.
    pub fn sample_node(
        &self,
        node: NodeIdx,
        inst: &Instantiation,
        strategies: &dyn DecisionSampler,
        rng: &mut dyn RngCore,
    ) -> Result<Value, NetError> {
        let value = match self.kind(node) {
            NodeKind::Chance => {
                let cpd = self
                    .cpd(node)
                    .ok_or_else(|| NetError::MissingCpd(self.id(node).to_string()))?;
                let pa = self.parent_values(node, inst)?;
                cpd.sample(&pa, rng)
            }
            NodeKind::Decision { .. } => strategies.sample_decision(self, node, inst, rng)?,
        };
        self.check_in_space(node, &value)?;
        Ok(value)
    }

    /// Completes `fixed` by sampling every unassigned node in topological
    /// order. Assigned nodes keep their values.
    pub fn forward_sample(
        &self,
        fixed: &Instantiation,
        strategies: &dyn DecisionSampler,
        rng: &mut dyn RngCore,
    ) -> Result<Instantiation, NetError> {
        if fixed.len() != self.len() {
            return Err(NetError::SizeMismatch {
                expected: self.len(),
                got: fixed.len(),
            });
        }
        for (i, v) in fixed.assigned() {
            self.check_in_space(i, v)?;
        }
        let mut inst = fixed.clone();
        for &v in self.topo()? {
            if !inst.is_assigned(v) {
                let x = self.sample_node(v, &inst, strategies, rng)?;
                inst.set(v, x);
            }
        }
        Ok(inst)
    }

    /// Density (or mass) of `value` at chance node `node` given the parent
    /// values held in `parents`. Deterministic nodes give 1 or 0.
    pub fn eval_density(
        &self,
        node: NodeIdx,
        value: &Value,
        parents: &Instantiation,
    ) -> Result<f64, NetError> {
        let cpd = self
            .cpd(node)
            .ok_or_else(|| NetError::DensityUnavailable(self.id(node).to_string()))?;
        let pa = self.parent_values(node, parents)?;
        cpd.density(value, &pa)
            .ok_or_else(|| NetError::DensityUnavailable(self.id(node).to_string()))
    }

    /// [`GameNet::eval_density`] that also covers decision nodes whose
    /// strategy in `policies` has a density.
    pub fn eval_density_with(
        &self,
        node: NodeIdx,
        value: &Value,
        parents: &Instantiation,
        policies: &PolicyTable,
    ) -> Result<f64, NetError> {
        if !self.is_decision(node) {
            return self.eval_density(node, value, parents);
        }
        let cpd = policies
            .get(node)
            .ok_or_else(|| NetError::DensityUnavailable(self.id(node).to_string()))?;
        let pa = self.parent_values(node, parents)?;
        cpd.density(value, &pa)
            .ok_or_else(|| NetError::DensityUnavailable(self.id(node).to_string()))
    }
}
