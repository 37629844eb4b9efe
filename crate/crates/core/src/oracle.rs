//! Exact expected utilities by enumeration, for checking the samplers.

use crate::error::NetError;
use crate::net::{GameNet, NodeIdx, NodeKind};
use crate::sample::PolicyTable;
use crate::strategy::StrategyError;
use crate::value::{Instantiation, Value};

/// Largest joint space the oracle will enumerate.
pub const MAX_ENUMERATION: usize = 1 << 22;

/// Exact `E[u | x_v, x_pa(v)]` for every move `x_v` of decision node `v`,
/// in the order of the node's space.
///
/// Every other decision node must have an explicit distribution with a
/// density in `others` (for a level-1 player, the opponents' level-0
/// distributions). All spaces must be discrete.
pub fn brute_force_best_response(
    net: &GameNet,
    v: NodeIdx,
    observed: &Instantiation,
    others: &PolicyTable,
) -> Result<Vec<(Value, f64)>, StrategyError> {
    let player = net
        .player_of(v)
        .ok_or_else(|| StrategyError::NotDecision(net.id(v).to_string()))?;
    let mut spaces: Vec<&[i64]> = Vec::with_capacity(net.len());
    for u in 0..net.len() {
        let vals = net.space(u).values().ok_or_else(|| {
            StrategyError::Unsupported(format!("`{}` has a continuous space", net.id(u)))
        })?;
        spaces.push(vals);
    }
    for &p in net.parents(v) {
        if observed.get(p).is_none() {
            return Err(NetError::MissingParentValue {
                node: net.id(v).to_string(),
                parent: net.id(p).to_string(),
            }
            .into());
        }
    }
    for u in 0..net.len() {
        if u != v && net.is_decision(u) && !others.get(u).is_some_and(|c| c.has_density()) {
            return Err(StrategyError::Unsupported(format!(
                "no exact distribution for `{}`",
                net.id(u)
            )));
        }
    }
    let free: Vec<NodeIdx> = (0..net.len())
        .filter(|&u| u != v && !net.parents(v).contains(&u))
        .collect();
    let size = free
        .iter()
        .try_fold(1usize, |acc, &u| acc.checked_mul(spaces[u].len()));
    if size.is_none_or(|s| s > MAX_ENUMERATION) {
        return Err(StrategyError::Unsupported(
            "joint space too large to enumerate".to_string(),
        ));
    }
    let size = size.expect("checked above");

    let mut out = Vec::with_capacity(spaces[v].len());
    for &xv in spaces[v] {
        let mut inst = net.empty_instantiation();
        for &p in net.parents(v) {
            inst.set(p, observed.get(p).expect("checked above").clone());
        }
        inst.set(v, Value::Discrete(xv));
        let mut counter = vec![0usize; free.len()];
        let mut mass = 0.0;
        let mut weighted = 0.0;
        for _ in 0..size {
            for (k, &u) in free.iter().enumerate() {
                inst.set(u, Value::Discrete(spaces[u][counter[k]]));
            }
            let p = joint_without(net, v, &inst, others)?;
            if p > 0.0 {
                mass += p;
                weighted += p * net.utility(player, &inst);
            }
            for k in (0..counter.len()).rev() {
                counter[k] += 1;
                if counter[k] < spaces[free[k]].len() {
                    break;
                }
                counter[k] = 0;
            }
        }
        if mass == 0.0 {
            return Err(StrategyError::ImpossibleEvidence);
        }
        out.push((Value::Discrete(xv), weighted / mass));
    }
    Ok(out)
}

/// Product of every node's conditional probability except `skip`'s.
fn joint_without(
    net: &GameNet,
    skip: NodeIdx,
    inst: &Instantiation,
    others: &PolicyTable,
) -> Result<f64, StrategyError> {
    let mut p = 1.0;
    for u in 0..net.len() {
        if u == skip {
            continue;
        }
        let x = inst.get(u).expect("full instantiation");
        let d = match net.kind(u) {
            NodeKind::Chance => net.eval_density(u, x, inst)?,
            NodeKind::Decision { .. } => {
                let pa = net.parent_values(u, inst)?;
                others
                    .get(u)
                    .and_then(|c| c.density(x, &pa))
                    .expect("checked by caller")
            }
        };
        p *= d;
        if p == 0.0 {
            break;
        }
    }
    Ok(p)
}
