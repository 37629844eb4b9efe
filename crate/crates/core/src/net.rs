//! The game net: graph, node partition, spaces, CPDs and utilities.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::cpd::Cpd;
use crate::error::{Diagnostic, NetError, Rule};
use crate::value::{Instantiation, Value, VariableSpace};

/// Index of a node. Indices follow the lexicographic order of node ids, so
/// "lowest index" and "lexicographically first" coincide.
pub type NodeIdx = usize;

pub type UtilityFn = dyn Fn(&Assignment<'_>) -> f64 + Send + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Chance,
    Decision { player: usize },
}

/// Read access to a full instantiation by node id, handed to utilities.
pub struct Assignment<'a> {
    net: &'a GameNet,
    inst: &'a Instantiation,
}

impl<'a> Assignment<'a> {
    pub fn new(net: &'a GameNet, inst: &'a Instantiation) -> Self {
        Assignment { net, inst }
    }

    /// Value of node `id`.
    ///
    /// # Panics
    /// If `id` is not a node or is unassigned. Utilities always see full
    /// instantiations, so either case is a bug in the utility.
    pub fn value(&self, id: &str) -> &'a Value {
        let idx = self.net.index_of(id).unwrap_or_else(|e| panic!("{e}"));
        self.inst
            .get(idx)
            .unwrap_or_else(|| panic!("node `{id}` is unassigned"))
    }

    pub fn discrete(&self, id: &str) -> i64 {
        self.value(id)
            .as_discrete()
            .unwrap_or_else(|| panic!("node `{id}` is not discrete"))
    }

    pub fn real(&self, id: &str) -> f64 {
        self.value(id)
            .as_real()
            .unwrap_or_else(|| panic!("node `{id}` is not real"))
    }

    pub fn vector(&self, id: &str) -> &'a [f64] {
        self.value(id)
            .as_vector()
            .unwrap_or_else(|| panic!("node `{id}` is not a vector"))
    }

    pub fn instantiation(&self) -> &'a Instantiation {
        self.inst
    }
}

struct NodeSpec {
    id: String,
    kind: NodeKind,
    parents: Vec<String>,
    space: VariableSpace,
    cpd: Option<Cpd>,
}

/// Builder for [`GameNet`]. Structural errors (duplicate ids, unknown
/// parents) surface from [`GameNetBuilder::build`]; rule violations are left
/// to [`GameNet::validate`].
#[derive(Default)]
pub struct GameNetBuilder {
    nodes: Vec<NodeSpec>,
    extra_edges: Vec<(String, String)>,
    extra_cpds: Vec<(String, Cpd)>,
    utilities: BTreeMap<usize, Arc<UtilityFn>>,
}

impl GameNetBuilder {
    pub fn chance(mut self, id: &str, space: VariableSpace, parents: &[&str], cpd: Cpd) -> Self {
        self.nodes.push(NodeSpec {
            id: id.to_string(),
            kind: NodeKind::Chance,
            parents: parents.iter().map(|p| p.to_string()).collect(),
            space,
            cpd: Some(cpd),
        });
        self
    }

    /// A chance node without a distribution (fails validation).
    pub fn chance_without_cpd(mut self, id: &str, space: VariableSpace, parents: &[&str]) -> Self {
        self.nodes.push(NodeSpec {
            id: id.to_string(),
            kind: NodeKind::Chance,
            parents: parents.iter().map(|p| p.to_string()).collect(),
            space,
            cpd: None,
        });
        self
    }

    pub fn decision(
        mut self,
        id: &str,
        space: VariableSpace,
        parents: &[&str],
        player: usize,
    ) -> Self {
        self.nodes.push(NodeSpec {
            id: id.to_string(),
            kind: NodeKind::Decision { player },
            parents: parents.iter().map(|p| p.to_string()).collect(),
            space,
            cpd: None,
        });
        self
    }

    /// Adds `parent` to the parent list of `child`.
    pub fn edge(mut self, parent: &str, child: &str) -> Self {
        self.extra_edges
            .push((parent.to_string(), child.to_string()));
        self
    }

    /// Attaches (or replaces) the distribution of any node.
    pub fn attach_cpd(mut self, id: &str, cpd: Cpd) -> Self {
        self.extra_cpds.push((id.to_string(), cpd));
        self
    }

    pub fn utility<F>(mut self, player: usize, f: F) -> Self
    where
        F: Fn(&Assignment<'_>) -> f64 + Send + Sync + 'static,
    {
        self.utilities.insert(player, Arc::new(f));
        self
    }

    pub fn build(self) -> Result<GameNet, NetError> {
        let mut specs = self.nodes;
        for (parent, child) in self.extra_edges {
            let spec = specs
                .iter_mut()
                .find(|s| s.id == child)
                .ok_or(NetError::UnknownNode(child))?;
            spec.parents.push(parent);
        }
        for (id, cpd) in self.extra_cpds {
            let spec = specs
                .iter_mut()
                .find(|s| s.id == id)
                .ok_or(NetError::UnknownNode(id))?;
            spec.cpd = Some(cpd);
        }
        specs.sort_by(|a, b| a.id.cmp(&b.id));
        for w in specs.windows(2) {
            if w[0].id == w[1].id {
                return Err(NetError::DuplicateNode(w[0].id.clone()));
            }
        }
        let index: BTreeMap<String, NodeIdx> = specs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();
        let n = specs.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (i, s) in specs.iter().enumerate() {
            for p in &s.parents {
                let pi = *index.get(p).ok_or_else(|| NetError::UnknownParent {
                    node: s.id.clone(),
                    parent: p.clone(),
                })?;
                parents[i].push(pi);
                children[pi].push(i);
            }
        }
        for c in &mut children {
            c.sort_unstable();
            c.dedup();
        }
        let players = specs
            .iter()
            .filter_map(|s| match s.kind {
                NodeKind::Decision { player } => Some(player + 1),
                NodeKind::Chance => None,
            })
            .chain(self.utilities.keys().map(|p| p + 1))
            .max()
            .unwrap_or(0);
        let mut net = GameNet {
            ids: specs.iter().map(|s| s.id.clone()).collect(),
            index,
            kinds: specs.iter().map(|s| s.kind).collect(),
            parents,
            children,
            spaces: specs.iter().map(|s| s.space.clone()).collect(),
            cpds: specs.into_iter().map(|s| s.cpd).collect(),
            utilities: self.utilities,
            players,
            topo: None,
        };
        net.topo = net.compute_topological_order().ok();
        Ok(net)
    }
}

/// A semi network-form game. Immutable once built.
pub struct GameNet {
    ids: Vec<String>,
    index: BTreeMap<String, NodeIdx>,
    kinds: Vec<NodeKind>,
    parents: Vec<Vec<NodeIdx>>,
    children: Vec<Vec<NodeIdx>>,
    spaces: Vec<VariableSpace>,
    cpds: Vec<Option<Cpd>>,
    utilities: BTreeMap<usize, Arc<UtilityFn>>,
    players: usize,
    topo: Option<Vec<NodeIdx>>,
}

/// The node sets a decision node's strategy works with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSets {
    pub node: NodeIdx,
    pub parents: Vec<NodeIdx>,
    /// All descendants of the node.
    pub successors: Vec<NodeIdx>,
    /// Everything except the node and its descendants.
    pub non_successors: Vec<NodeIdx>,
    /// Non-successors that are not parents.
    pub y: Vec<NodeIdx>,
}

impl GameNet {
    pub fn builder() -> GameNetBuilder {
        GameNetBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, node: NodeIdx) -> &str {
        &self.ids[node]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<NodeIdx, NetError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| NetError::UnknownNode(id.to_string()))
    }

    pub fn kind(&self, node: NodeIdx) -> NodeKind {
        self.kinds[node]
    }

    pub fn is_decision(&self, node: NodeIdx) -> bool {
        matches!(self.kinds[node], NodeKind::Decision { .. })
    }

    pub fn parents(&self, node: NodeIdx) -> &[NodeIdx] {
        &self.parents[node]
    }

    pub fn children(&self, node: NodeIdx) -> &[NodeIdx] {
        &self.children[node]
    }

    pub fn space(&self, node: NodeIdx) -> &VariableSpace {
        &self.spaces[node]
    }

    pub fn cpd(&self, node: NodeIdx) -> Option<&Cpd> {
        self.cpds[node].as_ref()
    }

    /// Number of players (one more than the largest player index used).
    pub fn players(&self) -> usize {
        self.players
    }

    /// Decision nodes in index order.
    pub fn decision_nodes(&self) -> Vec<NodeIdx> {
        (0..self.len()).filter(|&i| self.is_decision(i)).collect()
    }

    pub fn decision_node_of(&self, player: usize) -> Option<NodeIdx> {
        (0..self.len()).find(|&i| self.kinds[i] == NodeKind::Decision { player })
    }

    pub fn player_of(&self, node: NodeIdx) -> Option<usize> {
        match self.kinds[node] {
            NodeKind::Decision { player } => Some(player),
            NodeKind::Chance => None,
        }
    }

    pub fn has_utility(&self, player: usize) -> bool {
        self.utilities.contains_key(&player)
    }

    /// Utility of `player` on a full instantiation.
    ///
    /// # Panics
    /// If the player has no utility (a validated net always has one).
    pub fn utility(&self, player: usize, inst: &Instantiation) -> f64 {
        let f = self
            .utilities
            .get(&player)
            .unwrap_or_else(|| panic!("player {player} has no utility"));
        f(&Assignment::new(self, inst))
    }

    /// A fresh, empty instantiation sized for this net.
    pub fn empty_instantiation(&self) -> Instantiation {
        Instantiation::empty(self.len())
    }

    /// An instantiation assigning the given `(id, value)` pairs.
    pub fn instantiation(&self, pairs: &[(&str, Value)]) -> Result<Instantiation, NetError> {
        let mut inst = self.empty_instantiation();
        for (id, v) in pairs {
            let idx = self.index_of(id)?;
            self.check_in_space(idx, v)?;
            inst.set(idx, v.clone());
        }
        Ok(inst)
    }

    pub(crate) fn check_in_space(&self, node: NodeIdx, value: &Value) -> Result<(), NetError> {
        if self.spaces[node].contains(value) {
            Ok(())
        } else {
            Err(NetError::OutOfSpace {
                node: self.ids[node].clone(),
                value: value.to_string(),
            })
        }
    }

    /// Parent values of `node` in declared order.
    pub fn parent_values<'i>(
        &self,
        node: NodeIdx,
        inst: &'i Instantiation,
    ) -> Result<Vec<&'i Value>, NetError> {
        self.parents[node]
            .iter()
            .map(|&p| {
                inst.get(p).ok_or_else(|| NetError::MissingParentValue {
                    node: self.ids[node].clone(),
                    parent: self.ids[p].clone(),
                })
            })
            .collect()
    }

    /// Checks every invariant of a semi network-form game. The list is
    /// empty exactly when the net is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for scc in self.cyclic_components() {
            let names: Vec<&str> = scc.iter().map(|&i| self.ids[i].as_str()).collect();
            out.push(Diagnostic {
                node: names[0].to_string(),
                rule: Rule::Acyclic,
                message: format!("cycle through {}", names.join(", ")),
            });
        }
        for (i, space) in self.spaces.iter().enumerate() {
            for p in space.problems() {
                out.push(Diagnostic {
                    node: self.ids[i].clone(),
                    rule: Rule::SpaceWellFormed,
                    message: p,
                });
            }
        }
        for i in 0..self.len() {
            match (self.kinds[i], &self.cpds[i]) {
                (NodeKind::Chance, None) => out.push(Diagnostic {
                    node: self.ids[i].clone(),
                    rule: Rule::ChanceHasCpd,
                    message: "chance node has no distribution".to_string(),
                }),
                (NodeKind::Decision { .. }, Some(_)) => out.push(Diagnostic {
                    node: self.ids[i].clone(),
                    rule: Rule::DecisionHasNoCpd,
                    message: "decision node carries a fixed distribution".to_string(),
                }),
                _ => {}
            }
        }
        for player in 0..self.players {
            let nodes: Vec<NodeIdx> = (0..self.len())
                .filter(|&i| self.kinds[i] == NodeKind::Decision { player })
                .collect();
            if nodes.is_empty() {
                out.push(Diagnostic {
                    node: format!("player{player}"),
                    rule: Rule::OneNodePerPlayer,
                    message: format!("player {player} owns no decision node"),
                });
            }
            for &extra in nodes.iter().skip(1) {
                out.push(Diagnostic {
                    node: self.ids[extra].clone(),
                    rule: Rule::OneNodePerPlayer,
                    message: format!("player {player} already owns `{}`", self.ids[nodes[0]]),
                });
            }
            if !self.utilities.contains_key(&player) {
                out.push(Diagnostic {
                    node: format!("player{player}"),
                    rule: Rule::UtilityPerPlayer,
                    message: format!("player {player} has no utility"),
                });
            }
        }
        for i in 0..self.len() {
            if let Some(msg) = self.normalization_problem(i) {
                out.push(Diagnostic {
                    node: self.ids[i].clone(),
                    rule: Rule::CpdNormalized,
                    message: msg,
                });
            }
        }
        out
    }

    /// Sums a discrete chance node's density over its space for every
    /// parent configuration (when all parents are discrete and there are
    /// not too many configurations).
    fn normalization_problem(&self, node: NodeIdx) -> Option<String> {
        const MAX_CONFIGS: usize = 4096;
        let cpd = self.cpds[node].as_ref()?;
        let values = self.spaces[node].values()?;
        if !cpd.has_density() || self.kinds[node] != NodeKind::Chance {
            return None;
        }
        let mut parent_spaces = Vec::new();
        for &p in &self.parents[node] {
            parent_spaces.push(self.spaces[p].values()?);
        }
        let configs: usize = parent_spaces.iter().map(|s| s.len()).product();
        if configs > MAX_CONFIGS || parent_spaces.iter().any(|s| s.is_empty()) {
            return None;
        }
        let mut counter = vec![0usize; parent_spaces.len()];
        for _ in 0..configs {
            let pa: Vec<Value> = counter
                .iter()
                .zip(&parent_spaces)
                .map(|(&c, s)| Value::Discrete(s[c]))
                .collect();
            let refs: Vec<&Value> = pa.iter().collect();
            let total: f64 = values
                .iter()
                .map(|&x| cpd.density(&Value::Discrete(x), &refs).unwrap_or(0.0))
                .sum();
            if (total - 1.0).abs() > 1e-9 {
                let shown: Vec<String> = pa.iter().map(Value::to_string).collect();
                return Some(format!(
                    "mass sums to {total} given parents ({})",
                    shown.join(",")
                ));
            }
            for k in (0..counter.len()).rev() {
                counter[k] += 1;
                if counter[k] < parent_spaces[k].len() {
                    break;
                }
                counter[k] = 0;
            }
        }
        None
    }

    /// Strongly connected components that contain a cycle, each sorted, in
    /// order of their first node.
    fn cyclic_components(&self) -> Vec<Vec<NodeIdx>> {
        struct Tarjan<'a> {
            children: &'a [Vec<NodeIdx>],
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<NodeIdx>,
            next: usize,
            out: Vec<Vec<NodeIdx>>,
        }
        impl Tarjan<'_> {
            fn visit(&mut self, v: NodeIdx) {
                self.index[v] = Some(self.next);
                self.low[v] = self.next;
                self.next += 1;
                self.stack.push(v);
                self.on_stack[v] = true;
                for &w in &self.children[v] {
                    match self.index[w] {
                        None => {
                            self.visit(w);
                            self.low[v] = self.low[v].min(self.low[w]);
                        }
                        Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                        _ => {}
                    }
                }
                if Some(self.low[v]) == self.index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = self.stack.pop().expect("tarjan stack");
                        self.on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let self_loop = comp.len() == 1 && self.children[v].contains(&v);
                    if comp.len() > 1 || self_loop {
                        comp.sort_unstable();
                        self.out.push(comp);
                    }
                }
            }
        }
        let n = self.len();
        let mut t = Tarjan {
            children: &self.children,
            index: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in 0..n {
            if t.index[v].is_none() {
                t.visit(v);
            }
        }
        let mut out = t.out;
        out.sort();
        out
    }

    /// Nodes ordered so that parents come first; ties go to the
    /// lexicographically smaller id.
    pub fn topological_order(&self) -> Result<Vec<NodeIdx>, NetError> {
        match &self.topo {
            Some(t) => Ok(t.clone()),
            None => self.compute_topological_order(),
        }
    }

    pub(crate) fn topo(&self) -> Result<&[NodeIdx], NetError> {
        match &self.topo {
            Some(t) => Ok(t),
            None => Err(self.compute_topological_order().unwrap_err()),
        }
    }

    fn compute_topological_order(&self) -> Result<Vec<NodeIdx>, NetError> {
        let all = vec![true; self.len()];
        let order = self.ranked_order(&all, |_| 0);
        if order.len() == self.len() {
            Ok(order)
        } else {
            Err(NetError::Cycle(self.find_cycle(&order)))
        }
    }

    /// Kahn's algorithm over the members of `subset`, treating parents
    /// outside it as already known. Among ready nodes the smallest
    /// `(rank, index)` goes first. Nodes on a cycle are left out.
    pub(crate) fn ranked_order<R: Fn(NodeIdx) -> u8>(
        &self,
        subset: &[bool],
        rank: R,
    ) -> Vec<NodeIdx> {
        let n = self.len();
        let mut missing = vec![0usize; n];
        let mut heap = BinaryHeap::new();
        for v in 0..n {
            if !subset[v] {
                continue;
            }
            missing[v] = self.parents[v].iter().filter(|&&p| subset[p]).count();
            if missing[v] == 0 {
                heap.push(Reverse((rank(v), v)));
            }
        }
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, v))) = heap.pop() {
            order.push(v);
            for &c in &self.children[v] {
                if subset[c] {
                    // A node may list the same parent twice; count edges.
                    let edges = self.parents[c].iter().filter(|&&p| p == v).count();
                    missing[c] -= edges;
                    if missing[c] == 0 {
                        heap.push(Reverse((rank(c), c)));
                    }
                }
            }
        }
        order
    }

    fn find_cycle(&self, ordered: &[NodeIdx]) -> Vec<String> {
        let mut done = vec![false; self.len()];
        for &v in ordered {
            done[v] = true;
        }
        // Every leftover node has a leftover parent; walk parents until a
        // node repeats.
        let start = (0..self.len())
            .find(|&v| !done[v])
            .expect("a cycle leaves nodes unordered");
        let mut seen: Vec<NodeIdx> = vec![start];
        let mut cur = start;
        loop {
            let next = *self.parents[cur]
                .iter()
                .filter(|&&p| !done[p])
                .min()
                .expect("leftover parent");
            if let Some(pos) = seen.iter().position(|&s| s == next) {
                let mut cycle: Vec<String> = seen[pos..]
                    .iter()
                    .rev()
                    .map(|&i| self.ids[i].clone())
                    .collect();
                cycle.push(cycle[0].clone());
                return cycle;
            }
            seen.push(next);
            cur = next;
        }
    }

    /// All descendants of `node`, as a membership mask.
    pub fn descendant_mask(&self, node: NodeIdx) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let mut stack: Vec<NodeIdx> = self.children[node].clone();
        while let Some(v) = stack.pop() {
            if !mask[v] {
                mask[v] = true;
                stack.extend(self.children[v].iter().copied());
            }
        }
        mask
    }

    pub fn partition_sets(&self, node: NodeIdx) -> Result<PartitionSets, NetError> {
        if node >= self.len() {
            return Err(NetError::UnknownNode(format!("#{node}")));
        }
        let succ = self.descendant_mask(node);
        let parents: BTreeSet<NodeIdx> = self.parents[node].iter().copied().collect();
        let successors: Vec<NodeIdx> = (0..self.len()).filter(|&i| succ[i]).collect();
        let non_successors: Vec<NodeIdx> =
            (0..self.len()).filter(|&i| i != node && !succ[i]).collect();
        let y = non_successors
            .iter()
            .copied()
            .filter(|i| !parents.contains(i))
            .collect();
        Ok(PartitionSets {
            node,
            parents: parents.into_iter().collect(),
            successors,
            non_successors,
            y,
        })
    }

    /// [`GameNet::partition_sets`] by node id.
    pub fn partition_sets_of(&self, id: &str) -> Result<PartitionSets, NetError> {
        self.partition_sets(self.index_of(id)?)
    }

    /// Plain-text listing of the net, one line per node:
    ///
    /// ```text
    /// net nodes=<n> players=<p>
    /// node <id> chance|decision(<player>) <space> parents=<p1>,<p2>|-
    /// utility <player>
    /// ```
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "net nodes={} players={}", self.len(), self.players);
        for i in 0..self.len() {
            let kind = match self.kinds[i] {
                NodeKind::Chance => "chance".to_string(),
                NodeKind::Decision { player } => format!("decision({player})"),
            };
            let parents = if self.parents[i].is_empty() {
                "-".to_string()
            } else {
                self.parents[i]
                    .iter()
                    .map(|&p| self.ids[p].as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let _ = writeln!(
                s,
                "node {} {} {} parents={}",
                self.ids[i], kind, self.spaces[i], parents
            );
        }
        for p in self.utilities.keys() {
            let _ = writeln!(s, "utility {p}");
        }
        s
    }
}
