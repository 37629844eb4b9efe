use std::fmt;

use thiserror::Error;

/// Which structural rule a [`Diagnostic`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Acyclic,
    SpaceWellFormed,
    OneNodePerPlayer,
    ChanceHasCpd,
    DecisionHasNoCpd,
    UtilityPerPlayer,
    CpdNormalized,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Acyclic => "acyclic",
            Rule::SpaceWellFormed => "space-well-formed",
            Rule::OneNodePerPlayer => "one-node-per-player",
            Rule::ChanceHasCpd => "chance-has-cpd",
            Rule::DecisionHasNoCpd => "decision-has-no-cpd",
            Rule::UtilityPerPlayer => "utility-per-player",
            Rule::CpdNormalized => "cpd-normalized",
        };
        f.write_str(s)
    }
}

/// One violated invariant, reported by [`crate::GameNet::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub node: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.node, self.rule, self.message)
    }
}

#[derive(Debug, Clone, Error)]
pub enum NetError {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("node `{node}` lists unknown parent `{parent}`")]
    UnknownParent { node: String, parent: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("graph has a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("net failed validation ({} problem(s)); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Diagnostic>),
    #[error("no strategy for decision node `{0}`")]
    MissingStrategy(String),
    #[error("chance node `{0}` has no distribution")]
    MissingCpd(String),
    #[error("node `{node}` needs a value for parent `{parent}`")]
    MissingParentValue { node: String, parent: String },
    #[error("value {value} is outside the space of `{node}`")]
    OutOfSpace { node: String, value: String },
    #[error("no density available for `{0}`")]
    DensityUnavailable(String),
    #[error("instantiation has {got} slots, net has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
}
