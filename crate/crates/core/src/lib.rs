//! Semi network-form games.
//!
//! A [`GameNet`] is a Bayes net in which some nodes are *decision* nodes,
//! each owned by one player, instead of carrying a fixed distribution.
//! Players pick their moves by sampling-based level-K reasoning
//! ([`StrategyEngine`]).
//!
//! ```
//! use netgame::{Cpd, GameNet, StrategyConfig, StrategyEngine, Value, Variant, VariableSpace};
//! use rand::SeedableRng;
//!
//! let net = GameNet::builder()
//!     .chance("C", VariableSpace::binary(), &[], Cpd::table(vec![0, 1], vec![0.3, 0.7]))
//!     .decision("P", VariableSpace::binary(), &[], 0)
//!     .utility(0, |x| if x.discrete("P") == x.discrete("C") { 1.0 } else { 0.0 })
//!     .build()
//!     .unwrap();
//! let uniform = Cpd::uniform_discrete(vec![0, 1]);
//! let engine = StrategyEngine::new(&net, Variant::DRelaxed)
//!     .unwrap()
//!     .with_config("P", StrategyConfig::new(1, 8, 200, uniform.clone(), uniform))
//!     .unwrap();
//! let mut rng = rand::rngs::StdRng::seed_from_u64(7);
//! let p = net.index_of("P").unwrap();
//! let d = engine.decide(p, &net.empty_instantiation(), &mut rng).unwrap();
//! assert_eq!(d.chosen, Value::Discrete(1));
//! ```

mod cpd;
mod error;
mod net;
mod oracle;
mod sample;
mod strategy;
mod value;

pub use cpd::{normal_pdf, Cpd, DensityFn, SampleFn};
pub use error::{Diagnostic, NetError, Rule};
pub use net::{Assignment, GameNet, GameNetBuilder, NodeIdx, NodeKind, PartitionSets, UtilityFn};
pub use oracle::{brute_force_best_response, MAX_ENUMERATION};
pub use sample::{DecisionSampler, PolicyTable};
pub use strategy::{
    argmax, count_strategy_evaluations, CounterSnapshot, Decision, DefaultMoveFn, Limits, Proposal,
    StrategyConfig, StrategyEngine, StrategyError, UtilityEstimate, Variant, WeightedSample,
    TIE_TOLERANCE,
};
pub use value::{Instantiation, Value, VariableSpace};
