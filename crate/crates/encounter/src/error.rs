use netgame::{NetError, StrategyError};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum EncounterError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("no encounter met the minimum closing speed after {0} draws")]
    GeneratorExhausted(usize),
    #[error("the simulation is not waiting for a heading advisory")]
    NotAwaiting,
}
