use netgame_encounter::EncounterError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("cannot read config {path}: {reason}")]
    ConfigFile { path: String, reason: String },
    #[error("unknown parameter `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid run: {0}")]
    InvalidRun(String),
    #[error(transparent)]
    Encounter(#[from] EncounterError),
    #[error("no usable encounters: {failed} failed and {discarded} discarded out of {total}")]
    NoValidEncounters {
        total: usize,
        failed: usize,
        discarded: usize,
    },
    #[error("{failed} of {total} encounters failed, above the threshold {threshold}")]
    FailureThreshold {
        total: usize,
        failed: usize,
        threshold: f64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    /// Process exit code: 1 for configuration problems, 2 for runtime
    /// failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            ExperimentError::Parse { .. }
            | ExperimentError::ConfigFile { .. }
            | ExperimentError::UnknownKey(_)
            | ExperimentError::BadValue { .. }
            | ExperimentError::InvalidRun(_)
            | ExperimentError::Encounter(EncounterError::InvalidConfig(_)) => 1,
            _ => 2,
        }
    }
}
