//! Batch runs, parameter sweeps and the horizontal advisory study on top of
//! the encounter simulator.
//!
//! Every encounter gets its own seed derived from a root seed and its index
//! ([`derive_seed`]), so results do not depend on how many workers ran them.

mod batch;
mod config;
mod error;
mod exec;
mod horizontal;
mod report;
mod seed;
pub mod stats;
mod sweep;

pub use batch::{encounter_seed, run_batch, run_batch_with, Batch, RunManifest, RunOptions};
pub use config::{Config, RunSettings, KEYS};
pub use error::ExperimentError;
pub use exec::{map_indexed, parallel_enabled};
pub use horizontal::{
    best_candidate, compare_horizontal, horizontal_ra_search, CandidateStats, HorizontalComparison,
    HorizontalSearch, QuantileEdge, SearchResult, QUINTILE_EDGES,
};
pub use report::{
    emit_report, valid_welfare, write_histogram_csv, write_outcomes_csv, write_sweep_csv,
    OUTCOME_COLUMNS,
};
pub use seed::{derive_seed, point_seed, rollout_seed};
pub use sweep::{run_sweep, sweep_trend, SweepPoint, SweepSpec};
