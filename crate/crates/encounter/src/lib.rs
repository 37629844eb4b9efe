//! Two-aircraft encounters in which each pilot is a level-K player.
//!
//! Each aircraft carries a simplified TCAS ([`mini_tcas`]) that may issue a
//! vertical resolution advisory. A pilot receiving one chooses a vertical
//! rate by reasoning about the other pilot in the game built by
//! [`build_encounter_net`]. [`EncounterSim`] steps the world with first-order
//! kinematics until the aircraft pass, collide or time runs out.

mod error;
mod game;
mod kinematics;
mod pilot;
mod sim;
mod state;
mod tcas;

pub use error::EncounterError;
pub use game::{
    build_encounter_net, lookahead_rollout, pilot_decide, pilot_strategy_config, EncounterNet,
    EncounterProposal, GameParams, NodeIds, PilotDecision, PilotStrategy, PilotView,
    ProposalParams, ACTION_BOUND,
};
pub use kinematics::{
    kinematics_step, min_approach_distance, roll_for_turn_rate, turn_rate, world_step,
    FilterTimeConstants, PassDetector, GRAVITY,
};
pub use pilot::{
    pilot_observation_density, pilot_observe, pilot_utility, PilotObservation, UtilityWeights,
    OBS_Z_DOT, PILOT_NOISE_SIGMA,
};
pub use sim::{
    detect_nmac, generate_encounter, run_encounter, straight_line_cpa_time, write_trajectory_csv,
    EncounterConfig, EncounterSim, EndReason, GeneratedEncounter, GeneratorConfig,
    HorizontalAdvisor, MaintainHeading, OutcomeRecord, PilotRecord, TrajectoryPoint,
    HEADING_CANDIDATES_DEG,
};
pub use state::{AircraftState, Sense, TcasIntent, WorldState, AIRCRAFT_DIM, WORLD_DIM};
pub use tcas::{
    mini_tcas, tcas_exact, tcas_observation_density, tcas_observe, ResolutionAdvisory,
    TcasObservation, TcasParams, TCAS_NOISE_SIGMA,
};
