//! Piecewise-linear billiard trajectories with specular reflection at
//! linear collision subspaces.

mod arrangement;
mod dynamics;
mod search;

pub use arrangement::{reduced_arrangement, SubspaceArrangement, Wall};
pub use dynamics::{
    next_collision, reflect, run_trajectory, time_reversal_error, CollisionEvent, NextCollision, Termination,
    Trajectory,
};
pub use search::{collect_outcomes, is_foch_pattern, max_collision_search, Sampling, SearchConfig, SearchResult, TrialOutcome};
