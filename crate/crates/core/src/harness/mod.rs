//! Experiment harness: instance generators, algorithm dispatch, plan files
//! and statistics.

pub mod dispatch;
pub mod generate;
pub mod plan;
pub mod run;
pub mod stats;

pub use dispatch::{
    algorithm, round_budget, run_algorithm, AlgorithmInfo, RoundBudget, RunOptions, ALGORITHMS,
    BRUTE_FORCE,
};
pub use generate::{generate, Generator, InstanceSpec};
pub use plan::{parse_instance_spec, parse_plan, read_instance_spec, read_plan, ExperimentPlan};
pub use run::{run_plan, run_trial, run_trials, RunReport, TrialResult};
pub use stats::{aggregate, wilson, Aggregate, TrialRow};

use crate::error::Result;
use crate::graph::EdgeSet;
use crate::oracle::OracleSession;

/// Asks every pair in a single round.
pub fn brute_force_learn(session: &mut OracleSession<'_>) -> Result<EdgeSet> {
    crate::unknown_m::pipeline::all_pairs(session)
}
