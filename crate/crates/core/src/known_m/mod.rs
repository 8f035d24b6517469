//! Randomized learners that are told an upper bound `m` on the edge count.

pub mod elimination;
pub mod large_n;
pub mod neighbors;
pub mod nonadaptive;
pub mod structure;
pub mod three_round;
pub mod two_round;

pub use elimination::{elimination_round, elimination_t, EliminationParams};
pub use large_n::{partition_vertices, three_round_lv_large_n, two_round_large_n};
pub use neighbors::{learn_neighbors_in_independent_set, NeighborPlan};
pub use nonadaptive::{las_vegas_two_round, non_adaptive_mc};
pub use structure::{classify_structure, Structure};
pub use three_round::three_round_mc;
pub use two_round::{three_round_lv, two_round_mc};

use crate::error::Result;
use crate::graph::{EdgeSet, VertexSet};
use crate::oracle::OracleSession;

/// One two-vertex query per pair, in order.
pub fn pair_queries(n: usize, pairs: &EdgeSet) -> Vec<VertexSet> {
    pairs
        .iter()
        .map(|&(u, v)| VertexSet::from_members(n, [u, v]))
        .collect()
}

/// One round of pair queries; returns the pairs answered YES.
pub fn confirm_pairs(session: &mut OracleSession<'_>, pairs: &EdgeSet) -> Result<EdgeSet> {
    let answers = session.ask_round(pair_queries(session.n(), pairs))?;
    Ok(pairs
        .iter()
        .zip(answers)
        .filter_map(|(&e, a)| a.then_some(e))
        .collect())
}
