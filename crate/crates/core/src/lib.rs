//! Reconstructing a hidden graph from edge-detecting queries.
//!
//! A query is a vertex subset; the oracle answers whether the hidden graph
//! has an edge inside it. The crate provides the round-enforcing oracle,
//! randomized learners that know an edge bound `m`, learners that do not,
//! deterministic constructions, and an experiment harness.

pub mod candidate;
pub mod config;
pub mod deterministic;
pub mod error;
pub mod graph;
pub mod harness;
pub mod known_m;
pub mod oracle;
pub mod outcome;
pub mod rng;
pub mod unknown_m;

pub use candidate::CandidateEdgeSet;
pub use config::{Constants, Ctx};
pub use error::{Error, Result};
pub use graph::{edge, Edge, EdgeSet, HiddenGraph, VertexSet};
pub use oracle::{Batch, Mode, OracleSession, RoundId, Transcript};
pub use outcome::Outcome;
pub use rng::{PRandomSchedule, Seed};
