//! Deterministic constructions and learners.

pub mod cache;
pub mod code;
pub mod disjunct;
pub mod fallback;
pub mod family;
pub mod five_round;
pub mod oneor;
pub mod partition;
