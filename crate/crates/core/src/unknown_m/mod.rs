//! Learners that are not told the number of edges.

pub mod curve;
pub mod estimate;
pub mod pipeline;
pub mod split;

pub use estimate::{estimate, estimate_degree, k_estimate, k_estimate_degree, log_star, Estimate};
pub use pipeline::{pipeline_unknown_m, PipelineMode};
pub use split::{find_edges, split, SplitResult};
