use std::collections::BTreeMap;

use crate::graph::EdgeSet;

/// What a learner hands back besides the session's own accounting.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub edges: EdgeSet,
    /// False when the learner detected that its own w.h.p. event failed.
    pub success: bool,
    pub restarts: u32,
    /// True when a Las Vegas learner had to fall back to a deterministic round.
    pub fallback: bool,
    /// Named intermediate quantities (survivor counts, estimates, ...).
    pub diagnostics: BTreeMap<&'static str, f64>,
}

impl Outcome {
    pub fn new(edges: EdgeSet) -> Self {
        Outcome {
            edges,
            success: true,
            ..Outcome::default()
        }
    }

    pub fn failed(edges: EdgeSet) -> Self {
        Outcome {
            edges,
            success: false,
            ..Outcome::default()
        }
    }

    pub fn note(&mut self, key: &'static str, value: f64) -> &mut Self {
        self.diagnostics.insert(key, value);
        self
    }

    pub fn diag(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).copied()
    }
}
