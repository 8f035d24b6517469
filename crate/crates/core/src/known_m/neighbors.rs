//! Learning the neighbours of one vertex inside an independent set.
//!
//! Every query is `Q ∪ {v}` with `Q` a p-random subset of `I`. Because `I`
//! carries no edge, a YES means `Q` holds a neighbour of `v`; a NO clears
//! all of `Q`.

use crate::error::Result;
use crate::graph::VertexSet;
use crate::oracle::OracleSession;
use crate::rng::{PRandomSchedule, Seed};

/// `⌈4m(ln n + ln 1/δ)⌉`.
pub fn neighbor_t(n: usize, m: usize, delta: f64) -> usize {
    let m = m.max(1) as f64;
    ((4.0 * m * ((n.max(2) as f64).ln() + (1.0 / delta).ln())).ceil() as usize).max(1)
}

/// `1/m`, held at 1/2 for `m = 1` so a lone neighbour can be told apart.
pub fn neighbor_p(m: usize) -> f64 {
    if m <= 1 {
        0.5
    } else {
        1.0 / m as f64
    }
}

/// Queries for one `(v, I)` pair and the rule to decode their answers.
#[derive(Clone, Debug)]
pub struct NeighborPlan {
    pub v: usize,
    pub set: VertexSet,
    draws: Vec<VertexSet>,
}

impl NeighborPlan {
    /// `m` bounds `|Γ(v) ∩ I|`. An empty `I` needs no queries.
    pub fn new(v: usize, set: &VertexSet, m: usize, delta: f64, seed: Seed) -> Result<Self> {
        let mut set = set.clone();
        set.remove(v);
        let draws = if set.is_empty() {
            Vec::new()
        } else {
            let t = neighbor_t(set.universe(), m, delta);
            PRandomSchedule::new(neighbor_p(m), t, set.clone(), seed)?
                .iter()
                .collect()
        };
        Ok(NeighborPlan { v, set, draws })
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn queries(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.draws.iter().map(|q| {
            let mut q = q.clone();
            q.insert(self.v);
            q
        })
    }

    /// Members of `I` never seen in a NO query. Always a superset of the true
    /// neighbours in `I`.
    pub fn decode(&self, answers: &[bool]) -> VertexSet {
        debug_assert_eq!(answers.len(), self.draws.len());
        let mut n = self.set.clone();
        for (q, &a) in self.draws.iter().zip(answers) {
            if !a {
                n.difference_with(q);
            }
        }
        n
    }
}

/// Single-round form of [`NeighborPlan`].
pub fn learn_neighbors_in_independent_set(
    session: &mut OracleSession<'_>,
    v: usize,
    set: &VertexSet,
    m: usize,
    delta: f64,
    seed: Seed,
) -> Result<VertexSet> {
    let plan = NeighborPlan::new(v, set, m, delta, seed)?;
    let answers = session.ask_round(plan.queries().collect())?;
    Ok(plan.decode(&answers))
}
