//! The p-random elimination round: ask t random queries, drop every pair that
//! sits inside a NO answer.

use crate::candidate::CandidateEdgeSet;
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::oracle::OracleSession;
use crate::rng::{PRandomSchedule, Seed};

/// Per-query probability that a fixed non-edge with small pair-neighbourhood
/// is eliminated: `p²(1 − rp − mp²)`.
pub fn success_rate(m: usize, p: f64, r: f64) -> f64 {
    p * p * (1.0 - r * p - m as f64 * p * p)
}

/// `⌈(2 ln n + ln 1/δ) / (p²(1 − rp − mp²))⌉`.
pub fn elimination_t(n: usize, m: usize, r: f64, p: f64, delta: f64) -> Result<usize> {
    let rate = success_rate(m, p, r);
    if !(rate > 0.0) {
        return Err(Error::pre(format!(
            "elimination parameters p={p}, r={r}, m={m} give non-positive rate {rate}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::pre(format!("failure budget {delta} outside (0, 1)")));
    }
    let num = 2.0 * (n.max(2) as f64).ln() + (1.0 / delta).ln();
    Ok(((num / rate).ceil() as usize).max(1))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EliminationParams {
    pub p: f64,
    pub r: f64,
    pub delta: f64,
    pub t: usize,
}

impl EliminationParams {
    /// Parameters for a graph of at most `m` edges on `n` (super-)vertices.
    pub fn new(n: usize, m: usize, p: f64, r: f64, delta: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::pre(format!(
                "inclusion probability {p} outside (0, 1]"
            )));
        }
        let t = elimination_t(n, m, r, p, delta)?;
        Ok(EliminationParams { p, r, delta, t })
    }
}

/// The `t` queries of one round over the universe `0..u`.
pub fn elimination_queries(
    u: usize,
    params: &EliminationParams,
    seed: Seed,
) -> Result<Vec<VertexSet>> {
    let sched = PRandomSchedule::new(params.p, params.t, VertexSet::full(u), seed)?;
    Ok(sched.iter().collect())
}

/// Hypothesis left after applying `answers` to `queries`.
pub fn apply_answers(u: usize, queries: &[VertexSet], answers: &[bool]) -> CandidateEdgeSet {
    let mut h = CandidateEdgeSet::complete(u);
    for (q, &a) in queries.iter().zip(answers) {
        if !a {
            h.eliminate_within(q);
        }
    }
    h
}

/// One round of `params.t` p-random queries over all vertices.
pub fn elimination_round(
    session: &mut OracleSession<'_>,
    params: &EliminationParams,
    seed: Seed,
) -> Result<CandidateEdgeSet> {
    let n = session.n();
    let queries = elimination_queries(n, params, seed)?;
    let answers = session.ask_round(queries.clone())?;
    Ok(apply_answers(n, &queries, &answers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn closed_form_counts() {
        // m = 1, n = 16, δ = 0.1, p = 1/2, r = 1: (2 ln 16 + ln 10) / (1/16)
        assert_eq!(elimination_t(16, 1, 1.0, 0.5, 0.1).unwrap(), 126);
        assert!(elimination_t(16, 8, 2.0, 0.25, 0.1).is_err());
    }

    #[test]
    fn single_edge_always_survives() {
        let g = HiddenGraph::new(8, [(1, 2)]).unwrap();
        let params = EliminationParams::new(8, 1, 0.5, 1.0, 0.1).unwrap();
        for seed in 0..20 {
            let mut s = OracleSession::round_structured(&g);
            let h = elimination_round(&mut s, &params, Seed::new(seed, 0)).unwrap();
            assert!(h.contains(1, 2));
            assert_eq!(s.query_count(), params.t);
            assert_eq!(s.current_round(), 1);
        }
    }

    #[test]
    fn empty_graph_shrinks_to_nothing() {
        let g = HiddenGraph::empty(8);
        let params = EliminationParams::new(8, 1, 0.5, 0.0, 0.1).unwrap();
        let mut s = OracleSession::round_structured(&g);
        let h = elimination_round(&mut s, &params, Seed::new(3, 0)).unwrap();
        assert_eq!(h.edge_count(), 0);
    }
}
