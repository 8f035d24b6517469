//! End-to-end learners for an unknown edge count.
//!
//! Rounds: estimate `p*` (with a whole-set query riding along in the first
//! round), split, estimate the degrees of the heavy side, find their edges,
//! and verify. Every pair that was never eliminated is a candidate, so the
//! hypothesis always contains the target; the verification round removes
//! whatever is not an edge, which makes the output exact on every run. When
//! the hypothesis is large the verification round uses the non-adaptive
//! fallback with `m = |hypothesis|` instead of pair queries.

use super::estimate::{
    escalation_bounds, estimate_levels, k_estimate_degree, log_star, Estimate, LevelSweep, ESTIMATE,
};
use super::split::{find_edges, split_decode, split_queries, split_t, SPLIT};
use crate::candidate::CandidateEdgeSet;
use crate::config::{log_count, Ctx};
use crate::deterministic::fallback::{decode as fallback_decode, fallback_queries, fallback_shape};
use crate::error::Result;
use crate::graph::{EdgeSet, VertexSet};
use crate::known_m::{confirm_pairs, pair_queries};
use crate::oracle::{Batch, OracleSession};
use crate::outcome::Outcome;

pub const SFR: &str = "unknown-m-k-rounds";
pub const SSR: &str = "unknown-m-log-star";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineMode {
    /// Escalation over `k` bounds for both estimators.
    Rounds(usize),
    /// `k = log* n`.
    LogStar,
}

impl PipelineMode {
    pub fn k(self, n: usize) -> usize {
        match self {
            PipelineMode::Rounds(k) => k.max(1),
            PipelineMode::LogStar => log_star(n).max(1),
        }
    }

    /// Worst-case rounds: `k` + split + `k` + find + verify.
    pub fn max_rounds(self, n: usize) -> usize {
        2 * self.k(n) + 3
    }
}

/// Estimation rounds; the first also asks `V`. `None` when `V` is a NO.
fn estimate_with_short_circuit(
    session: &mut OracleSession<'_>,
    k: usize,
    ctx: &Ctx,
) -> Result<Option<f64>> {
    let n = session.n();
    let per_level = log_count(ctx.constants.c_est, n);
    let bounds = escalation_bounds(n, k);
    for (j, &m_bound) in bounds.iter().enumerate() {
        let sweep = LevelSweep::global(n, m_bound, per_level, ctx.stream(ESTIMATE, j as u64, 0));
        let mut batch = Batch::new();
        let whole = (j == 0).then(|| batch.push(VertexSet::full(n)));
        let range = batch.extend(sweep.queries().iter().cloned());
        let answers = batch.run(session)?;
        if let Some(i) = whole {
            if !answers[i] {
                return Ok(None);
            }
        }
        if let Estimate::Probe(p) = sweep.decide(&answers[range]) {
            return Ok(Some(p));
        }
        if j + 1 == bounds.len() {
            return Ok(Some(0.5f64.powi(estimate_levels(m_bound) as i32)));
        }
    }
    unreachable!("escalation list is never empty")
}

/// Final round: confirm the hypothesis pairwise, or run the fallback when
/// that is cheaper. Returns the exact edge set and whether the fallback ran.
fn verify(session: &mut OracleSession<'_>, hypothesis: &EdgeSet) -> Result<(EdgeSet, bool)> {
    let n = session.n();
    let shape = fallback_shape(n, hypothesis.len().max(1));
    if hypothesis.len() <= shape.query_count(n) {
        return Ok((confirm_pairs(session, hypothesis)?, false));
    }
    let queries = fallback_queries(n, hypothesis.len())?;
    let answers = session.ask_round(queries.clone())?;
    Ok((fallback_decode(n, &queries, &answers), true))
}

pub fn pipeline_unknown_m(
    session: &mut OracleSession<'_>,
    mode: PipelineMode,
    ctx: &Ctx,
) -> Result<Outcome> {
    let n = session.n();
    let k = mode.k(n);
    let Some(p) = estimate_with_short_circuit(session, k, ctx)? else {
        let mut out = Outcome::new(EdgeSet::new());
        out.note("empty", 1.0);
        return Ok(out);
    };

    let total_pairs = n * (n - 1) / 2;
    let t = split_t(n, p, ctx.constants.c_split);
    let (h, v1) = if t >= total_pairs {
        (CandidateEdgeSet::complete(n), Vec::new())
    } else {
        let queries = split_queries(n, p, t, ctx.stream(SPLIT, 0, 0))?;
        let answers = session.ask_round(queries.clone())?;
        let s = split_decode(n, p, &queries, &answers);
        (s.h, s.v1)
    };
    let mut h = h;

    if !v1.is_empty() {
        let probes = k_estimate_degree(session, &v1, k, ctx)?;
        find_edges(session, &mut h, &probes, ctx)?;
    }

    let hypothesis = h.edges();
    let (edges, used_fallback) = verify(session, &hypothesis)?;
    let rejected = hypothesis.len() - edges.len().min(hypothesis.len());
    let mut out = Outcome::new(edges);
    out.fallback = used_fallback || rejected > 0;
    out.note("p_estimate", p);
    out.note(
        "split_queries",
        if t >= total_pairs { 0.0 } else { t as f64 },
    );
    out.note("v1", v1.len() as f64);
    out.note("hypothesis", hypothesis.len() as f64);
    out.note("rejected", rejected as f64);
    out.note("rs_fallback", f64::from(u8::from(used_fallback)));
    Ok(out)
}

/// Baseline: every pair in one round.
pub fn all_pairs(session: &mut OracleSession<'_>) -> Result<EdgeSet> {
    let n = session.n();
    let pairs = CandidateEdgeSet::complete(n).edges();
    let answers = session.ask_round(pair_queries(n, &pairs))?;
    Ok(pairs
        .into_iter()
        .zip(answers)
        .filter_map(|(e, a)| a.then_some(e))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn empty_graph_short_circuits() {
        let g = HiddenGraph::empty(64);
        let mut s = OracleSession::round_structured(&g);
        let out = pipeline_unknown_m(&mut s, PipelineMode::LogStar, &Ctx::new(0)).unwrap();
        assert!(out.edges.is_empty());
        assert_eq!(s.current_round(), 1);
    }

    #[test]
    fn recovers_a_star_plus_matching() {
        let n = 256;
        let mut edges: Vec<(usize, usize)> = (1..=20).map(|j| (0, j)).collect();
        edges.extend([(100, 101), (102, 103), (104, 105)]);
        let g = HiddenGraph::new(n, edges).unwrap();
        for seed in 0..4 {
            for mode in [PipelineMode::LogStar, PipelineMode::Rounds(2)] {
                let mut s = OracleSession::round_structured(&g);
                let out = pipeline_unknown_m(&mut s, mode, &Ctx::new(seed)).unwrap();
                assert_eq!(out.edges, g.edge_set());
                assert!(s.current_round() <= mode.max_rounds(n));
            }
        }
    }
}
