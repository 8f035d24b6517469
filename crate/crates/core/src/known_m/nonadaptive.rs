//! One-round Monte Carlo learner and its two-round Las Vegas completion.

use super::confirm_pairs;
use super::elimination::{elimination_round, EliminationParams};
use crate::candidate::CandidateEdgeSet;
use crate::config::Ctx;
use crate::error::Result;
use crate::graph::{EdgeSet, VertexSet};
use crate::oracle::OracleSession;
use crate::outcome::Outcome;

pub const NAMC: &str = "non-adaptive-mc";
pub const LV_TWO_ROUND: &str = "lv-two-round";

/// `p = 1/(2m)`, `r = m`.
pub fn namc_params(n: usize, m: usize, delta: f64) -> Result<EliminationParams> {
    let m = m.max(1);
    EliminationParams::new(n, m, 1.0 / (2.0 * m as f64), m as f64, delta)
}

/// Query count of [`non_adaptive_mc`]; fixed by `(n, m, δ)`.
pub fn non_adaptive_mc_queries(n: usize, m: usize, delta: f64) -> Result<usize> {
    if m == 0 {
        return Ok(1);
    }
    Ok(namc_params(n, m, delta)?.t)
}

pub fn non_adaptive_mc(session: &mut OracleSession<'_>, m: usize, ctx: &Ctx) -> Result<Outcome> {
    let n = session.n();
    if m == 0 {
        let any = session.ask_round(vec![VertexSet::full(n)])?;
        // a YES means the promised bound was wrong
        return Ok(if any[0] {
            Outcome::failed(EdgeSet::new())
        } else {
            Outcome::new(EdgeSet::new())
        });
    }
    let params = namc_params(n, m, ctx.delta(n))?;
    let h = elimination_round(session, &params, ctx.stream(NAMC, 0, 0))?;
    let mut out = Outcome::new(h.edges());
    out.note("survivors", h.edge_count() as f64);
    Ok(out)
}

/// Survivor count above which the Las Vegas learner redraws round 1.
pub fn lv_restart_threshold(m: usize) -> usize {
    2 * (m + 1)
}

/// Round 1 of [`non_adaptive_mc`], redrawn with fresh seeds while too many
/// pairs survive, then one pair query per survivor.
pub fn las_vegas_two_round(
    session: &mut OracleSession<'_>,
    m: usize,
    ctx: &Ctx,
) -> Result<Outcome> {
    let n = session.n();
    if m == 0 {
        let any = session.ask_round(vec![VertexSet::full(n)])?;
        let h = if any[0] {
            CandidateEdgeSet::complete(n)
        } else {
            CandidateEdgeSet::empty(n)
        };
        let edges = confirm_pairs(session, &h.edges())?;
        let mut out = Outcome::new(edges);
        out.note("survivors", h.edge_count() as f64);
        return Ok(out);
    }
    let params = namc_params(n, m, ctx.delta(n))?;
    let mut restarts = 0;
    let h = loop {
        let c = ctx.restart(restarts);
        let h = elimination_round(session, &params, c.stream(LV_TWO_ROUND, 0, 0))?;
        if h.edge_count() <= lv_restart_threshold(m) || restarts >= ctx.constants.max_restarts {
            break h;
        }
        restarts += 1;
    };
    let survivors = h.edges();
    let edges = confirm_pairs(session, &survivors)?;
    let mut out = Outcome::new(edges);
    out.restarts = restarts;
    out.note("survivors", survivors.len() as f64);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn query_count_matches_closed_form() {
        assert_eq!(non_adaptive_mc_queries(16, 1, 0.1).unwrap(), 126);
        let g = HiddenGraph::new(16, [(3, 9)]).unwrap();
        let mut s = OracleSession::round_structured(&g);
        let out = non_adaptive_mc(&mut s, 1, &Ctx::new(1).with_delta(0.1)).unwrap();
        assert_eq!(s.query_count(), 126);
        assert!(out.edges.contains(&(3, 9)));
    }

    #[test]
    fn zero_bound_uses_one_query() {
        let g = HiddenGraph::empty(10);
        let mut s = OracleSession::round_structured(&g);
        let out = non_adaptive_mc(&mut s, 0, &Ctx::new(0)).unwrap();
        assert!(out.success && out.edges.is_empty());
        assert_eq!(s.query_count(), 1);
        let g = HiddenGraph::new(10, [(0, 1)]).unwrap();
        let mut s = OracleSession::round_structured(&g);
        assert!(!non_adaptive_mc(&mut s, 0, &Ctx::new(0)).unwrap().success);
        let mut s = OracleSession::round_structured(&g);
        let out = las_vegas_two_round(&mut s, 0, &Ctx::new(0)).unwrap();
        assert_eq!(out.edges, g.edge_set());
    }

    #[test]
    fn las_vegas_is_exact_even_with_a_loose_bound() {
        let g = HiddenGraph::new(32, [(0, 1), (0, 2), (5, 9)]).unwrap();
        for seed in 0..10 {
            let mut s = OracleSession::round_structured(&g);
            let out = las_vegas_two_round(&mut s, 6, &Ctx::new(seed)).unwrap();
            assert_eq!(out.edges, g.edge_set());
            assert_eq!(s.current_round() as u32, 2 + out.restarts);
        }
    }
}
