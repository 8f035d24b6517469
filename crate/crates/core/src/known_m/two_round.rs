//! Two-round Monte Carlo learner with O(m^{4/3} log n) queries, and the
//! three-round Las Vegas variant that confirms its neighbour-learned edges.

use super::elimination::{elimination_round, EliminationParams};
use super::neighbors::NeighborPlan;
use super::structure::{classify_structure, Structure};
use super::{confirm_pairs, pair_queries};
use crate::candidate::CandidateEdgeSet;
use crate::config::Ctx;
use crate::error::Result;
use crate::graph::{edge, EdgeSet, VertexSet};
use crate::oracle::{Batch, OracleSession};
use crate::outcome::Outcome;

pub const MCTR: &str = "two-round-mc";
pub const MCTR_LV: &str = "three-round-lv";

/// `p = m^{-2/3}`, `r = m^{2/3}/2` as stated; only valid once
/// `1 − rp − mp² > 0`, which fails for small `m`.
pub fn nominal_params(m: usize) -> (f64, f64) {
    let p = (m.max(1) as f64).powf(-2.0 / 3.0);
    (p, 1.0 / (2.0 * p))
}

/// [`nominal_params`] with `p` capped at `1/(2√m)` and `r = 1/(2p)`, which
/// keeps `1 − rp − mp² ≥ 1/4`.
pub fn params(m: usize) -> (f64, f64) {
    let m = m.max(1) as f64;
    let p = m.powf(-2.0 / 3.0).min(1.0 / (2.0 * m.sqrt()));
    (p, 1.0 / (2.0 * p))
}

/// Checkable consequences of a successful round 1: `|W| ≤ 8m/r` and
/// `|U| ≤ m + 8m²/r`.
pub fn bounds_hold(structure: &Structure, m: usize, r: f64) -> bool {
    let m = m as f64;
    structure.w.len() as f64 <= 8.0 * m / r && structure.u.len() as f64 <= m + 8.0 * m * m / r
}

pub(crate) struct RoundOne {
    pub h: CandidateEdgeSet,
    pub structure: Structure,
    pub r: f64,
}

pub(crate) fn round_one(
    session: &mut OracleSession<'_>,
    m: usize,
    p: f64,
    r: f64,
    ctx: &Ctx,
    alg: &str,
) -> Result<RoundOne> {
    let n = session.n();
    let params = EliminationParams::new(n, m, p, r, ctx.delta(n))?;
    let h = elimination_round(session, &params, ctx.stream(alg, 0, 0))?;
    let structure = classify_structure(&h, r);
    Ok(RoundOne { h, structure, r })
}

/// Edges found in round 2, split by how they were found.
struct RoundTwo {
    learned: EdgeSet,
    confirmed: EdgeSet,
}

fn round_two(
    session: &mut OracleSession<'_>,
    one: &RoundOne,
    m: usize,
    ctx: &Ctx,
    alg: &str,
) -> Result<RoundTwo> {
    let n = session.n();
    let delta = ctx.delta(n);
    let mut batch = Batch::new();
    let mut plans = Vec::new();
    for (i, (&w, iw)) in one
        .structure
        .w
        .iter()
        .zip(&one.structure.independent)
        .enumerate()
    {
        let plan = NeighborPlan::new(w, iw, m, delta, ctx.stream(alg, 1, i as u64))?;
        let range = batch.extend(plan.queries());
        plans.push((plan, range));
    }
    let pair_range = batch.extend(pair_queries(n, &one.structure.u));
    let answers = batch.run(session)?;
    let mut learned = EdgeSet::new();
    for (plan, range) in &plans {
        for u in plan.decode(&answers[range.clone()]).iter() {
            learned.insert(edge(plan.v, u));
        }
    }
    let confirmed = one
        .structure
        .u
        .iter()
        .zip(&answers[pair_range])
        .filter_map(|(&e, &a)| a.then_some(e))
        .collect();
    Ok(RoundTwo { learned, confirmed })
}

fn degenerate_zero(session: &mut OracleSession<'_>, rounds: usize) -> Result<Outcome> {
    let n = session.n();
    let any = session.ask_round(vec![VertexSet::full(n)])?[0];
    for _ in 1..rounds {
        session.ask_round(Vec::new())?;
    }
    Ok(if any {
        Outcome::failed(EdgeSet::new())
    } else {
        Outcome::new(EdgeSet::new())
    })
}

fn annotate(out: &mut Outcome, one: &RoundOne) {
    out.note("survivors", one.h.edge_count() as f64);
    out.note("w", one.structure.w.len() as f64);
    out.note("u", one.structure.u.len() as f64);
    out.note("r", one.r);
}

pub fn two_round_mc(session: &mut OracleSession<'_>, m: usize, ctx: &Ctx) -> Result<Outcome> {
    if m == 0 {
        return degenerate_zero(session, 2);
    }
    let (p, r) = params(m);
    let one = round_one(session, m, p, r, ctx, MCTR)?;
    let ok = bounds_hold(&one.structure, m, r);
    let two = round_two(session, &one, m, ctx, MCTR)?;
    let mut out = Outcome::new(two.learned.union(&two.confirmed).copied().collect());
    out.success = ok;
    annotate(&mut out, &one);
    Ok(out)
}

/// The two-round learner followed by a round of pair queries over every
/// neighbour-learned edge. Always exact.
pub fn three_round_lv(session: &mut OracleSession<'_>, m: usize, ctx: &Ctx) -> Result<Outcome> {
    let n = session.n();
    if m == 0 {
        let any = session.ask_round(vec![VertexSet::full(n)])?[0];
        let all = if any {
            CandidateEdgeSet::complete(n).edges()
        } else {
            EdgeSet::new()
        };
        let edges = confirm_pairs(session, &all)?;
        session.ask_round(Vec::new())?;
        return Ok(Outcome::new(edges));
    }
    let (p, r) = params(m);
    let one = round_one(session, m, p, r, ctx, MCTR_LV)?;
    let two = round_two(session, &one, m, ctx, MCTR_LV)?;
    let learned = confirm_pairs(session, &two.learned)?;
    let mut out = Outcome::new(learned.union(&two.confirmed).copied().collect());
    out.note(
        "bounds_violated",
        f64::from(u8::from(!bounds_hold(&one.structure, m, r))),
    );
    out.note("rejected", (two.learned.len() - learned.len()) as f64);
    annotate(&mut out, &one);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn parameters() {
        let (p, r) = nominal_params(8);
        assert!((p - 0.25).abs() < 1e-12 && (r - 2.0).abs() < 1e-12);
        for m in 1..200 {
            let (p, r) = params(m);
            let slack = 1.0 - r * p - m as f64 * p * p;
            assert!(slack >= 0.25 - 1e-12, "m={m}");
        }
        // large m: the cap is inactive
        let (p, _) = params(4096);
        assert!((p - 4096f64.powf(-2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn recovers_a_triangle() {
        let g = HiddenGraph::new(64, [(0, 1), (1, 2), (0, 2)]).unwrap();
        for seed in 0..5 {
            let mut s = OracleSession::round_structured(&g);
            let out = two_round_mc(&mut s, 3, &Ctx::new(seed)).unwrap();
            assert_eq!(out.edges, g.edge_set());
            assert_eq!(s.current_round(), 2);
        }
    }

    #[test]
    fn las_vegas_variant_on_a_star() {
        let g = HiddenGraph::new(64, (1..=8).map(|j| (0, j))).unwrap();
        for seed in 0..5 {
            let mut s = OracleSession::round_structured(&g);
            let out = three_round_lv(&mut s, 8, &Ctx::new(seed)).unwrap();
            assert_eq!(out.edges, g.edge_set());
            assert_eq!(s.current_round(), 3);
        }
    }
}
