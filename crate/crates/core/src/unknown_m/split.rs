//! Split and FindEdges: the two elimination rounds of the unknown-m learner.

use std::collections::BTreeMap;

use crate::candidate::CandidateEdgeSet;
use crate::config::Ctx;
use crate::error::Result;
use crate::graph::VertexSet;
use crate::oracle::{Batch, OracleSession};
use crate::rng::{PRandomSchedule, Seed};

pub const SPLIT: &str = "split";
pub const FIND_EDGES: &str = "find-edges";

/// `⌈c · (1/p')² · ln n⌉`.
pub fn split_t(n: usize, p: f64, c: f64) -> usize {
    ((c * (n.max(2) as f64).ln() / (p * p)).ceil() as usize).max(1)
}

/// `⌈c · (1/p'_u) · ln n⌉`.
pub fn find_t(n: usize, p: f64, c: f64) -> usize {
    ((c * (n.max(2) as f64).ln() / p).ceil() as usize).max(1)
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    pub h: CandidateEdgeSet,
    /// Vertices with `deg_H ≥ 3/p'`.
    pub v1: Vec<usize>,
    pub v2: VertexSet,
    pub t: usize,
}

pub fn split_queries(n: usize, p: f64, t: usize, seed: Seed) -> Result<Vec<VertexSet>> {
    Ok(PRandomSchedule::new(p, t, VertexSet::full(n), seed)?
        .iter()
        .collect())
}

pub fn split_decode(n: usize, p: f64, queries: &[VertexSet], answers: &[bool]) -> SplitResult {
    let mut h = CandidateEdgeSet::complete(n);
    for (q, &a) in queries.iter().zip(answers) {
        if !a {
            h.eliminate_within(q);
        }
    }
    let threshold = 3.0 / p;
    let v1: Vec<usize> = (0..n)
        .filter(|&u| h.degree(u) as f64 >= threshold)
        .collect();
    let mut v2 = VertexSet::full(n);
    for &u in &v1 {
        v2.remove(u);
    }
    SplitResult {
        h,
        v1,
        v2,
        t: queries.len(),
    }
}

/// One round of `⌈c_split (1/p')² ln n⌉` p'-random queries.
pub fn split(session: &mut OracleSession<'_>, p: f64, ctx: &Ctx) -> Result<SplitResult> {
    let n = session.n();
    let t = split_t(n, p, ctx.constants.c_split);
    let queries = split_queries(n, p, t, ctx.stream(SPLIT, 0, 0))?;
    let answers = session.ask_round(queries.clone())?;
    Ok(split_decode(n, p, &queries, &answers))
}

/// One round: for each `u` with probe `p'_u`, `⌈c_find (1/p'_u) ln n⌉`
/// queries `Q ∪ {u}`; a NO removes every pair inside `Q ∪ {u}`. When that
/// count reaches the number of pairs still open at `u`, those pairs are
/// asked one by one instead.
pub fn find_edges(
    session: &mut OracleSession<'_>,
    h: &mut CandidateEdgeSet,
    probes: &BTreeMap<usize, f64>,
    ctx: &Ctx,
) -> Result<usize> {
    let n = session.n();
    let mut batch = Batch::new();
    let mut plans = Vec::new();
    for (&u, &p) in probes {
        let t = find_t(n, p, ctx.constants.c_find);
        let open = h.neighbours(u);
        // Asking each remaining partner alone is cheaper and exact.
        let draws: Vec<VertexSet> = if t >= open.len() {
            open.iter()
                .map(|v| VertexSet::from_members(n, [v]))
                .collect()
        } else {
            let seed = ctx.stream(FIND_EDGES, 0, u as u64);
            PRandomSchedule::new(p, t, VertexSet::full(n), seed)?
                .iter()
                .collect()
        };
        let range = batch.extend(draws.iter().map(|q| {
            let mut q = q.clone();
            q.insert(u);
            q
        }));
        plans.push((u, draws, range));
    }
    let total = batch.len();
    let answers = batch.run(session)?;
    for (u, draws, range) in plans {
        for (q, &a) in draws.iter().zip(&answers[range]) {
            if !a {
                h.eliminate_star(u, q);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn edges_are_never_eliminated() {
        let g = HiddenGraph::new(40, [(0, 1), (2, 3), (0, 5)]).unwrap();
        for seed in 0..5 {
            let mut s = OracleSession::round_structured(&g);
            let out = split(&mut s, 0.3, &Ctx::new(seed)).unwrap();
            for &(u, v) in g.edges() {
                assert!(out.h.contains(u, v));
            }
        }
    }

    #[test]
    fn star_centre_lands_in_v1() {
        let n = 512;
        let g = HiddenGraph::new(n, (1..=64).map(|j| (0, j))).unwrap();
        let mut s = OracleSession::round_structured(&g);
        let out = split(&mut s, 1.0 / 16.0, &Ctx::new(2)).unwrap();
        assert!(out.v1.contains(&0));
        assert!(!out.h.contains(1, 2));
        let mut h = out.h.clone();
        let probes = BTreeMap::from([(0usize, 1.0 / 128.0)]);
        let mut s = OracleSession::round_structured(&g);
        find_edges(&mut s, &mut h, &probes, &Ctx::new(2)).unwrap();
        assert_eq!(h.neighbours(0), VertexSet::from_members(n, 1..=64));
    }
}
