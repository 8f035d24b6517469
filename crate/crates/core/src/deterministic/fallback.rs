//! Deterministic one-round learner used as the Las Vegas fallback.
//!
//! Built from a polynomial code with `q^k ≥ n` and length `L = 2m(k−1)+1`:
//! for every position `i` and symbol pair `a ≤ b`, query the vertices whose
//! symbol at `i` is `a` or `b`. For a non-edge `{x, y}` each of the `m` edges
//! has an endpoint outside `{x, y}` that shares a symbol with `x` or `y` in at
//! most `2(k−1)` positions, so some position yields a query holding `x, y` and
//! no edge. Eliminating every pair inside a NO query therefore leaves exactly
//! `E`. When all `C(n, 2)` pair queries are cheaper, those are used instead.

use super::code::{is_prime, min_base, next_prime, PolyCode};
use crate::candidate::CandidateEdgeSet;
use crate::error::Result;
use crate::graph::{EdgeSet, VertexSet};
use crate::oracle::OracleSession;
use crate::outcome::Outcome;

pub const FALLBACK: &str = "nonadaptive-fallback";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FallbackShape {
    AllPairs,
    Code { q: usize, k: usize, len: usize },
}

impl FallbackShape {
    pub fn query_count(&self, n: usize) -> usize {
        match *self {
            FallbackShape::AllPairs => n * n.saturating_sub(1) / 2,
            FallbackShape::Code { q, len, .. } => len * q * (q + 1) / 2,
        }
    }
}

/// Cheapest construction for `(n, m)`.
pub fn fallback_shape(n: usize, m: usize) -> FallbackShape {
    let m = m.max(1);
    let mut best = FallbackShape::AllPairs;
    let mut best_cost = best.query_count(n);
    let max_k = (usize::BITS - n.max(2).leading_zeros()) as usize;
    for k in 2..=max_k {
        let len = 2 * m * (k - 1) + 1;
        let q = next_prime(min_base(n, k).max(len));
        debug_assert!(is_prime(q));
        let shape = FallbackShape::Code { q, k, len };
        let cost = shape.query_count(n);
        if cost < best_cost {
            best = shape;
            best_cost = cost;
        }
    }
    best
}

pub fn fallback_queries(n: usize, m: usize) -> Result<Vec<VertexSet>> {
    Ok(match fallback_shape(n, m) {
        FallbackShape::AllPairs => {
            let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for u in 0..n {
                for v in u + 1..n {
                    out.push(VertexSet::from_members(n, [u, v]));
                }
            }
            out
        }
        FallbackShape::Code { q, k, len } => {
            let code = PolyCode::new(q, k, len)?;
            let mut out = Vec::with_capacity(len * q * (q + 1) / 2);
            for i in 0..len {
                let mut by_symbol = vec![VertexSet::empty(n); q];
                for v in 0..n {
                    by_symbol[code.symbol(v, i)].insert(v);
                }
                for a in 0..q {
                    for b in a..q {
                        out.push(by_symbol[a].union(&by_symbol[b]));
                    }
                }
            }
            out
        }
    })
}

/// Pairs never seen inside a NO query.
pub fn decode(n: usize, queries: &[VertexSet], answers: &[bool]) -> EdgeSet {
    let mut h = CandidateEdgeSet::complete(n);
    for (q, &a) in queries.iter().zip(answers) {
        if !a {
            h.eliminate_within(q);
        }
    }
    h.edges()
}

/// One round; exact whenever the target has at most `m` edges.
pub fn nonadaptive_fallback(session: &mut OracleSession<'_>, m: usize) -> Result<Outcome> {
    let n = session.n();
    let queries = fallback_queries(n, m)?;
    let answers = session.ask_round(queries.clone())?;
    Ok(Outcome::new(decode(n, &queries, &answers)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn shapes() {
        assert_eq!(
            fallback_shape(2048, 2),
            FallbackShape::Code {
                q: 13,
                k: 3,
                len: 9
            }
        );
        assert_eq!(fallback_shape(2048, 2).query_count(2048), 819);
        assert_eq!(
            fallback_shape(8, 1),
            FallbackShape::Code { q: 3, k: 2, len: 3 }
        );
        assert_eq!(fallback_shape(4, 3), FallbackShape::AllPairs);
    }

    #[test]
    fn single_edges_on_eight_vertices() {
        let queries = fallback_queries(8, 1).unwrap();
        for u in 0..8 {
            for v in u + 1..8 {
                let g = HiddenGraph::new(8, [(u, v)]).unwrap();
                let answers: Vec<bool> = queries.iter().map(|q| g.answer(q)).collect();
                assert_eq!(decode(8, &queries, &answers), g.edge_set());
            }
        }
    }

    #[test]
    fn exact_on_every_two_edge_graph_n9() {
        // n = 9 is small enough to enumerate every graph with ≤ 2 edges
        let n = 9;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let queries = fallback_queries(n, 2).unwrap();
        let mut graphs = vec![vec![]];
        for (i, &a) in pairs.iter().enumerate() {
            graphs.push(vec![a]);
            for &b in &pairs[i + 1..] {
                graphs.push(vec![a, b]);
            }
        }
        for edges in graphs {
            let g = HiddenGraph::new(n, edges).unwrap();
            let answers: Vec<bool> = queries.iter().map(|q| g.answer(q)).collect();
            assert_eq!(decode(n, &queries, &answers), g.edge_set());
        }
    }

    #[test]
    fn code_construction_is_exact_on_a_sample() {
        let n = 300;
        let shape = fallback_shape(n, 2);
        assert!(matches!(shape, FallbackShape::Code { .. }));
        let g = HiddenGraph::new(n, [(0, 1), (1, 299)]).unwrap();
        let mut s = OracleSession::round_structured(&g);
        let out = nonadaptive_fallback(&mut s, 2).unwrap();
        assert_eq!(out.edges, g.edge_set());
        assert_eq!(s.query_count(), shape.query_count(n));
        let e = HiddenGraph::empty(n);
        let mut s = OracleSession::round_structured(&e);
        assert!(nonadaptive_fallback(&mut s, 2).unwrap().edges.is_empty());
    }
}
