//! Two-round deterministic learning from a covering query family.
//!
//! A family covers `(n, m)` when for every graph `G` with `m` edges and every
//! `m`-set `E′` of non-edges of `G`, some query answers NO on `G` and contains
//! a pair of `E′`. Round 1 asks the family; at most `2m − 1` pairs survive
//! elimination and round 2 asks each of them.
//!
//! The property is checked on graphs with exactly `m` edges. That suffices
//! whenever `C(n, 2) ≥ 2m`: a graph with fewer edges and `m` uncovered
//! non-edges extends, away from those non-edges, to an `m`-edge graph whose
//! NO queries are a subset of the original ones.

use super::disjunct::next_combination;
use super::oneor::binomial;
use crate::candidate::CandidateEdgeSet;
use crate::error::{Error, Result};
use crate::graph::{edge, EdgeSet, VertexSet};
use crate::known_m::confirm_pairs;
use crate::oracle::OracleSession;
use crate::outcome::Outcome;
use crate::rng::{draw_p_random, Seed};

pub const UBDTR: &str = "two-round-deterministic";

/// Enumeration budget for [`verify_covering`], in (graph, pair) checks.
pub const DEFAULT_VERIFY_LIMIT: u128 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Sampled { seed: u64 },
    Constructed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryFamily {
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub queries: Vec<VertexSet>,
    pub provenance: Provenance,
    pub verified: bool,
}

impl QueryFamily {
    /// True when every query is the whole vertex set.
    pub fn is_degenerate(&self) -> bool {
        self.queries.iter().all(|q| q.len() == self.n)
    }

    pub fn seed(&self) -> Option<u64> {
        match self.provenance {
            Provenance::Sampled { seed } => Some(seed),
            Provenance::Constructed => None,
        }
    }
}

/// `⌈c·m²·ln n⌉`, at least 1.
pub fn family_size(n: usize, m: usize, c: f64) -> usize {
    let m = m.max(1) as f64;
    ((c * m * m * (n.max(2) as f64).ln()).ceil() as usize).max(1)
}

/// `t` queries with inclusion probability `1/m`.
pub fn sample_two_round_family(n: usize, m: usize, t: usize, seed: u64) -> Result<QueryFamily> {
    sample_family_with_p(n, m, t, 1.0 / m.max(1) as f64, seed)
}

pub fn sample_family_with_p(
    n: usize,
    m: usize,
    t: usize,
    p: f64,
    seed: u64,
) -> Result<QueryFamily> {
    if t == 0 {
        return Err(Error::pre("family size must be positive"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::pre(format!(
            "inclusion probability {p} outside (0, 1]"
        )));
    }
    let s = Seed::for_phase(seed, UBDTR, 0, 0);
    let domain = VertexSet::full(n);
    let queries = (0..t as u64)
        .map(|i| draw_p_random(s, i, &domain, p))
        .collect();
    Ok(QueryFamily {
        n,
        m,
        p,
        queries,
        provenance: Provenance::Sampled { seed },
        verified: false,
    })
}

/// Every pair as its own query; covers any `(n, m)`.
pub fn all_pairs_family(n: usize, m: usize) -> QueryFamily {
    let mut queries = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            queries.push(VertexSet::from_members(n, [u, v]));
        }
    }
    QueryFamily {
        n,
        m,
        p: 2.0 / n.max(2) as f64,
        queries,
        provenance: Provenance::Constructed,
        verified: false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    Holds,
    Violated { graph: EdgeSet, nonedges: EdgeSet },
}

impl Coverage {
    pub fn holds(&self) -> bool {
        matches!(self, Coverage::Holds)
    }
}

/// Number of (graph, pair) checks [`verify_covering`] performs.
pub fn covering_work(n: usize, m: usize) -> u128 {
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    binomial(pairs, m as u64) * pairs as u128
}

/// Exhaustive check of the covering property; refuses above `limit` checks.
pub fn verify_covering(family: &QueryFamily, limit: u128) -> Result<Coverage> {
    let (n, m) = (family.n, family.m);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    if m == 0 || pairs.len() < 2 * m {
        return Err(Error::pre(format!(
            "covering check needs m ≥ 1 and C(n, 2) ≥ 2m (n = {n}, m = {m})"
        )));
    }
    let count = covering_work(n, m);
    if count > limit {
        return Err(Error::Infeasible {
            what: format!("covering check at n = {n}, m = {m}"),
            count,
            limit,
        });
    }
    let words = family.queries.len().div_ceil(64);
    // contains[e] = bitmask of queries holding both ends of pair e
    let contains: Vec<Vec<u64>> = pairs
        .iter()
        .map(|&(u, v)| {
            let mut mask = vec![0u64; words];
            for (i, q) in family.queries.iter().enumerate() {
                if q.contains(u) && q.contains(v) {
                    mask[i / 64] |= 1 << (i % 64);
                }
            }
            mask
        })
        .collect();
    let mut full = vec![u64::MAX; words];
    if family.queries.len() % 64 != 0 {
        full[words - 1] = (1u64 << (family.queries.len() % 64)) - 1;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    let mut no = vec![0u64; words];
    loop {
        no.copy_from_slice(&full);
        for &e in &idx {
            for (w, c) in no.iter_mut().zip(&contains[e]) {
                *w &= !c;
            }
        }
        let uncovered: Vec<usize> = (0..pairs.len())
            .filter(|f| !idx.contains(f))
            .filter(|&f| contains[f].iter().zip(&no).all(|(c, w)| c & w == 0))
            .take(m)
            .collect();
        if uncovered.len() == m {
            let graph = idx.iter().map(|&e| edge(pairs[e].0, pairs[e].1)).collect();
            let nonedges = uncovered
                .iter()
                .map(|&f| edge(pairs[f].0, pairs[f].1))
                .collect();
            return Ok(Coverage::Violated { graph, nonedges });
        }
        if !next_combination(&mut idx, pairs.len()) {
            return Ok(Coverage::Holds);
        }
    }
}

/// Runs [`verify_covering`] and records the result on the family.
pub fn verify_and_mark(family: &mut QueryFamily, limit: u128) -> Result<Coverage> {
    let c = verify_covering(family, limit)?;
    family.verified = c.holds();
    Ok(c)
}

/// First seed in `seeds` whose sampled family verifies.
pub fn search_verified_family(
    n: usize,
    m: usize,
    t: usize,
    p: f64,
    seeds: impl IntoIterator<Item = u64>,
    limit: u128,
) -> Result<Option<QueryFamily>> {
    for seed in seeds {
        let mut f = sample_family_with_p(n, m, t, p, seed)?;
        if verify_and_mark(&mut f, limit)?.holds() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Round 1: the family; round 2: every surviving pair. Exact for every
/// target with at most `m` edges when the family is verified.
pub fn two_round_deterministic(
    session: &mut OracleSession<'_>,
    family: &QueryFamily,
) -> Result<Outcome> {
    if !family.verified {
        return Err(Error::pre(
            "two-round deterministic learner needs a verified family",
        ));
    }
    if family.n != session.n() {
        return Err(Error::pre(format!(
            "family is for n = {}, target has n = {}",
            family.n,
            session.n()
        )));
    }
    let answers = session.ask_round(family.queries.clone())?;
    let mut h = CandidateEdgeSet::complete(family.n);
    for (q, &a) in family.queries.iter().zip(&answers) {
        if !a {
            h.eliminate_within(q);
        }
    }
    let survivors = h.edges();
    if survivors.len() > 2 * family.m {
        return Err(Error::AlgorithmContract(format!(
            "{} pairs survived a verified family for m = {}",
            survivors.len(),
            family.m
        )));
    }
    let edges = confirm_pairs(session, &survivors)?;
    let mut out = Outcome::new(edges);
    out.note("survivors", survivors.len() as f64);
    Ok(out)
}
