//! Doubling searches for `p*` (global) and `p_u` (per vertex).
//!
//! A sweep asks `t` p-random queries at each `p_i = 2^-i` up to a cap set by
//! the guess `M`, and returns `p_{i0}/2` for the first level whose empirical
//! NO-rate strictly exceeds the threshold (1/2 for `p*`, 1/e for `p_u`).

use std::collections::BTreeMap;

use crate::config::{log_count, Ctx};
use crate::error::Result;
use crate::graph::VertexSet;
use crate::oracle::{Batch, OracleSession};
use crate::rng::{draw_p_random, Seed};

pub const ESTIMATE: &str = "estimate";
pub const ESTIMATE_DEGREE: &str = "estimate-degree";

const MAX_LEVELS: usize = 48;

/// `log^[j] n` in base 2; `log^[0] n = n`, later iterates held at ≥ 2.
pub fn iterated_log(n: usize, j: usize) -> f64 {
    let mut x = n as f64;
    for _ in 0..j {
        x = x.max(1.0).log2();
    }
    if j == 0 {
        x
    } else {
        x.max(2.0)
    }
}

/// Least `j` with `log^[j] n ≤ 2`.
pub fn log_star(n: usize) -> usize {
    let mut x = n as f64;
    let mut j = 0;
    while x > 2.0 {
        x = x.log2();
        j += 1;
    }
    j
}

/// `M_j = (log^[j] n)²` for `j = k−1` down to `0`.
pub fn escalation_bounds(n: usize, k: usize) -> Vec<f64> {
    (0..k.max(1))
        .rev()
        .map(|j| iterated_log(n, j).powi(2))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Estimate {
    Probe(f64),
    /// No level crossed the threshold: the bound `M` is too small.
    Exceeds,
}

impl Estimate {
    pub fn probe(self) -> Option<f64> {
        match self {
            Estimate::Probe(p) => Some(p),
            Estimate::Exceeds => None,
        }
    }
}

/// Levels `i` with `2^i ≤ 2^{2.5}·√M`.
pub fn estimate_levels(m_bound: f64) -> usize {
    let cap = 2f64.powf(2.5) * m_bound.max(1.0).sqrt();
    (0..MAX_LEVELS)
        .take_while(|&i| 2f64.powi(i as i32) <= cap)
        .count()
}

/// Levels `i` with `2^i ≤ 16·M`.
pub fn degree_levels(m_bound: f64) -> usize {
    let cap = 16.0 * m_bound.max(1.0);
    (0..MAX_LEVELS)
        .take_while(|&i| 2f64.powi(i as i32) <= cap)
        .count()
}

/// One level sweep, optionally anchored at a vertex added to every query.
#[derive(Clone, Debug)]
pub struct LevelSweep {
    pub anchor: Option<usize>,
    per_level: usize,
    threshold: f64,
    queries: Vec<VertexSet>,
}

impl LevelSweep {
    fn build(
        n: usize,
        anchor: Option<usize>,
        levels: usize,
        per_level: usize,
        threshold: f64,
        seed: Seed,
    ) -> Self {
        let domain = VertexSet::full(n);
        let mut queries = Vec::with_capacity(levels * per_level);
        for i in 0..levels {
            let p = 0.5f64.powi(i as i32);
            for r in 0..per_level {
                let mut q = draw_p_random(seed, (i * per_level + r) as u64, &domain, p);
                if let Some(u) = anchor {
                    q.insert(u);
                }
                queries.push(q);
            }
        }
        LevelSweep {
            anchor,
            per_level,
            threshold,
            queries,
        }
    }

    /// Sweep for `p*` under the guess `M`.
    pub fn global(n: usize, m_bound: f64, per_level: usize, seed: Seed) -> Self {
        Self::build(n, None, estimate_levels(m_bound), per_level, 0.5, seed)
    }

    /// Sweep for `p_u` under the guess `M`.
    pub fn vertex(n: usize, u: usize, m_bound: f64, per_level: usize, seed: Seed) -> Self {
        let th = (-1.0f64).exp();
        Self::build(n, Some(u), degree_levels(m_bound), per_level, th, seed)
    }

    pub fn queries(&self) -> &[VertexSet] {
        &self.queries
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Empirical NO-rate per level.
    pub fn no_rates(&self, answers: &[bool]) -> Vec<f64> {
        answers
            .chunks(self.per_level)
            .map(|c| c.iter().filter(|&&a| !a).count() as f64 / c.len() as f64)
            .collect()
    }

    pub fn decide(&self, answers: &[bool]) -> Estimate {
        self.no_rates(answers)
            .iter()
            .position(|&r| r > self.threshold)
            .map_or(Estimate::Exceeds, |i| {
                Estimate::Probe(0.5f64.powi(i as i32 + 1))
            })
    }
}

/// One round: the sweep for `p*` under the guess `M`.
pub fn estimate(session: &mut OracleSession<'_>, m_bound: f64, ctx: &Ctx) -> Result<Estimate> {
    let n = session.n();
    let sweep = LevelSweep::global(
        n,
        m_bound,
        log_count(ctx.constants.c_est, n),
        ctx.stream(ESTIMATE, 0, m_bound.to_bits()),
    );
    let answers = session.ask_round(sweep.queries().to_vec())?;
    Ok(sweep.decide(&answers))
}

/// Up to `k` rounds of [`estimate`] with `M = M_{k−1}, …, M_0`; the last
/// always yields a probe (with `M_0 = n²`, a miss would contradict `m < n²`,
/// and the smallest level is then reported).
pub fn k_estimate(session: &mut OracleSession<'_>, k: usize, ctx: &Ctx) -> Result<f64> {
    let n = session.n();
    let per_level = log_count(ctx.constants.c_est, n);
    let bounds = escalation_bounds(n, k);
    for (j, &m_bound) in bounds.iter().enumerate() {
        let sweep = LevelSweep::global(n, m_bound, per_level, ctx.stream(ESTIMATE, j as u64, 0));
        let answers = session.ask_round(sweep.queries().to_vec())?;
        if let Estimate::Probe(p) = sweep.decide(&answers) {
            return Ok(p);
        }
        if j + 1 == bounds.len() {
            return Ok(0.5f64.powi(estimate_levels(m_bound) as i32));
        }
    }
    unreachable!("escalation list is never empty")
}

/// One round: the sweep for `p_u` under the guess `M`.
pub fn estimate_degree(
    session: &mut OracleSession<'_>,
    u: usize,
    m_bound: f64,
    ctx: &Ctx,
) -> Result<Estimate> {
    let n = session.n();
    let sweep = LevelSweep::vertex(
        n,
        u,
        m_bound,
        log_count(ctx.constants.c_deg, n),
        ctx.stream(ESTIMATE_DEGREE, u as u64, m_bound.to_bits()),
    );
    let answers = session.ask_round(sweep.queries().to_vec())?;
    Ok(sweep.decide(&answers))
}

/// [`estimate_degree`] escalated over `M_{k−1}, …, M_0` for every vertex in
/// `us`; each escalation level is one shared round and vertices drop out
/// once they have a probe.
pub fn k_estimate_degree(
    session: &mut OracleSession<'_>,
    us: &[usize],
    k: usize,
    ctx: &Ctx,
) -> Result<BTreeMap<usize, f64>> {
    let n = session.n();
    let per_level = log_count(ctx.constants.c_deg, n);
    let bounds = escalation_bounds(n, k);
    let mut out = BTreeMap::new();
    let mut pending: Vec<usize> = us.to_vec();
    for (j, &m_bound) in bounds.iter().enumerate() {
        if pending.is_empty() {
            break;
        }
        let mut batch = Batch::new();
        let mut sweeps = Vec::new();
        for &u in &pending {
            let s = LevelSweep::vertex(
                n,
                u,
                m_bound,
                per_level,
                ctx.stream(ESTIMATE_DEGREE, j as u64, u as u64),
            );
            let range = batch.extend(s.queries().iter().cloned());
            sweeps.push((s, range));
        }
        let answers = batch.run(session)?;
        let last = j + 1 == bounds.len();
        let mut still = Vec::new();
        for (s, range) in sweeps {
            let u = s.anchor.expect("vertex sweep");
            match s.decide(&answers[range]) {
                Estimate::Probe(p) => {
                    out.insert(u, p);
                }
                Estimate::Exceeds if last => {
                    out.insert(u, 0.5f64.powi(degree_levels(m_bound) as i32));
                }
                Estimate::Exceeds => still.push(u),
            }
        }
        pending = still;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn towers() {
        let n = 1 << 16;
        let b = escalation_bounds(n, 3);
        assert_eq!(b[0], 16.0);
        assert_eq!(b[1], 256.0);
        assert_eq!(b[2], (n as f64).powi(2));
        assert_eq!(log_star(n), 3);
        assert_eq!(log_star(1024), 3);
        assert_eq!(log_star(2), 0);
        assert_eq!(escalation_bounds(100, 1), vec![10_000.0]);
        assert!(iterated_log(4, 5) >= 2.0);
    }

    #[test]
    fn level_counts() {
        // 2^i ≤ 2^2.5 · 4 = 22.6 → i ≤ 4
        assert_eq!(estimate_levels(16.0), 5);
        // 2^i ≤ 16 → i ≤ 4
        assert_eq!(degree_levels(1.0), 5);
    }

    #[test]
    fn empty_graph_probes_at_the_first_level() {
        let g = HiddenGraph::empty(32);
        let mut s = OracleSession::round_structured(&g);
        assert_eq!(
            estimate(&mut s, 16.0, &Ctx::new(1)).unwrap(),
            Estimate::Probe(0.5)
        );
    }

    #[test]
    fn escalation_stops_at_first_probe() {
        let g = HiddenGraph::new(64, [(0, 1)]).unwrap();
        let mut s = OracleSession::round_structured(&g);
        let p = k_estimate(&mut s, 3, &Ctx::new(4)).unwrap();
        assert!(p > 0.0 && p <= 0.5);
        assert_eq!(s.current_round(), 1);
        let mut s = OracleSession::round_structured(&g);
        let probes = k_estimate_degree(&mut s, &[0, 5], 2, &Ctx::new(4)).unwrap();
        assert_eq!(probes.len(), 2);
        assert_eq!(s.current_round(), 1);
    }
}
