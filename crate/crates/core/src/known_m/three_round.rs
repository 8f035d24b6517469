//! Three-round Monte Carlo learner with O(m log n + m^{1.5}) queries.
//!
//! Round 1 eliminates with `p = 1/(16√m)`; round 2 estimates, for every
//! `w ∈ W`, how many neighbours `w` has in `I_w`; round 3 learns those
//! neighbours with a query budget sized by the estimate and confirms `U`.

use super::neighbors::NeighborPlan;
use super::pair_queries;
use super::two_round::{bounds_hold, round_one};
use crate::config::{log_count, Ctx};
use crate::error::Result;
use crate::graph::{edge, EdgeSet, VertexSet};
use crate::oracle::{Batch, OracleSession};
use crate::outcome::Outcome;
use crate::rng::PRandomSchedule;

pub const MCTR2: &str = "three-round-mc";

/// `p = 1/(16√m)`, `r = 8√m`.
pub fn params(m: usize) -> (f64, f64) {
    let s = (m.max(1) as f64).sqrt();
    (1.0 / (16.0 * s), 8.0 * s)
}

/// Number of probe levels `q_j = 2^-j`, `j = 0..=⌈log₂ n⌉`.
pub fn probe_levels(n: usize) -> usize {
    n.max(2).next_power_of_two().trailing_zeros() as usize + 1
}

/// Degree probes `Q ∪ {w}`, `Q ⊆ I_w` drawn at halving densities.
#[derive(Clone, Debug)]
pub struct DegreeProbe {
    pub w: usize,
    levels: Vec<Vec<VertexSet>>,
}

impl DegreeProbe {
    pub fn new(
        w: usize,
        set: &VertexSet,
        per_level: usize,
        levels: usize,
        ctx: &Ctx,
        phase: u64,
    ) -> Result<Self> {
        let mut lv = Vec::with_capacity(levels);
        for j in 0..levels {
            let q = 0.5f64.powi(j as i32);
            let sched = PRandomSchedule::new(
                q,
                per_level,
                set.clone(),
                ctx.stream(MCTR2, 1, phase << 8 | j as u64),
            )?;
            lv.push(
                sched
                    .iter()
                    .map(|mut s| {
                        s.insert(w);
                        s
                    })
                    .collect(),
            );
        }
        Ok(DegreeProbe { w, levels: lv })
    }

    pub fn queries(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.levels.iter().flatten().cloned()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `2^j` for the first level whose NO-rate strictly exceeds `1/e`.
    pub fn estimate(&self, answers: &[bool]) -> Option<usize> {
        let mut at = 0;
        for (j, level) in self.levels.iter().enumerate() {
            let a = &answers[at..at + level.len()];
            at += level.len();
            let no = a.iter().filter(|&&x| !x).count() as f64;
            if no * std::f64::consts::E > a.len() as f64 {
                return Some(1 << j);
            }
        }
        None
    }
}

pub fn three_round_mc(session: &mut OracleSession<'_>, m: usize, ctx: &Ctx) -> Result<Outcome> {
    let n = session.n();
    if m == 0 {
        let any = session.ask_round(vec![VertexSet::full(n)])?[0];
        session.ask_round(Vec::new())?;
        session.ask_round(Vec::new())?;
        return Ok(if any {
            Outcome::failed(EdgeSet::new())
        } else {
            Outcome::new(EdgeSet::new())
        });
    }
    let delta = ctx.delta(n);
    let (p, r) = params(m);
    let one = round_one(session, m, p, r, ctx, MCTR2)?;
    let mut ok = bounds_hold(&one.structure, m, r);
    let s = &one.structure;

    // round 2: degree estimates
    let per_level = log_count(ctx.constants.c_probe, n);
    let levels = probe_levels(n);
    let mut batch = Batch::new();
    let mut probes = Vec::new();
    for (i, (&w, iw)) in s.w.iter().zip(&s.independent).enumerate() {
        if iw.is_empty() {
            continue;
        }
        let probe = DegreeProbe::new(w, iw, per_level, levels, ctx, i as u64)?;
        let range = batch.extend(probe.queries());
        probes.push((i, probe, range));
    }
    let answers = batch.run(session)?;

    // round 3: neighbour learning sized by the estimates, plus U
    let mut overflow = 0;
    let mut batch = Batch::new();
    let mut plans = Vec::new();
    for (i, probe, range) in &probes {
        let bound = match probe.estimate(&answers[range.clone()]) {
            Some(est) if est <= 32 * m => (2 * est).min(m),
            _ => {
                overflow += 1;
                m
            }
        };
        let plan = NeighborPlan::new(
            probe.w,
            &s.independent[*i],
            bound,
            delta,
            ctx.stream(MCTR2, 2, *i as u64),
        )?;
        let range = batch.extend(plan.queries());
        plans.push((plan, range));
    }
    let pair_range = batch.extend(pair_queries(n, &s.u));
    let answers = batch.run(session)?;

    let mut edges: EdgeSet =
        s.u.iter()
            .zip(&answers[pair_range])
            .filter_map(|(&e, &a)| a.then_some(e))
            .collect();
    for (plan, range) in &plans {
        for u in plan.decode(&answers[range.clone()]).iter() {
            edges.insert(edge(plan.v, u));
        }
    }
    ok &= overflow == 0;
    let mut out = Outcome::new(edges);
    out.success = ok;
    out.note("survivors", one.h.edge_count() as f64);
    out.note("w", s.w.len() as f64);
    out.note("u", s.u.len() as f64);
    out.note("overflow", overflow as f64);
    Ok(out)
}
