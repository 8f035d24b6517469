//! Algorithm ids, their round budgets, and a single entry point to run one.

use std::path::Path;

use crate::config::Ctx;
use crate::deterministic::cache::cached_family;
use crate::deterministic::fallback::{fallback_shape, nonadaptive_fallback, FALLBACK};
use crate::deterministic::family::{
    family_size, search_verified_family, two_round_deterministic, DEFAULT_VERIFY_LIMIT, UBDTR,
};
use crate::deterministic::five_round::{five_round_deterministic, DDDDD};
use crate::error::{Error, Result};
use crate::known_m::large_n::{LVTRN, MCTRN};
use crate::known_m::nonadaptive::{non_adaptive_mc_queries, LV_TWO_ROUND, NAMC};
use crate::known_m::three_round::MCTR2;
use crate::known_m::two_round::{MCTR, MCTR_LV};
use crate::known_m::{
    las_vegas_two_round, non_adaptive_mc, three_round_lv, three_round_lv_large_n, three_round_mc,
    two_round_large_n, two_round_mc,
};
use crate::oracle::OracleSession;
use crate::outcome::Outcome;
use crate::unknown_m::pipeline::{all_pairs, SFR, SSR};
use crate::unknown_m::{pipeline_unknown_m, PipelineMode};

pub const BRUTE_FORCE: &str = "brute-force";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundBudget {
    Exactly(usize),
    AtMost(usize),
    /// Las Vegas learners whose restarts add rounds.
    Unbounded,
}

impl RoundBudget {
    pub fn admits(self, rounds: usize) -> bool {
        match self {
            RoundBudget::Exactly(k) => rounds == k,
            RoundBudget::AtMost(k) => rounds <= k,
            RoundBudget::Unbounded => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgorithmInfo {
    pub id: &'static str,
    pub needs_m: bool,
    pub las_vegas: bool,
}

pub const ALGORITHMS: &[AlgorithmInfo] = &[
    AlgorithmInfo {
        id: NAMC,
        needs_m: true,
        las_vegas: false,
    },
    AlgorithmInfo {
        id: LV_TWO_ROUND,
        needs_m: true,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: MCTR,
        needs_m: true,
        las_vegas: false,
    },
    AlgorithmInfo {
        id: MCTR_LV,
        needs_m: true,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: MCTR2,
        needs_m: true,
        las_vegas: false,
    },
    AlgorithmInfo {
        id: MCTRN,
        needs_m: true,
        las_vegas: false,
    },
    AlgorithmInfo {
        id: LVTRN,
        needs_m: true,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: UBDTR,
        needs_m: true,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: DDDDD,
        needs_m: true,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: FALLBACK,
        needs_m: true,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: SFR,
        needs_m: false,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: SSR,
        needs_m: false,
        las_vegas: true,
    },
    AlgorithmInfo {
        id: BRUTE_FORCE,
        needs_m: false,
        las_vegas: true,
    },
];

pub fn algorithm(id: &str) -> Result<AlgorithmInfo> {
    ALGORITHMS
        .iter()
        .copied()
        .find(|a| a.id == id)
        .ok_or_else(|| {
            let known: Vec<&str> = ALGORITHMS.iter().map(|a| a.id).collect();
            Error::pre(format!(
                "unknown algorithm `{id}`; known: {}",
                known.join(", ")
            ))
        })
}

/// Options beyond `(m, ctx)` that some learners take.
#[derive(Clone, Debug, Default)]
pub struct RunOptions<'a> {
    /// Escalation depth for the k-round unknown-m learner.
    pub rounds: Option<usize>,
    /// Collision parameter of the large-n two-round learner; default `4m`.
    pub w: Option<usize>,
    /// Where verified two-round families are cached.
    pub cache_dir: Option<&'a Path>,
}

pub fn round_budget(id: &str, n: usize, opts: &RunOptions<'_>) -> Result<RoundBudget> {
    Ok(match id {
        NAMC | FALLBACK | BRUTE_FORCE => RoundBudget::Exactly(1),
        MCTR | UBDTR | MCTRN => RoundBudget::Exactly(2),
        MCTR_LV | MCTR2 => RoundBudget::Exactly(3),
        DDDDD => RoundBudget::Exactly(5),
        LVTRN => RoundBudget::AtMost(3),
        LV_TWO_ROUND => RoundBudget::Unbounded,
        SFR => RoundBudget::AtMost(PipelineMode::Rounds(opts.rounds.unwrap_or(2)).max_rounds(n)),
        SSR => RoundBudget::AtMost(PipelineMode::LogStar.max_rounds(n)),
        other => {
            return Err(algorithm(other)
                .err()
                .unwrap_or_else(|| Error::pre("no budget")))
        }
    })
}

/// Query count fixed in advance by `(n, m, δ)`, where there is one.
pub fn predicted_queries(id: &str, n: usize, m: usize, ctx: &Ctx) -> Option<usize> {
    match id {
        NAMC => non_adaptive_mc_queries(n, m, ctx.delta(n)).ok(),
        FALLBACK if m >= 1 => Some(fallback_shape(n, m).query_count(n)),
        BRUTE_FORCE => Some(n * n.saturating_sub(1) / 2),
        _ => None,
    }
}

fn need_m(id: &str, m: Option<usize>) -> Result<usize> {
    m.ok_or_else(|| Error::pre(format!("`{id}` needs an edge bound m")))
}

/// Runs `id` against the session's target.
pub fn run_algorithm(
    id: &str,
    session: &mut OracleSession<'_>,
    m: Option<usize>,
    ctx: &Ctx,
    opts: &RunOptions<'_>,
) -> Result<Outcome> {
    let info = algorithm(id)?;
    let m = if info.needs_m {
        Some(need_m(id, m)?)
    } else {
        m
    };
    let n = session.n();
    match id {
        NAMC => non_adaptive_mc(session, m.unwrap(), ctx),
        LV_TWO_ROUND => las_vegas_two_round(session, m.unwrap(), ctx),
        MCTR => two_round_mc(session, m.unwrap(), ctx),
        MCTR_LV => three_round_lv(session, m.unwrap(), ctx),
        MCTR2 => three_round_mc(session, m.unwrap(), ctx),
        MCTRN => {
            let m = m.unwrap();
            two_round_large_n(session, m, opts.w.unwrap_or(4 * m.max(1)), ctx)
        }
        LVTRN => three_round_lv_large_n(session, m.unwrap(), ctx),
        FALLBACK => nonadaptive_fallback(session, m.unwrap().max(1)),
        DDDDD => five_round_deterministic(session, m.unwrap()),
        UBDTR => {
            let m = m.unwrap();
            let t = family_size(n, m, ctx.constants.c_family);
            let p = 1.0 / (m.max(2) as f64);
            let search = || search_verified_family(n, m, t, p, 0..256, DEFAULT_VERIFY_LIMIT);
            let family = match opts.cache_dir {
                Some(dir) => cached_family(dir, n, m, t, search)?,
                None => search()?,
            }
            .ok_or_else(|| Error::pre(format!("no verified family found at n = {n}, m = {m}")))?;
            two_round_deterministic(session, &family)
        }
        SFR => pipeline_unknown_m(session, PipelineMode::Rounds(opts.rounds.unwrap_or(2)), ctx),
        SSR => pipeline_unknown_m(session, PipelineMode::LogStar, ctx),
        BRUTE_FORCE => Ok(Outcome::new(all_pairs(session)?)),
        _ => unreachable!("checked by algorithm()"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HiddenGraph;

    #[test]
    fn every_algorithm_learns_a_small_graph() {
        let g = HiddenGraph::new(40, [(0, 1), (5, 9)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for a in ALGORITHMS {
            if a.id == UBDTR {
                continue;
            }
            let opts = RunOptions {
                cache_dir: Some(dir.path()),
                ..RunOptions::default()
            };
            let mut s = OracleSession::round_structured(&g);
            let out = run_algorithm(a.id, &mut s, Some(2), &Ctx::new(3), &opts).unwrap();
            assert_eq!(out.edges, g.edge_set(), "{}", a.id);
            let budget = round_budget(a.id, 40, &opts).unwrap();
            assert!(
                budget.admits(s.current_round()),
                "{} used {} rounds",
                a.id,
                s.current_round()
            );
            if let Some(q) = predicted_queries(a.id, 40, 2, &Ctx::new(3)) {
                assert_eq!(q, s.query_count(), "{}", a.id);
            }
        }
    }

    #[test]
    fn two_round_deterministic_on_eight_vertices() {
        let g = HiddenGraph::new(8, [(2, 6)]).unwrap();
        let mut s = OracleSession::round_structured(&g);
        let out =
            run_algorithm(UBDTR, &mut s, Some(1), &Ctx::new(0), &RunOptions::default()).unwrap();
        assert_eq!(out.edges, g.edge_set());
    }

    #[test]
    fn unknown_ids_and_missing_m_are_refused() {
        let g = HiddenGraph::empty(4);
        let mut s = OracleSession::round_structured(&g);
        assert!(run_algorithm("nope", &mut s, None, &Ctx::new(0), &RunOptions::default()).is_err());
        assert!(run_algorithm(NAMC, &mut s, None, &Ctx::new(0), &RunOptions::default()).is_err());
    }
}
