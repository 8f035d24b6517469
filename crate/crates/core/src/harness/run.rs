//! Runs a plan's trials in parallel and writes its outputs.

use std::fs;
use std::time::Instant;

use rayon::prelude::*;

use super::dispatch::{round_budget, run_algorithm, RunOptions};
use super::generate::generate;
use super::plan::ExperimentPlan;
use super::stats::{aggregate, plot_series, rows_to_csv, Aggregate, TrialRow, AGGREGATE_HEADER};
use crate::config::Ctx;
use crate::error::{Error, Result};
use crate::oracle::OracleSession;
use crate::rng::{mix64, trial_seed};

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub row: TrialRow,
    /// Edges in the target.
    pub m_true: usize,
    pub fallback: bool,
    /// Rounds stayed within the algorithm's budget.
    pub within_budget: bool,
    /// Set when the learner refused or broke its contract; the trial counts
    /// as a failure and the run continues.
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub trials: Vec<TrialResult>,
    pub aggregate: Aggregate,
}

impl RunReport {
    pub fn rows(&self) -> Vec<TrialRow> {
        self.trials.iter().map(|t| t.row.clone()).collect()
    }

    pub fn fallback_rate(&self) -> f64 {
        let k = self.trials.iter().filter(|t| t.fallback).count();
        k as f64 / self.trials.len().max(1) as f64
    }
}

/// Seed of the instance a trial runs against.
pub fn instance_seed(plan: &ExperimentPlan, trial_seed: u64) -> u64 {
    if plan.fixed_instance {
        plan.seed
    } else {
        mix64(trial_seed ^ 0x696e_7374_616e_6365)
    }
}

pub fn run_trial(plan: &ExperimentPlan, trial: u64) -> Result<TrialResult> {
    let seed = trial_seed(plan.seed, trial);
    let target = generate(&plan.instance.with_seed(instance_seed(plan, seed)))?;
    let n = target.n();
    let mut ctx = Ctx::new(seed);
    ctx.delta = plan.delta;
    ctx.constants = plan.constants.clone();
    let opts = RunOptions {
        rounds: plan.rounds,
        w: plan.w,
        cache_dir: plan.cache.as_deref(),
    };
    let mut session = OracleSession::round_structured(&target);
    let start = Instant::now();
    let result = run_algorithm(&plan.algorithm, &mut session, plan.learner_m(), &ctx, &opts);
    let wall_ms = start.elapsed().as_millis() as u64;
    let rounds = session.current_round();
    let budget = round_budget(&plan.algorithm, n, &opts)?;
    let (edges, restarts, fallback, error) = match result {
        Ok(out) => (Some(out.edges), out.restarts, out.fallback, None),
        Err(
            e @ (Error::Precondition(_) | Error::AlgorithmContract(_) | Error::Infeasible { .. }),
        ) => (None, 0, false, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let success = edges.as_ref() == Some(&target.edge_set());
    if let Some(dir) = &plan.transcripts {
        fs::create_dir_all(dir)?;
        session
            .transcript(&plan.algorithm, seed)
            .with_result(edges.clone().unwrap_or_default(), success, wall_ms)
            .write_file(&dir.join(format!("trial-{trial}.txt")))?;
    }
    Ok(TrialResult {
        row: TrialRow {
            trial,
            seed,
            success,
            queries: session.query_count(),
            rounds,
            restarts: restarts + u32::from(fallback),
            wall_ms,
        },
        m_true: target.m(),
        fallback,
        within_budget: budget.admits(rounds),
        error,
    })
}

/// Runs every trial without writing anything.
pub fn run_trials(plan: &ExperimentPlan) -> Result<RunReport> {
    let work = || -> Result<Vec<TrialResult>> {
        (0..plan.trials as u64)
            .into_par_iter()
            .map(|t| run_trial(plan, t))
            .collect()
    };
    let trials = match plan.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::pre(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let rows: Vec<TrialRow> = trials.iter().map(|t| t.row.clone()).collect();
    let m = plan
        .learner_m()
        .unwrap_or_else(|| trials.first().map_or(0, |t| t.m_true));
    let aggregate = aggregate(&plan.algorithm, plan.instance.n, m, &rows);
    Ok(RunReport { trials, aggregate })
}

/// Runs the plan and writes whichever outputs it names.
pub fn run_plan(plan: &ExperimentPlan) -> Result<RunReport> {
    let report = run_trials(plan)?;
    let rows = report.rows();
    if let Some(p) = &plan.trials_csv {
        fs::write(p, rows_to_csv(&rows))?;
    }
    if let Some(p) = &plan.aggregate_csv {
        fs::write(
            p,
            format!("{AGGREGATE_HEADER}\n{}\n", report.aggregate.to_csv()),
        )?;
    }
    if let Some(p) = &plan.plot_tsv {
        fs::write(
            p,
            plot_series(report.aggregate.n, report.aggregate.m, &rows),
        )?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{Generator, InstanceSpec};
    use crate::harness::stats::rows_from_csv;
    use crate::oracle::Transcript;

    fn plan(alg: &str) -> ExperimentPlan {
        ExperimentPlan::new(
            alg,
            InstanceSpec::new(Generator::ErdosRenyiM { m: 3 }, 48, 0),
            6,
            11,
        )
    }

    #[test]
    fn outputs_are_consistent() {
        let dir = tempfile::tempdir().unwrap();
        let mut p = plan("three-round-lv");
        p.trials_csv = Some(dir.path().join("rows.csv"));
        p.aggregate_csv = Some(dir.path().join("agg.csv"));
        p.plot_tsv = Some(dir.path().join("plot.tsv"));
        p.transcripts = Some(dir.path().join("tr"));
        let report = run_plan(&p).unwrap();
        let rows =
            rows_from_csv(&fs::read_to_string(dir.path().join("rows.csv")).unwrap()).unwrap();
        assert_eq!(rows, report.rows());
        assert_eq!(aggregate(&p.algorithm, 48, 3, &rows), report.aggregate);
        assert_eq!(report.aggregate.successes, 6);
        let t = Transcript::read_file(&dir.path().join("tr/trial-2.txt")).unwrap();
        assert_eq!(t.query_count(), rows[2].queries);
    }

    #[test]
    fn thread_count_does_not_change_rows() {
        let mut a = plan("two-round-mc");
        a.threads = Some(1);
        let mut b = a.clone();
        b.threads = Some(4);
        let strip = |r: RunReport| -> Vec<_> {
            r.rows()
                .into_iter()
                .map(|x| (x.seed, x.success, x.queries, x.rounds))
                .collect()
        };
        assert_eq!(
            strip(run_trials(&a).unwrap()),
            strip(run_trials(&b).unwrap())
        );
    }

    #[test]
    fn precondition_failures_stay_per_trial() {
        let mut p = plan("five-round-deterministic");
        p.m = Some(0);
        let report = run_trials(&p).unwrap();
        assert!(report
            .trials
            .iter()
            .all(|t| t.error.is_some() && !t.row.success));
    }
}
