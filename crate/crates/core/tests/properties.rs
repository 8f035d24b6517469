use proptest::prelude::*;

use edgeprobe::harness::stats::{aggregate, rows_from_csv};
use edgeprobe::harness::{run_plan, run_trials, ExperimentPlan, Generator, InstanceSpec};
use edgeprobe::known_m::elimination::{apply_answers, elimination_queries, EliminationParams};
use edgeprobe::{HiddenGraph, OracleSession, Seed, Transcript, VertexSet};

fn graph() -> impl Strategy<Value = HiddenGraph> {
    (2usize..40).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..12).prop_map(move |pairs| {
            let e: std::collections::BTreeSet<_> = pairs
                .into_iter()
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            HiddenGraph::new(n, e).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn answers_are_monotone_in_the_query(g in graph(), bits in any::<u64>(), extra in any::<u64>()) {
        let n = g.n();
        let q = VertexSet::from_members(n, (0..n).filter(|&v| bits >> v & 1 == 1));
        let mut big = q.clone();
        big.union_with(&VertexSet::from_members(n, (0..n).filter(|&v| extra >> v & 1 == 1)));
        prop_assert!(!g.answer(&q) || g.answer(&big));
        prop_assert_eq!(g.answer(&q), g.answer_pairwise(&q));
    }

    #[test]
    fn eliminated_pairs_are_never_edges(g in graph(), t in 1usize..80, p in 0.05f64..0.6, seed in any::<u64>()) {
        let n = g.n();
        let params = EliminationParams { p, r: 1.0, delta: 0.1, t };
        let qs = elimination_queries(n, &params, Seed::new(seed, 0)).unwrap();
        let mut s = OracleSession::round_structured(&g);
        let ans = s.ask_round(qs.clone()).unwrap();
        let h = apply_answers(n, &qs, &ans);
        for &(u, v) in g.edges() {
            prop_assert!(h.contains(u, v));
        }
    }

    #[test]
    fn transcripts_round_trip_and_replay(g in graph(), seeds in proptest::collection::vec(any::<u64>(), 1..4)) {
        let n = g.n();
        let mut s = OracleSession::round_structured(&g);
        for (r, seed) in seeds.iter().enumerate() {
            let qs: Vec<VertexSet> = (0..5)
                .map(|k| VertexSet::from_members(n, (0..n).filter(|&v| (seed.rotate_left(k * 7) >> (v % 64)) & 1 == 1)))
                .collect();
            if r == 1 {
                s.ask_round(Vec::new()).unwrap();
            }
            s.ask_round(qs).unwrap();
        }
        let t = s.transcript("probe", 9);
        let back = Transcript::parse(&t.to_text()).unwrap();
        prop_assert_eq!(back.round_count(), s.current_round());
        prop_assert_eq!(back.query_count(), s.query_count());
        prop_assert!(back.replay(&g));
    }
}

#[test]
fn one_trial_plans_are_reproducible() {
    let spec = InstanceSpec::new(Generator::ErdosRenyiM { m: 4 }, 96, 0);
    let plan = ExperimentPlan::new("three-round-mc", spec, 1, 77);
    let strip = |p: &ExperimentPlan| {
        let r = run_trials(p).unwrap();
        let row = &r.trials[0].row;
        (row.seed, row.success, row.queries, row.rounds, row.restarts)
    };
    assert_eq!(strip(&plan), strip(&plan));
}

#[test]
fn adding_trials_keeps_earlier_rows() {
    let spec = InstanceSpec::new(Generator::Matching { m: 3 }, 64, 0);
    let mut small = ExperimentPlan::new("two-round-mc", spec, 4, 5);
    small.threads = Some(1);
    let mut big = small.clone();
    big.trials = 9;
    let a = run_trials(&small).unwrap();
    let b = run_trials(&big).unwrap();
    for (x, y) in a.trials.iter().zip(&b.trials) {
        assert_eq!(
            (x.row.seed, x.row.queries, x.row.success),
            (y.row.seed, y.row.queries, y.row.success)
        );
    }
}

#[test]
fn aggregate_recomputes_from_the_persisted_rows() {
    let dir = tempfile::tempdir().unwrap();
    let spec = InstanceSpec::new(Generator::PlantedStar { d: 6, center: None }, 128, 0);
    let mut plan = ExperimentPlan::new("unknown-m-k-rounds", spec, 12, 1);
    plan.trials_csv = Some(dir.path().join("rows.csv"));
    let report = run_plan(&plan).unwrap();
    let rows =
        rows_from_csv(&std::fs::read_to_string(dir.path().join("rows.csv")).unwrap()).unwrap();
    let again = aggregate(&plan.algorithm, 128, plan.learner_m().unwrap(), &rows);
    assert_eq!(again, report.aggregate);
    assert_eq!(again.successes, 12);
}
