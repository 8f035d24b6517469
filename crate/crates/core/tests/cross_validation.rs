//! Every learner against the one-query-per-pair baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use edgeprobe::harness::{brute_force_learn, round_budget, run_algorithm, RunOptions, ALGORITHMS};
use edgeprobe::{Ctx, HiddenGraph, OracleSession};

fn random_graph(n: usize, m: usize, r: &mut ChaCha8Rng) -> HiddenGraph {
    let mut e = std::collections::BTreeSet::new();
    while e.len() < m {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v {
            e.insert((u.min(v), u.max(v)));
        }
    }
    HiddenGraph::new(n, e).unwrap()
}

#[test]
fn brute_force_is_exact_with_one_query_per_pair() {
    let g = HiddenGraph::new(5, [(0, 4), (1, 2)]).unwrap();
    let mut s = OracleSession::round_structured(&g);
    assert_eq!(brute_force_learn(&mut s).unwrap(), g.edge_set());
    assert_eq!((s.query_count(), s.current_round()), (10, 1));
    let e = HiddenGraph::empty(7);
    let mut s = OracleSession::round_structured(&e);
    assert!(brute_force_learn(&mut s).unwrap().is_empty());
}

#[test]
fn ten_thousand_triples_agree_with_brute_force() {
    // the two-round deterministic learner needs a verified family per (n, m)
    // and has its own exhaustive check; everything else is swept here
    let algs: Vec<_> = ALGORITHMS
        .iter()
        .filter(|a| a.id != "two-round-deterministic")
        .collect();
    let results: Vec<(bool, bool)> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = ChaCha8Rng::seed_from_u64(i);
            let a = algs[r.gen_range(0..algs.len())];
            let n = r.gen_range(8..=40);
            let m = r.gen_range(1..=4);
            let g = random_graph(n, r.gen_range(0..=m), &mut r);
            let mut base = OracleSession::round_structured(&g);
            let truth = brute_force_learn(&mut base).unwrap();
            let mut s = OracleSession::round_structured(&g);
            let opts = RunOptions::default();
            let out = run_algorithm(a.id, &mut s, Some(m), &Ctx::new(i), &opts).unwrap();
            let budget = round_budget(a.id, n, &opts).unwrap();
            assert!(
                budget.admits(s.current_round()),
                "{} used {} rounds",
                a.id,
                s.current_round()
            );
            (a.las_vegas, !out.success || out.edges == truth)
        })
        .collect();
    let lv_wrong = results.iter().filter(|r| r.0 && !r.1).count();
    let mc_wrong = results.iter().filter(|r| !r.0 && !r.1).count();
    let mc_total = results.iter().filter(|r| !r.0).count();
    assert_eq!(lv_wrong, 0);
    // Monte Carlo learners run at δ = 1/n here
    assert!(
        mc_wrong * 100 <= mc_total,
        "{mc_wrong} of {mc_total} Monte Carlo runs wrong"
    );
}
