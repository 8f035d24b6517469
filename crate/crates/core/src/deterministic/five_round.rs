//! Five-round deterministic learner.
//!
//! 1. Every cell of every row of a low-agreement partition matrix.
//! 2. Every pair of cells of the first row whose cells were all independent.
//! 3. For each set edge `{S_i, S_j}`, disjunct tests `S_i ∪ (R ∩ S_j)` and
//!    symmetrically, locating the endpoints on each side.
//! 4. Each located endpoint `v ∈ S_j` re-checked with `S_i ∪ {v}`.
//! 5. Every pair of confirmed endpoints across each set edge.

use super::disjunct::{build_disjunct_matrix, DisjunctMatrix};
use super::partition::{build_partition_matrix, PartitionMatrix};
use crate::error::{Error, Result};
use crate::graph::{edge, EdgeSet, VertexSet};
use crate::known_m::pair_queries;
use crate::oracle::{Batch, OracleSession};
use crate::outcome::Outcome;

pub const DDDDD: &str = "five-round-deterministic";

/// The target-independent part of the learner.
#[derive(Clone, Debug)]
pub struct FiveRoundPlan {
    pub m: usize,
    pub partition: PartitionMatrix,
    pub disjunct: DisjunctMatrix,
    /// `cells[row][symbol]`.
    pub cells: Vec<Vec<VertexSet>>,
}

impl FiveRoundPlan {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::pre("five-round learner needs m ≥ 1"));
        }
        let partition = build_partition_matrix(n, m)?;
        let w = partition.alphabet();
        let cells: Vec<Vec<VertexSet>> = (0..partition.rows())
            .map(|r| {
                let mut row = vec![VertexSet::empty(n); w];
                for (v, &s) in partition.row(r).iter().enumerate() {
                    row[s as usize].insert(v);
                }
                row
            })
            .collect();
        let widest = cells
            .iter()
            .flatten()
            .map(VertexSet::len)
            .max()
            .unwrap_or(1);
        let disjunct = build_disjunct_matrix(widest.max(1), m)?;
        Ok(FiveRoundPlan {
            m,
            partition,
            disjunct,
            cells,
        })
    }

    pub fn round_one_queries(&self) -> Vec<VertexSet> {
        self.cells.iter().flatten().cloned().collect()
    }

    pub fn round_two_count(&self) -> usize {
        let w = self.partition.alphabet();
        w * (w - 1) / 2
    }

    /// Tests locating members of `side` adjacent to `anchor`.
    fn locate_queries<'a>(
        &'a self,
        anchor: &'a VertexSet,
        side: &'a VertexSet,
    ) -> impl Iterator<Item = VertexSet> + 'a {
        let members: Vec<usize> = side.iter().collect();
        self.disjunct.rows().iter().map(move |row| {
            let mut q = anchor.clone();
            for c in row.iter().filter(|&c| c < members.len()) {
                q.insert(members[c]);
            }
            q
        })
    }

    fn locate_decode(&self, side: &VertexSet, answers: &[bool]) -> Vec<usize> {
        let members: Vec<usize> = side.iter().collect();
        self.disjunct
            .decode(answers)
            .into_iter()
            .filter(|&c| c < members.len())
            .map(|c| members[c])
            .collect()
    }
}

pub fn five_round_deterministic(session: &mut OracleSession<'_>, m: usize) -> Result<Outcome> {
    let plan = FiveRoundPlan::new(session.n(), m)?;
    five_round_with_plan(session, &plan)
}

pub fn five_round_with_plan(
    session: &mut OracleSession<'_>,
    plan: &FiveRoundPlan,
) -> Result<Outcome> {
    let w = plan.partition.alphabet();
    let one = session.ask_round(plan.round_one_queries())?;
    let row = (0..plan.cells.len())
        .find(|&r| one[r * w..(r + 1) * w].iter().all(|&a| !a))
        .ok_or_else(|| {
            Error::AlgorithmContract("no partition row has all cells independent".into())
        })?;
    let cells = &plan.cells[row];

    let mut pairs = Vec::new();
    let mut two_q = Vec::new();
    for i in 0..w {
        for j in i + 1..w {
            pairs.push((i, j));
            two_q.push(cells[i].union(&cells[j]));
        }
    }
    let two = session.ask_round(two_q)?;
    let set_edges: Vec<(usize, usize)> = pairs
        .into_iter()
        .zip(two)
        .filter_map(|(p, a)| a.then_some(p))
        .collect();

    let mut batch = Batch::new();
    let mut ranges = Vec::new();
    for &(i, j) in &set_edges {
        let a = batch.extend(plan.locate_queries(&cells[j], &cells[i]));
        let b = batch.extend(plan.locate_queries(&cells[i], &cells[j]));
        ranges.push((a, b));
    }
    let three = batch.run(session)?;

    let mut checks = Vec::new();
    let mut four_q = Vec::new();
    for (&(i, j), (ra, rb)) in set_edges.iter().zip(&ranges) {
        for v in plan.locate_decode(&cells[i], &three[ra.clone()]) {
            let mut q = cells[j].clone();
            q.insert(v);
            checks.push((i, j, v, true));
            four_q.push(q);
        }
        for v in plan.locate_decode(&cells[j], &three[rb.clone()]) {
            let mut q = cells[i].clone();
            q.insert(v);
            checks.push((i, j, v, false));
            four_q.push(q);
        }
    }
    let four = session.ask_round(four_q)?;
    let mut ends: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), Vec::new()); set_edges.len()];
    for ((i, j, v, left), a) in checks.into_iter().zip(four) {
        if a {
            let k = set_edges
                .iter()
                .position(|&e| e == (i, j))
                .expect("known set edge");
            if left {
                ends[k].0.push(v);
            } else {
                ends[k].1.push(v);
            }
        }
    }

    let mut candidates = EdgeSet::new();
    for (left, right) in &ends {
        for &a in left {
            for &b in right {
                candidates.insert(edge(a, b));
            }
        }
    }
    let five = session.ask_round(pair_queries(session.n(), &candidates))?;
    let edges: EdgeSet = candidates
        .into_iter()
        .zip(five)
        .filter_map(|(e, a)| a.then_some(e))
        .collect();

    let mut out = Outcome::new(edges);
    out.note("row", row as f64);
    out.note("set_edges", set_edges.len() as f64);
    out.note("alphabet", w as f64);
    out.note("partition_rows", plan.partition.rows() as f64);
    out.note("disjunct_rows", plan.disjunct.rows().len() as f64);
    Ok(out)
}
