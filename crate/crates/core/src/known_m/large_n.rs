//! Learners for large `n`: hash vertices into cells, learn which cells are
//! joined by an edge ("set edges") with the one-round learner run on cell
//! unions, then locate the endpoints inside each joined pair of cells.

use super::elimination::{apply_answers, elimination_queries};
use super::nonadaptive::{lv_restart_threshold, namc_params};
use crate::candidate::CandidateEdgeSet;
use crate::config::Ctx;
use crate::deterministic::fallback::nonadaptive_fallback;
use crate::deterministic::oneor::{build_one_or_code, OneOr, OneOrCode};
use crate::error::{Error, Result};
use crate::graph::{edge, EdgeSet, VertexSet};
use crate::oracle::{Batch, OracleSession};
use crate::outcome::Outcome;
use crate::rng::{shuffled, Seed};

pub const MCTRN: &str = "two-round-large-n";
pub const LVTRN: &str = "three-round-lv-large-n";

/// Uniformly random balanced partition of `0..n` into `u` cells.
pub fn partition_vertices(n: usize, u: usize, seed: Seed) -> Result<Vec<VertexSet>> {
    if u == 0 {
        return Err(Error::pre("partition needs at least one cell"));
    }
    let perm = shuffled(&mut seed.rng(), n);
    let mut cells = vec![VertexSet::empty(n); u];
    for (i, &v) in perm.iter().enumerate() {
        cells[i % u].insert(v);
    }
    Ok(cells)
}

/// `u = 2m⁴(2m − 1)`.
pub fn lv_cell_count(m: usize) -> usize {
    let m = m.max(1);
    2 * m.pow(4) * (2 * m - 1)
}

/// Upper bound `m(2m−1)/u` on the chance that two edge endpoints collide.
pub fn collision_bound(m: usize, u: usize) -> f64 {
    (m * (2 * m - 1)) as f64 / u as f64
}

fn union_of(cells: &[VertexSet], pick: &VertexSet) -> VertexSet {
    let mut q = VertexSet::empty(cells[0].universe());
    for c in pick.iter() {
        q.union_with(&cells[c]);
    }
    q
}

/// Round 1 shared by both learners: the one-round learner on cell unions.
fn set_graph(
    session: &mut OracleSession<'_>,
    cells: &[VertexSet],
    m: usize,
    ctx: &Ctx,
    alg: &str,
) -> Result<CandidateEdgeSet> {
    let n = session.n();
    let u = cells.len();
    let params = namc_params(u, m, ctx.delta(n))?;
    let lifted = elimination_queries(u, &params, ctx.stream(alg, 0, 1))?;
    let queries: Vec<VertexSet> = lifted.iter().map(|q| union_of(cells, q)).collect();
    let answers = session.ask_round(queries)?;
    Ok(apply_answers(u, &lifted, &answers))
}

/// A cell holding an internal edge answers YES with every other cell, so
/// its set-degree exceeds `m`.
fn has_overfull_cell(h: &CandidateEdgeSet, m: usize) -> bool {
    (0..h.n()).any(|c| h.degree(c) > m)
}

fn bits_for(len: usize) -> usize {
    (usize::BITS - len.saturating_sub(1).leading_zeros()) as usize
}

/// Two rounds, `u = w^e` cells (`e` from the constants). Round 2 locates
/// endpoints with one presence query plus binary-index queries per side.
pub fn two_round_large_n(
    session: &mut OracleSession<'_>,
    m: usize,
    w: usize,
    ctx: &Ctx,
) -> Result<Outcome> {
    if w <= m {
        return Err(Error::pre(format!(
            "collision parameter w = {w} must exceed m = {m}"
        )));
    }
    let u = w
        .checked_pow(ctx.constants.cell_exponent)
        .ok_or_else(|| Error::pre("cell count overflows"))?;
    two_round_large_n_cells(session, m, u, ctx)
}

/// [`two_round_large_n`] with an explicit cell count.
pub fn two_round_large_n_cells(
    session: &mut OracleSession<'_>,
    m: usize,
    u: usize,
    ctx: &Ctx,
) -> Result<Outcome> {
    let n = session.n();
    let m = m.max(1);
    let cells = partition_vertices(n, u, ctx.stream(MCTRN, 0, 0))?;
    let members: Vec<Vec<usize>> = cells.iter().map(|c| c.iter().collect()).collect();
    let h = set_graph(session, &cells, m, ctx, MCTRN)?;
    let mut ok = !has_overfull_cell(&h, m);
    let set_edges = h.edges();

    let mut batch = Batch::new();
    let mut layout = Vec::with_capacity(set_edges.len());
    for &(i, j) in &set_edges {
        let presence = batch.push(cells[i].union(&cells[j]));
        let mut sides = [0..0, 0..0];
        for (s, (a, b)) in [(i, j), (j, i)].into_iter().enumerate() {
            let bits = bits_for(members[b].len());
            sides[s] = batch.extend((0..bits).map(|bit| {
                let mut q = cells[a].clone();
                for (idx, &v) in members[b].iter().enumerate() {
                    if idx >> bit & 1 == 1 {
                        q.insert(v);
                    }
                }
                q
            }));
        }
        layout.push((i, j, presence, sides));
    }
    let answers = batch.run(session)?;

    let mut edges = EdgeSet::new();
    let mut inconsistent = 0;
    for (i, j, presence, sides) in layout {
        if !answers[presence] {
            continue;
        }
        let idx = |r: &std::ops::Range<usize>| {
            answers[r.clone()]
                .iter()
                .enumerate()
                .fold(0usize, |acc, (b, &a)| acc | usize::from(a) << b)
        };
        let (x, y) = (idx(&sides[1]), idx(&sides[0]));
        match (members[i].get(x), members[j].get(y)) {
            (Some(&a), Some(&b)) => {
                edges.insert(edge(a, b));
            }
            _ => inconsistent += 1,
        }
    }
    ok &= inconsistent == 0;
    let mut out = Outcome::new(edges);
    out.success = ok;
    out.note("cells", u as f64);
    out.note("set_edges", set_edges.len() as f64);
    out.note("inconsistent", inconsistent as f64);
    Ok(out)
}

struct SideCode {
    code: OneOrCode,
    range: std::ops::Range<usize>,
}

/// Queries `V_a ∪ (C_k ∩ V_b)` for the one-or code `C` over `V_b`.
fn one_or_side(
    batch: &mut Batch,
    cells: &[VertexSet],
    members: &[Vec<usize>],
    a: usize,
    b: usize,
) -> Result<SideCode> {
    let code = build_one_or_code(members[b].len().max(1))?;
    let range = batch.extend((0..code.width()).map(|k| {
        let mut q = cells[a].clone();
        for idx in code.query(k) {
            if let Some(&v) = members[b].get(idx) {
                q.insert(v);
            }
        }
        q
    }));
    Ok(SideCode { code, range })
}

/// Las Vegas, `u = 2m⁴(2m−1)` cells. Round 2 decodes both endpoints of every
/// set edge with the one-or detector; any sign of a collision sends the run
/// to a third, deterministic round.
pub fn three_round_lv_large_n(
    session: &mut OracleSession<'_>,
    m: usize,
    ctx: &Ctx,
) -> Result<Outcome> {
    let n = session.n();
    let m = m.max(1);
    let u = lv_cell_count(m);
    let cells = partition_vertices(n, u, ctx.stream(LVTRN, 0, 0))?;
    let members: Vec<Vec<usize>> = cells.iter().map(|c| c.iter().collect()).collect();
    let h = set_graph(session, &cells, m, ctx, LVTRN)?;
    let set_edges = h.edges();
    let mut out = Outcome::default();
    out.note("cells", u as f64);
    out.note("set_edges", set_edges.len() as f64);

    if has_overfull_cell(&h, m) || set_edges.len() > lv_restart_threshold(m) {
        // the set graph is already unusable; fall back right away in round 2
        out.edges = nonadaptive_fallback(session, m)?.edges;
        out.success = true;
        out.fallback = true;
        return Ok(out);
    }
    let mut fallback = false;
    let mut edges = EdgeSet::new();
    let mut batch = Batch::new();
    let mut layout = Vec::with_capacity(set_edges.len());
    for &(i, j) in &set_edges {
        let in_j = one_or_side(&mut batch, &cells, &members, i, j)?;
        let in_i = one_or_side(&mut batch, &cells, &members, j, i)?;
        layout.push((i, j, in_i, in_j));
    }
    let answers = batch.run(session)?;
    let mut found: Vec<Option<usize>> = vec![None; u];
    let mut conflicts = 0;
    for (i, j, in_i, in_j) in layout {
        let a = in_i.code.decode(&answers[in_i.range.clone()]);
        let b = in_j.code.decode(&answers[in_j.range.clone()]);
        match (a, b) {
            (OneOr::Empty, OneOr::Empty) => {}
            (OneOr::Vertex(x), OneOr::Vertex(y)) => {
                let (va, vb) = (members[i][x], members[j][y]);
                for (cell, v) in [(i, va), (j, vb)] {
                    match found[cell] {
                        Some(prev) if prev != v => conflicts += 1,
                        _ => found[cell] = Some(v),
                    }
                }
                edges.insert(edge(va, vb));
            }
            _ => fallback = true,
        }
    }
    out.note("cell_conflicts", conflicts as f64);
    if fallback {
        edges = nonadaptive_fallback(session, m)?.edges;
    }
    out.edges = edges;
    out.success = true;
    out.fallback = fallback;
    Ok(out)
}
