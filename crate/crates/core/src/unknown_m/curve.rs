//! Exact NO-rate curves, used as the reference the estimators are judged by.
//!
//! `N_G(p)` is the probability that a p-random query holds no edge, that is
//! the probability that it is an independent set:
//! `N_G(p) = Σ_k c_k p^k (1−p)^{s−k}` where `c_k` counts independent sets of
//! size `k` among the `s` non-isolated vertices. `N_{u,G}(p)` multiplies the
//! curve of `G − u − Γ(u)` by `(1−p)^{d_u}`.

use crate::error::{Error, Result};
use crate::graph::HiddenGraph;

/// Largest number of non-isolated vertices the enumeration accepts.
pub const MAX_CURVE_VERTICES: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceCurve {
    /// Non-isolated vertices taken into account.
    pub support: usize,
    /// `counts[k]` = independent sets of size `k` among them.
    pub counts: Vec<u64>,
    /// Extra factor `(1−p)^extra` (forced-absent vertices).
    pub extra: usize,
}

impl IndependenceCurve {
    pub fn eval(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        let s = self.support as i32;
        let body: f64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * p.powi(k as i32) * q.powi(s - k as i32))
            .sum();
        body * q.powi(self.extra as i32)
    }
}

fn count_independent(adj: &[u64], avail: u64, out: &mut [u64], size: usize) {
    if avail == 0 {
        out[size] += 1;
        return;
    }
    let v = avail.trailing_zeros() as usize;
    let rest = avail & !(1u64 << v);
    count_independent(adj, rest, out, size);
    count_independent(adj, rest & !adj[v], out, size + 1);
}

fn curve_on(
    g: &HiddenGraph,
    keep: impl Fn(usize) -> bool,
    extra: usize,
) -> Result<IndependenceCurve> {
    let verts: Vec<usize> = (0..g.n())
        .filter(|&v| keep(v) && g.neighbours_of(v).iter().any(|&w| keep(w)))
        .collect();
    if verts.len() > MAX_CURVE_VERTICES {
        return Err(Error::Infeasible {
            what: "exact independence curve".into(),
            count: 1u128 << verts.len().min(127),
            limit: 1u128 << MAX_CURVE_VERTICES,
        });
    }
    let index = |v: usize| verts.iter().position(|&x| x == v);
    let adj: Vec<u64> = verts
        .iter()
        .map(|&v| {
            g.neighbours_of(v)
                .iter()
                .filter_map(|&w| index(w))
                .fold(0u64, |m, i| m | 1 << i)
        })
        .collect();
    let mut counts = vec![0u64; verts.len() + 1];
    let all = if verts.is_empty() {
        0
    } else {
        u64::MAX >> (64 - verts.len())
    };
    count_independent(&adj, all, &mut counts, 0);
    Ok(IndependenceCurve {
        support: verts.len(),
        counts,
        extra,
    })
}

/// Exact `N_G` by enumeration of independent sets.
pub fn no_rate_curve(g: &HiddenGraph) -> Result<IndependenceCurve> {
    curve_on(g, |_| true, 0)
}

/// Exact `N_{u,G}`: queries augmented with `u`.
pub fn vertex_no_rate_curve(g: &HiddenGraph, u: usize) -> Result<IndependenceCurve> {
    let nb = g.neighbours_of(u);
    curve_on(g, |v| v != u && !nb.contains(&v), nb.len())
}

/// `N` for the star `K_{1,d}`.
pub fn star_no_rate(d: usize, p: f64) -> f64 {
    1.0 - p * (1.0 - (1.0 - p).powi(d as i32))
}

/// `N_u` for the centre of `K_{1,d}`.
pub fn star_centre_no_rate(d: usize, p: f64) -> f64 {
    (1.0 - p).powi(d as i32)
}

/// `N` for a matching of `m` edges.
pub fn matching_no_rate(m: usize, p: f64) -> f64 {
    (1.0 - p * p).powi(m as i32)
}

/// Root of `f(p) = target` on `[0, 1]` for decreasing `f`, to within `tol`.
/// Returns 1 when `f(1) > target`.
pub fn bisect_decreasing(f: impl Fn(f64) -> f64, target: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if f(hi) > target {
        return 1.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `p*` with `N(p*) = 1/2`.
pub fn p_star(f: impl Fn(f64) -> f64) -> f64 {
    bisect_decreasing(f, 0.5, 1e-12)
}

/// `p_u` with `N_u(p_u) = 1/e`.
pub fn p_vertex(f: impl Fn(f64) -> f64) -> f64 {
    bisect_decreasing(f, (-1.0f64).exp(), 1e-12)
}
