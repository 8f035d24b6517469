//! Splitting a post-elimination hypothesis into high-degree vertices W, their
//! independent neighbourhoods I_w, the pairs E_W they cover, and the rest U.

use crate::candidate::CandidateEdgeSet;
use crate::graph::{edge, EdgeSet, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    /// Vertices with `deg_H > r/2`, ascending.
    pub w: Vec<usize>,
    /// `I_w` for each entry of `w`, in the same order.
    pub independent: Vec<VertexSet>,
    pub e_w: EdgeSet,
    pub u: EdgeSet,
}

pub fn classify_structure(h: &CandidateEdgeSet, r: f64) -> Structure {
    let n = h.n();
    let deg = |v: usize| h.degree(v) as f64;
    let heavy = VertexSet::from_members(n, (0..n).filter(|&v| deg(v) > r + 1.0));
    let w: Vec<usize> = (0..n).filter(|&v| 2.0 * deg(v) > r).collect();
    let mut independent = Vec::with_capacity(w.len());
    let mut e_w = EdgeSet::new();
    for &x in &w {
        let nx = h.neighbours(x);
        let mut iw = VertexSet::empty(n);
        for u in nx.iter() {
            if 8.0 * deg(u) > r {
                continue;
            }
            let mut common = h.neighbours(u);
            common.intersect_with(&nx);
            if common.is_subset(&heavy) {
                iw.insert(u);
                e_w.insert(edge(x, u));
            }
        }
        independent.push(iw);
    }
    let u = h.edges().difference(&e_w).copied().collect();
    Structure {
        w,
        independent,
        e_w,
        u,
    }
}
