//! The learner's working hypothesis H: a set of surviving vertex pairs.

use crate::graph::{edge, word_count, EdgeSet, VertexSet};

/// Symmetric n×n bit relation without diagonal, plus per-vertex degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateEdgeSet {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
    degree: Vec<usize>,
}

impl CandidateEdgeSet {
    /// All `n(n-1)/2` pairs.
    pub fn complete(n: usize) -> Self {
        let stride = word_count(n);
        let mut rows = vec![0u64; n * stride];
        for u in 0..n {
            let row = &mut rows[u * stride..(u + 1) * stride];
            row.copy_from_slice(VertexSet::full(n).words());
            row[u / 64] &= !(1u64 << (u % 64));
        }
        CandidateEdgeSet {
            n,
            stride,
            rows,
            degree: vec![n.saturating_sub(1); n],
        }
    }

    pub fn empty(n: usize) -> Self {
        let stride = word_count(n);
        CandidateEdgeSet {
            n,
            stride,
            rows: vec![0; n * stride],
            degree: vec![0; n],
        }
    }

    /// Only the pairs with both ends in `domain`.
    pub fn complete_on(domain: &VertexSet) -> Self {
        let n = domain.universe();
        let mut h = CandidateEdgeSet::empty(n);
        for u in domain.iter() {
            let s = h.stride;
            h.rows[u * s..(u + 1) * s].copy_from_slice(domain.words());
            h.rows[u * s + u / 64] &= !(1u64 << (u % 64));
            h.degree[u] = domain.len() - 1;
        }
        h
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Self {
        let mut h = CandidateEdgeSet::empty(n);
        for (u, v) in edges {
            h.insert(u, v);
        }
        h
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub fn contains(&self, u: usize, v: usize) -> bool {
        u != v && (self.row(u)[v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        if !self.contains(u, v) {
            self.rows[u * self.stride + v / 64] |= 1u64 << (v % 64);
            self.rows[v * self.stride + u / 64] |= 1u64 << (u % 64);
            self.degree[u] += 1;
            self.degree[v] += 1;
        }
    }

    pub fn remove(&mut self, u: usize, v: usize) {
        if self.contains(u, v) {
            self.rows[u * self.stride + v / 64] &= !(1u64 << (v % 64));
            self.rows[v * self.stride + u / 64] &= !(1u64 << (u % 64));
            self.degree[u] -= 1;
            self.degree[v] -= 1;
        }
    }

    /// Applies a NO answer: no pair inside `q` can be an edge.
    pub fn eliminate_within(&mut self, q: &VertexSet) {
        let s = self.stride;
        for u in q.iter() {
            if self.degree[u] == 0 {
                continue;
            }
            let row = &mut self.rows[u * s..(u + 1) * s];
            let mut deg = 0;
            for (w, qw) in row.iter_mut().zip(q.words()) {
                *w &= !qw;
                deg += w.count_ones() as usize;
            }
            self.degree[u] = deg;
        }
    }

    /// Applies a NO answer to a query `q ∪ {u}` where `u ∉ q`: every pair
    /// `{u, v}` with `v ∈ q` goes, along with the pairs inside `q`.
    pub fn eliminate_star(&mut self, u: usize, q: &VertexSet) {
        let mut all = q.clone();
        all.insert(u);
        self.eliminate_within(&all);
    }

    /// Removes every pair touching `u` whose other end lies in `q`.
    pub fn eliminate_from(&mut self, u: usize, q: &VertexSet) {
        for v in self
            .neighbours(u)
            .iter()
            .filter(|&v| q.contains(v))
            .collect::<Vec<_>>()
        {
            self.remove(u, v);
        }
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.degree[u]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn edge_count(&self) -> usize {
        self.degree.iter().sum::<usize>() / 2
    }

    pub fn neighbours(&self, u: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(u).to_vec())
    }

    pub fn edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for u in 0..self.n {
            if self.degree[u] == 0 {
                continue;
            }
            for v in self.neighbours(u).iter().filter(|&v| v > u) {
                out.insert(edge(u, v));
            }
        }
        out
    }

    /// True iff no surviving pair lies inside `s`.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter()
            .all(|u| self.row(u).iter().zip(s.words()).all(|(a, b)| a & b == 0))
    }

    /// Sub-hypothesis with both ends in `s`.
    pub fn restricted_to(&self, s: &VertexSet) -> CandidateEdgeSet {
        let mut out = CandidateEdgeSet::empty(self.n);
        for u in s.iter() {
            let row: Vec<u64> = self
                .row(u)
                .iter()
                .zip(s.words())
                .map(|(a, b)| a & b)
                .collect();
            out.degree[u] = row.iter().map(|w| w.count_ones() as usize).sum();
            out.rows[u * self.stride..(u + 1) * self.stride].copy_from_slice(&row);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_degrees(h: &CandidateEdgeSet) {
        for u in 0..h.n() {
            assert_eq!(h.degree(u), h.neighbours(u).len());
            assert!(!h.contains(u, u));
        }
        assert_eq!(h.edge_count(), h.edges().len());
    }

    #[test]
    fn complete_has_all_pairs() {
        let h = CandidateEdgeSet::complete(70);
        assert_eq!(h.edge_count(), 70 * 69 / 2);
        check_degrees(&h);
        let e = CandidateEdgeSet::complete(1);
        assert_eq!(e.edge_count(), 0);
    }

    #[test]
    fn complete_on_domain() {
        let d = VertexSet::from_members(10, [1, 4, 7]);
        let h = CandidateEdgeSet::complete_on(&d);
        assert_eq!(h.edges(), [(1, 4), (1, 7), (4, 7)].into_iter().collect());
        check_degrees(&h);
    }

    #[test]
    fn star_elimination_keeps_other_pairs() {
        let mut h = CandidateEdgeSet::complete(5);
        h.eliminate_from(0, &VertexSet::from_members(5, [1, 2]));
        assert!(!h.contains(0, 1) && !h.contains(0, 2));
        assert!(h.contains(1, 2) && h.contains(0, 3));
        check_degrees(&h);
    }

    proptest! {
        #[test]
        fn elimination_keeps_index_consistent(
            n in 2usize..140,
            qs in proptest::collection::vec(any::<u128>(), 1..12),
        ) {
            let mut h = CandidateEdgeSet::complete(n);
            for q in qs {
                let q = VertexSet::from_words(n, vec![q as u64, (q >> 64) as u64, q.rotate_left(17) as u64]);
                let before = h.clone();
                h.eliminate_within(&q);
                check_degrees(&h);
                prop_assert!(h.is_independent(&q));
                // monotone shrink
                for (u, v) in h.edges() {
                    prop_assert!(before.contains(u, v));
                }
            }
        }
    }
}
