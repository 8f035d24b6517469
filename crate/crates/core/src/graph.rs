//! Hidden target graphs, vertex subsets and the plain-text graph format.
//!
//! Vertices are `0..n` everywhere inside the crate. The on-disk formats use
//! `1..=n`; the conversion happens only in [`HiddenGraph::parse`] and
//! [`HiddenGraph::to_text`].

use std::collections::BTreeSet;
use std::fmt;
use std::io;
use std::path::Path;

use thiserror::Error;

/// An undirected edge, always stored with `.0 < .1`.
pub type Edge = (usize, usize);

/// An ordered set of edges; the common currency of learner outputs.
pub type EdgeSet = BTreeSet<Edge>;

/// Returns the edge `{u, v}` in canonical order.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A subset of `0..n` stored as a packed bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet {
            n,
            words: vec![u64::MAX; word_count(n)],
        };
        s.trim();
        s
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut s = VertexSet::empty(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    /// Builds a set from raw words; bits at or above `n` are cleared.
    pub fn from_words(n: usize, mut words: Vec<u64>) -> Self {
        words.resize(word_count(n), 0);
        let mut s = VertexSet { n, words };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the universe, not of the set.
    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.words[v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside universe of size {}", self.n);
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v / 64] &= !(1u64 << (v % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Members<'_> {
        Members {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Hex rendering, most significant nibble first; vertex `i` is bit `i`.
    pub fn to_hex(&self) -> String {
        let digits = self.n.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let nibble = (self.words.get(d / 16).copied().unwrap_or(0) >> ((d % 16) * 4)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(n: usize, hex: &str) -> Option<VertexSet> {
        let mut words = vec![0u64; word_count(n)];
        let digits: Vec<u32> = hex.chars().map(|c| c.to_digit(16)).collect::<Option<_>>()?;
        for (i, &nib) in digits.iter().rev().enumerate() {
            if nib == 0 {
                continue;
            }
            let bit = i * 4;
            if bit + (32 - nib.leading_zeros() as usize) > n {
                return None;
            }
            words[i / 16] |= (nib as u64) << ((i % 16) * 4);
        }
        Some(VertexSet { n, words })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// The target simple graph. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl HiddenGraph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(
        n: usize,
        edges: I,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push(edge(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(HiddenGraph {
            n,
            edges: list,
            adj,
        })
    }

    pub fn empty(n: usize) -> Self {
        HiddenGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbours_of(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// The oracle: `true` iff some edge has both endpoints in `q`.
    ///
    /// Scans the edge list, O(m) membership tests.
    pub fn answer(&self, q: &VertexSet) -> bool {
        self.edges
            .iter()
            .any(|&(u, v)| q.contains(u) && q.contains(v))
    }

    /// Independent route to the same answer: scans all pairs inside `q`.
    pub fn answer_pairwise(&self, q: &VertexSet) -> bool {
        let members: Vec<usize> = q.iter().collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if self.has_edge(u, v) {
                    return true;
                }
            }
        }
        false
    }

    /// Vertices outside `s` adjacent to some vertex of `s`.
    pub fn neighbours(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::empty(self.n);
        for v in s.iter() {
            for &u in &self.adj[v] {
                if !s.contains(u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    /// `|Γ({u, v})|`.
    pub fn pair_neighbourhood_size(&self, u: usize, v: usize) -> usize {
        self.neighbours(&VertexSet::from_members(self.n, [u, v]))
            .len()
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        !self.answer(s)
    }

    /// Parses the `n m` / `u v` text format (1-indexed, `#` comments).
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| GraphError::Parse {
                line: idx + 1,
                msg: msg.to_string(),
            };
            let mut fields = line.split_whitespace();
            let a: usize = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| err("expected two integers"))?;
            let b: usize = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| err("expected two integers"))?;
            if fields.next().is_some() {
                return Err(err("trailing fields"));
            }
            match header {
                None => header = Some((a, b)),
                Some((n, _)) => {
                    if a == 0 || b == 0 || a > n || b > n {
                        return Err(err("vertex out of range 1..=n"));
                    }
                    if a >= b {
                        return Err(err("edge lines must satisfy u < v"));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `n m` header".into(),
        })?;
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        HiddenGraph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn read_file(path: &Path) -> Result<Self, GraphError> {
        HiddenGraph::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), GraphError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
