//! d-disjunct test matrices for one-round identification of up to `d` loops.
//!
//! Kautz–Singleton: column `c` has a one in row `(i, a)` iff symbol `i` of
//! the polynomial codeword of `c` is `a`. With length `L > d(k−1)` no column
//! is covered by `d` others. Plain individual testing is used when smaller.

use super::code::{min_base, next_prime, PolyCode};
use super::oneor::binomial;
use crate::error::{Error, Result};
use crate::graph::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctMatrix {
    cols: usize,
    d: usize,
    /// Each row as the set of columns it tests.
    rows: Vec<VertexSet>,
    pub verified: bool,
}

pub fn build_disjunct_matrix(cols: usize, d: usize) -> Result<DisjunctMatrix> {
    if cols == 0 {
        return Err(Error::pre("disjunct matrix needs at least one column"));
    }
    let d = d.max(1);
    let mut best: Option<(usize, usize, usize)> = None;
    let max_k = (usize::BITS - cols.max(2).leading_zeros()) as usize;
    for k in 2..=max_k {
        let len = d * (k - 1) + 1;
        let q = next_prime(min_base(cols, k).max(len));
        if len * q < cols && best.map_or(true, |(bq, _, bl)| len * q < bl * bq) {
            best = Some((q, k, len));
        }
    }
    let rows = match best {
        None => (0..cols)
            .map(|c| VertexSet::from_members(cols, [c]))
            .collect(),
        Some((q, k, len)) => {
            let code = PolyCode::new(q, k, len)?;
            let mut rows = vec![VertexSet::empty(cols); len * q];
            for c in 0..cols {
                for i in 0..len {
                    rows[i * q + code.symbol(c, i)].insert(c);
                }
            }
            rows
        }
    };
    let mut dm = DisjunctMatrix {
        cols,
        d,
        rows,
        verified: false,
    };
    dm.verified = dm.verify(1 << 26)?;
    if !dm.verified {
        return Err(Error::AlgorithmContract(format!(
            "constructed matrix is not {d}-disjunct"
        )));
    }
    Ok(dm)
}

impl DisjunctMatrix {
    pub fn from_rows(cols: usize, d: usize, rows: Vec<VertexSet>) -> Self {
        DisjunctMatrix {
            cols,
            d,
            rows,
            verified: false,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.rows
    }

    /// Checks d-disjunctness. Uses the weight/intersection criterion
    /// `d·λ < min weight` when it applies, otherwise enumerates every column
    /// against every d-subset of the others (refused above `limit` cases).
    pub fn verify(&self, limit: u128) -> Result<bool> {
        let col_rows: Vec<Vec<usize>> = (0..self.cols)
            .map(|c| {
                (0..self.rows.len())
                    .filter(|&r| self.rows[r].contains(c))
                    .collect()
            })
            .collect();
        let min_weight = col_rows.iter().map(Vec::len).min().unwrap_or(0);
        if min_weight == 0 {
            return Ok(self.cols == 0);
        }
        let mut lambda = 0;
        for a in 0..self.cols {
            for b in a + 1..self.cols {
                let shared = col_rows[a]
                    .iter()
                    .filter(|r| self.rows[**r].contains(b))
                    .count();
                lambda = lambda.max(shared);
            }
        }
        if self.d * lambda < min_weight {
            return Ok(true);
        }
        let others = self.cols.saturating_sub(1) as u64;
        let d = (self.d as u64).min(others);
        let count = self.cols as u128 * binomial(others, d);
        if count > limit {
            return Err(Error::Infeasible {
                what: "exhaustive disjunctness check".into(),
                count,
                limit,
            });
        }
        for c in 0..self.cols {
            let others: Vec<usize> = (0..self.cols).filter(|&x| x != c).collect();
            let mut idx: Vec<usize> = (0..d as usize).collect();
            loop {
                let covered = col_rows[c]
                    .iter()
                    .all(|&r| idx.iter().any(|&i| self.rows[r].contains(others[i])));
                if covered {
                    return Ok(false);
                }
                if !next_combination(&mut idx, others.len()) {
                    break;
                }
            }
        }
        Ok(true)
    }

    /// Positives among `0..cols`: columns all of whose tests are positive.
    pub fn decode(&self, answers: &[bool]) -> Vec<usize> {
        let mut alive = VertexSet::full(self.cols);
        for (row, &a) in self.rows.iter().zip(answers) {
            if !a {
                alive.difference_with(row);
            }
        }
        alive.iter().collect()
    }
}

/// Advances a sorted index combination; false after the last one.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
