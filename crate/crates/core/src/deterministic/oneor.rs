//! The one-or detector: 2t non-adaptive queries that tell apart "no loop",
//! "exactly loop v" and "more than one loop".
//!
//! Vertex `i` is assigned the `i`-th `t`-subset of `[2t]` in lexicographic
//! order and appears in exactly those queries. The OR of two or more distinct
//! `t`-subsets has weight above `t`.

use crate::error::{Error, Result};

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Lexicographic rank of a `t`-subset of `[width]` given as a bitmask
/// (bit `j` = element `j`).
pub fn rank_subset(mask: u64, width: u32) -> u128 {
    let t = mask.count_ones() as u64;
    let mut rank = 0u128;
    let mut placed = 0u64;
    let mut prev = 0u32;
    for j in 0..width {
        if mask >> j & 1 == 1 {
            // every subset that chooses a smaller element here comes first
            for skip in prev..j {
                rank += binomial((width - skip - 1) as u64, t - placed - 1);
            }
            placed += 1;
            prev = j + 1;
        }
    }
    rank
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(mut rank: u128, width: u32, t: u32) -> u64 {
    let mut mask = 0u64;
    let mut next = 0u32;
    for placed in 0..t {
        let mut j = next;
        loop {
            let below = binomial((width - j - 1) as u64, (t - placed - 1) as u64);
            if rank < below {
                break;
            }
            rank -= below;
            j += 1;
        }
        mask |= 1 << j;
        next = j + 1;
    }
    mask
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneOrCode {
    n: usize,
    t: u32,
    assignments: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneOr {
    Empty,
    Vertex(usize),
    Error,
}

/// Minimal `t ≥ 1` with `C(2t, t) ≥ n`; vertices get the first `n`
/// lexicographic `t`-subsets.
pub fn build_one_or_code(n: usize) -> Result<OneOrCode> {
    if n == 0 {
        return Err(Error::pre("one-or code needs at least one vertex"));
    }
    let mut t = 1u32;
    while binomial(2 * t as u64, t as u64) < n as u128 {
        t += 1;
    }
    if 2 * t > 64 {
        return Err(Error::pre("one-or code wider than 64 queries"));
    }
    let assignments = (0..n).map(|i| unrank_subset(i as u128, 2 * t, t)).collect();
    Ok(OneOrCode { n, t, assignments })
}

impl OneOrCode {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Number of queries, `2t`.
    pub fn width(&self) -> usize {
        2 * self.t as usize
    }

    pub fn assignment(&self, v: usize) -> u64 {
        self.assignments[v]
    }

    /// Members (indices into `0..n`) of query `k`.
    pub fn query(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.assignments[v] >> k & 1 == 1)
    }

    pub fn decode(&self, answers: &[bool]) -> OneOr {
        debug_assert_eq!(answers.len(), self.width());
        let mask = answers
            .iter()
            .enumerate()
            .fold(0u64, |m, (k, &a)| if a { m | 1 << k } else { m });
        if mask == 0 {
            return OneOr::Empty;
        }
        if mask.count_ones() != self.t {
            return OneOr::Error;
        }
        let r = rank_subset(mask, 2 * self.t);
        if r < self.n as u128 {
            debug_assert_eq!(self.assignments[r as usize], mask);
            OneOr::Vertex(r as usize)
        } else {
            OneOr::Error
        }
    }
}
