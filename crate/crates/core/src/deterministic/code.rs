//! Polynomial-evaluation codes over a prime field.
//!
//! Vertex `v` is the polynomial whose coefficients are the base-`q` digits of
//! `v` (degree < k); its codeword is the evaluation at `0, 1, …, len-1`.
//! Two distinct codewords agree in at most `k - 1` positions.

use crate::error::{Error, Result};

pub fn is_prime(x: usize) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `≥ x`.
pub fn next_prime(x: usize) -> usize {
    let mut p = x.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// `q^k`, saturating.
pub fn capacity(q: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, _| acc.saturating_mul(q))
}

/// Smallest `q` with `q^k ≥ n`.
pub fn min_base(n: usize, k: usize) -> usize {
    let mut q = (n as f64).powf(1.0 / k as f64).floor().max(1.0) as usize;
    while capacity(q, k) < n {
        q += 1;
    }
    while q > 1 && capacity(q - 1, k) >= n {
        q -= 1;
    }
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCode {
    q: usize,
    k: usize,
    len: usize,
}

impl PolyCode {
    pub fn new(q: usize, k: usize, len: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::pre(format!("alphabet size {q} is not prime")));
        }
        if k == 0 || len == 0 || len > q {
            return Err(Error::pre(format!(
                "polynomial code needs k ≥ 1 and 1 ≤ length ≤ q (k={k}, length={len}, q={q})"
            )));
        }
        Ok(PolyCode { q, k, len })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of distinct codewords.
    pub fn capacity(&self) -> usize {
        capacity(self.q, self.k)
    }

    /// Symbol of codeword `v` at position `i` (Horner evaluation at `x = i`).
    pub fn symbol(&self, v: usize, i: usize) -> usize {
        let q = self.q;
        let mut digits = [0usize; 64];
        let mut x = v;
        for d in digits.iter_mut().take(self.k) {
            *d = x % q;
            x /= q;
        }
        let mut acc = 0;
        for d in digits[..self.k].iter().rev() {
            acc = (acc * i + d) % q;
        }
        acc
    }

    pub fn codeword(&self, v: usize) -> Vec<usize> {
        (0..self.len).map(|i| self.symbol(v, i)).collect()
    }
}
