//! t×n matrices over `[w]` whose columns pairwise agree in at most `t/(2m)`
//! rows. Columns are codewords of a polynomial code with `2m(k−1) ≤ t ≤ q`.

use super::code::{min_base, next_prime, PolyCode};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMatrix {
    rows: usize,
    cols: usize,
    w: usize,
    m: usize,
    k: usize,
    entries: Vec<u32>,
}

/// Code shape `(q, k, t)` minimising the five-round cost `q·t + C(q, 2)`.
pub fn partition_shape(n: usize, m: usize) -> (usize, usize, usize) {
    let m = m.max(1);
    let max_k = (usize::BITS - n.max(2).leading_zeros()) as usize;
    let mut best: Option<((usize, usize, usize), usize)> = None;
    for k in 1..=max_k {
        let t = (2 * m * (k - 1)).max(1);
        let q = next_prime(min_base(n, k).max(t));
        let cost = q * t + q * (q - 1) / 2;
        if best.map_or(true, |(_, c)| cost < c) {
            best = Some(((q, k, t), cost));
        }
    }
    best.expect("at least one shape").0
}

pub fn build_partition_matrix(n: usize, m: usize) -> Result<PartitionMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::pre("partition matrix needs n ≥ 1 and m ≥ 1"));
    }
    let (q, k, t) = partition_shape(n, m);
    let code = PolyCode::new(q, k, t)?;
    let mut entries = vec![0u32; t * n];
    for v in 0..n {
        for i in 0..t {
            entries[i * n + v] = code.symbol(v, i) as u32;
        }
    }
    let pm = PartitionMatrix {
        rows: t,
        cols: n,
        w: q,
        m,
        k,
        entries,
    };
    let worst = pm.max_agreement();
    if 2 * m * worst > t {
        return Err(Error::AlgorithmContract(format!(
            "partition matrix agreement {worst} exceeds t/(2m) = {t}/{}",
            2 * m
        )));
    }
    Ok(pm)
}

impl PartitionMatrix {
    pub fn from_entries(
        rows: usize,
        cols: usize,
        w: usize,
        m: usize,
        entries: Vec<u32>,
    ) -> Result<Self> {
        if entries.len() != rows * cols || entries.iter().any(|&e| e as usize >= w) {
            return Err(Error::Parse(
                "partition matrix entries do not fit its shape".into(),
            ));
        }
        Ok(PartitionMatrix {
            rows,
            cols,
            w,
            m,
            k: 0,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet(&self) -> usize {
        self.w
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.entries[row * self.cols + col] as usize
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Largest number of rows on which two columns agree, over all pairs.
    pub fn max_agreement(&self) -> usize {
        self.agreement_histogram()
            .iter()
            .rposition(|&c| c > 0)
            .unwrap_or(0)
    }

    /// `h[a]` = number of column pairs agreeing in exactly `a` rows.
    pub fn agreement_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.rows + 1];
        let cols: Vec<Vec<u32>> = (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| self.entries[r * self.cols + c])
                    .collect()
            })
            .collect();
        for a in 0..self.cols {
            for b in a + 1..self.cols {
                let agree = cols[a].iter().zip(&cols[b]).filter(|(x, y)| x == y).count();
                hist[agree] += 1;
            }
        }
        hist
    }

    /// True iff every pair agrees in at most `t/(2m)` rows.
    pub fn satisfies_bound(&self) -> bool {
        2 * self.m * self.max_agreement() <= self.rows
    }

    /// Rows in which no edge has both endpoints in one cell.
    pub fn separating_rows(&self, edges: &[(usize, usize)]) -> usize {
        (0..self.rows)
            .filter(|&r| {
                edges
                    .iter()
                    .all(|&(u, v)| self.entry(r, u) != self.entry(r, v))
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn few_columns_use_one_row() {
        let pm = build_partition_matrix(5, 2).unwrap();
        assert_eq!(pm.rows(), 1);
        assert!(pm.alphabet() >= 5);
        assert_eq!(pm.max_agreement(), 0);
    }

    #[test]
    fn bound_holds_n256_m4() {
        let pm = build_partition_matrix(256, 4).unwrap();
        let hist = pm.agreement_histogram();
        let max = hist.iter().rposition(|&c| c > 0).unwrap();
        assert!(max <= pm.rows() / (2 * 4), "max {max}, rows {}", pm.rows());
        assert_eq!(hist.iter().sum::<usize>(), 256 * 255 / 2);
    }

    #[test]
    fn half_the_rows_separate_any_edge_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (n, m) in [(64, 1), (128, 3), (200, 5)] {
            let pm = build_partition_matrix(n, m).unwrap();
            for _ in 0..200 {
                let edges: Vec<(usize, usize)> = (0..m)
                    .map(|_| loop {
                        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                        if a != b {
                            break (a, b);
                        }
                    })
                    .collect();
                assert!(2 * pm.separating_rows(&edges) >= pm.rows());
            }
        }
    }
}
