//! Per-trial rows, their CSV form, and aggregates recomputed from rows.

use crate::error::{Error, Result};

pub const TRIAL_HEADER: &str = "trial,seed,success,queries,rounds,restarts,wall_ms";
pub const AGGREGATE_HEADER: &str = "algorithm,n,m,trials,successes,success_rate,wilson_low,wilson_high,queries_mean,queries_min,queries_max,rounds_max,restarts_total,queries_per_mlogn";

/// One trial. `restarts` counts Las Vegas restarts plus one when a
/// fallback round ran.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub success: bool,
    pub queries: usize,
    pub rounds: usize,
    pub restarts: u32,
    pub wall_ms: u64,
}

impl TrialRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.trial,
            self.seed,
            u8::from(self.success),
            self.queries,
            self.rounds,
            self.restarts,
            self.wall_ms
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 7 {
            return Err(Error::Parse(format!("trial row needs 7 fields: `{line}`")));
        }
        let bad = |what: &str| Error::Parse(format!("bad {what} in `{line}`"));
        Ok(TrialRow {
            trial: f[0].parse().map_err(|_| bad("trial"))?,
            seed: f[1].parse().map_err(|_| bad("seed"))?,
            success: match f[2] {
                "1" => true,
                "0" => false,
                _ => return Err(bad("success")),
            },
            queries: f[3].parse().map_err(|_| bad("queries"))?,
            rounds: f[4].parse().map_err(|_| bad("rounds"))?,
            restarts: f[5].parse().map_err(|_| bad("restarts"))?,
            wall_ms: f[6].parse().map_err(|_| bad("wall_ms"))?,
        })
    }
}

pub fn rows_to_csv(rows: &[TrialRow]) -> String {
    let mut s = String::from(TRIAL_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

pub fn rows_from_csv(text: &str) -> Result<Vec<TrialRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == TRIAL_HEADER => {}
        _ => return Err(Error::Parse("missing trial CSV header".into())),
    }
    lines.map(TrialRow::parse_csv).collect()
}

/// 95% Wilson score interval for `k` successes out of `n`.
pub fn wilson(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054f64;
    let (k, n) = (k as f64, n as f64);
    let phat = k / n;
    let denom = 1.0 + z * z / n;
    let centre = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Half-width of the Wilson interval below the observed rate.
pub fn wilson_margin(k: usize, n: usize) -> f64 {
    let (lo, _) = wilson(k, n);
    (k as f64 / n.max(1) as f64 - lo).max(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub queries_mean: f64,
    pub queries_min: usize,
    pub queries_max: usize,
    pub rounds_max: usize,
    pub restarts_total: u64,
    /// `queries_mean / (m · log₂ n)`.
    pub queries_per_mlogn: f64,
}

pub fn aggregate(algorithm: &str, n: usize, m: usize, rows: &[TrialRow]) -> Aggregate {
    let trials = rows.len();
    let successes = rows.iter().filter(|r| r.success).count();
    let (wilson_low, wilson_high) = wilson(successes, trials);
    let total: usize = rows.iter().map(|r| r.queries).sum();
    let queries_mean = total as f64 / trials.max(1) as f64;
    let scale = m.max(1) as f64 * (n.max(2) as f64).log2();
    Aggregate {
        algorithm: algorithm.to_string(),
        n,
        m,
        trials,
        successes,
        success_rate: successes as f64 / trials.max(1) as f64,
        wilson_low,
        wilson_high,
        queries_mean,
        queries_min: rows.iter().map(|r| r.queries).min().unwrap_or(0),
        queries_max: rows.iter().map(|r| r.queries).max().unwrap_or(0),
        rounds_max: rows.iter().map(|r| r.rounds).max().unwrap_or(0),
        restarts_total: rows.iter().map(|r| r.restarts as u64).sum(),
        queries_per_mlogn: queries_mean / scale,
    }
}

impl Aggregate {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.3},{},{},{},{},{:.6}",
            self.algorithm,
            self.n,
            self.m,
            self.trials,
            self.successes,
            self.success_rate,
            self.wilson_low,
            self.wilson_high,
            self.queries_mean,
            self.queries_min,
            self.queries_max,
            self.rounds_max,
            self.restarts_total,
            self.queries_per_mlogn
        )
    }
}

/// Two-column series `m·log₂ n <TAB> queries`, one line per trial.
pub fn plot_series(n: usize, m: usize, rows: &[TrialRow]) -> String {
    let x = m as f64 * (n.max(2) as f64).log2();
    let mut s = String::from("# m_log2_n\tqueries\n");
    for r in rows {
        s.push_str(&format!("{x:.6}\t{}\n", r.queries));
    }
    s
}
