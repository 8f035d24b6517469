//! Tunable constants and the per-run context handed to every learner.
//!
//! Every Θ(log n) repetition count in the crate is `⌈c · ln n⌉` (or
//! `⌈c · (ln n + ln 1/δ)⌉`) with its `c` taken from [`Constants`].

use crate::error::{Error, Result};
use crate::rng::{mix64, Seed};

#[derive(Clone, Debug, PartialEq)]
pub struct Constants {
    /// Queries per probe level in the three-round degree estimator.
    pub c_probe: f64,
    /// Queries per level in Estimate.
    pub c_est: f64,
    /// Split: `t = c_split · (1/p')² · ln n`.
    pub c_split: f64,
    /// Queries per level in EstimateDegree.
    pub c_deg: f64,
    /// FindEdges: `t_u = c_find · (1/p'_u) · ln n`.
    pub c_find: f64,
    /// Sampled two-round deterministic family size `c_family · m² · ln n`.
    pub c_family: f64,
    /// Restart cap for Las Vegas wrappers before they confirm every pair.
    pub max_restarts: u32,
    /// Exponent `e` in the cell count `u = w^e` of the large-n two-round learner.
    pub cell_exponent: u32,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c_probe: 24.0,
            c_est: 24.0,
            c_split: 8.0,
            c_deg: 24.0,
            c_find: 16.0,
            c_family: 32.0,
            max_restarts: 64,
            cell_exponent: 3,
        }
    }
}

impl Constants {
    pub const KEYS: &'static [&'static str] = &[
        "c_probe",
        "c_est",
        "c_split",
        "c_deg",
        "c_find",
        "c_family",
        "max_restarts",
        "cell_exponent",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let float = || -> Result<f64> {
            match value.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
                _ => Err(Error::pre(format!(
                    "`{key}` needs a positive number, got `{value}`"
                ))),
            }
        };
        let int = || -> Result<u32> {
            value.parse::<u32>().map_err(|_| {
                Error::pre(format!(
                    "`{key}` needs a non-negative integer, got `{value}`"
                ))
            })
        };
        match key {
            "c_probe" => self.c_probe = float()?,
            "c_est" => self.c_est = float()?,
            "c_split" => self.c_split = float()?,
            "c_deg" => self.c_deg = float()?,
            "c_find" => self.c_find = float()?,
            "c_family" => self.c_family = float()?,
            "max_restarts" => self.max_restarts = int()?,
            "cell_exponent" => {
                let e = int()?;
                if e == 0 {
                    return Err(Error::pre("`cell_exponent` must be at least 1"));
                }
                self.cell_exponent = e;
            }
            _ => return Err(Error::pre(format!("unknown constant `{key}`"))),
        }
        Ok(())
    }
}

/// Seed, failure budget and constants for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Ctx {
    pub seed: u64,
    /// Failure budget; `None` means `1/n`.
    pub delta: Option<f64>,
    pub constants: Constants,
}

impl Ctx {
    pub fn new(seed: u64) -> Self {
        Ctx {
            seed,
            delta: None,
            constants: Constants::default(),
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn delta(&self, n: usize) -> f64 {
        self.delta.unwrap_or(1.0 / n.max(2) as f64)
    }

    pub fn stream(&self, alg: &str, round: u64, phase: u64) -> Seed {
        Seed::for_phase(self.seed, alg, round, phase)
    }

    /// Context for the `k`-th restart; restart 0 is `self`.
    pub fn restart(&self, k: u32) -> Ctx {
        let mut c = self.clone();
        if k > 0 {
            c.seed = mix64(self.seed ^ mix64(0x7265_7374_6172_7400 | k as u64));
        }
        c
    }
}

/// `⌈c · ln n⌉`, at least 1.
pub fn log_count(c: f64, n: usize) -> usize {
    ((c * (n.max(2) as f64).ln()).ceil() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_validates() {
        let mut c = Constants::default();
        c.set("c_est", "3.5").unwrap();
        assert_eq!(c.c_est, 3.5);
        assert!(c.set("c_est", "-1").is_err());
        assert!(c.set("nope", "1").is_err());
        assert!(c.set("cell_exponent", "0").is_err());
        for k in Constants::KEYS {
            c.set(k, "2").unwrap();
        }
    }

    #[test]
    fn restarts_change_seed() {
        let c = Ctx::new(5);
        assert_eq!(c.restart(0).seed, 5);
        assert_ne!(c.restart(1).seed, c.restart(2).seed);
        assert_eq!(c.delta(100), 0.01);
    }
}
