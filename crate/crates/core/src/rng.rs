//! Seeded randomness and p-random query generation.
//!
//! Every random object is drawn from a ChaCha8 keystream addressed by
//! `(seed value, stream id, draw index)`. The draw index selects a disjoint
//! 2^40-word window of the stream, so any single draw can be regenerated
//! without replaying earlier ones.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::VertexSet;

const DRAW_WINDOW_BITS: u32 = 40;

/// SplitMix64 finaliser; used for all seed derivation.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Stream id for one (algorithm, round, phase) triple.
pub fn stream_id(alg: &str, round: u64, phase: u64) -> u64 {
    mix64(fnv1a(alg.as_bytes()) ^ mix64(round.wrapping_mul(0x1_0000_0001) ^ mix64(phase)))
}

/// Per-trial seed derived from a master seed; independent of the trial count.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    mix64(master ^ mix64(trial ^ 0x7472_6961_6c00_0000))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    pub value: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(value: u64, stream: u64) -> Self {
        Seed { value, stream }
    }

    /// Shorthand for `Seed::new(value, stream_id(alg, round, phase))`.
    pub fn for_phase(value: u64, alg: &str, round: u64, phase: u64) -> Self {
        Seed::new(value, stream_id(alg, round, phase))
    }

    /// Generator positioned at the start of draw `index`.
    pub fn rng_at(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.value);
        rng.set_stream(self.stream);
        rng.set_word_pos((index as u128) << DRAW_WINDOW_BITS);
        rng
    }

    pub fn rng(&self) -> ChaCha8Rng {
        self.rng_at(0)
    }
}

/// Fixed-point threshold: a uniform 53-bit word below it has probability
/// within 2^-53 of `p`.
#[inline]
fn threshold53(p: f64) -> u64 {
    (p * (1u64 << 53) as f64).round() as u64
}

/// `Some(k)` when `p == 2^-k` for a small `k`.
fn dyadic_exponent(p: f64) -> Option<u32> {
    (1..=20).find(|&k| p == 1.0 / (1u64 << k) as f64)
}

/// Each member of `domain` kept independently with probability `p`.
pub fn bernoulli_subset<R: RngCore>(rng: &mut R, domain: &VertexSet, p: f64) -> VertexSet {
    let n = domain.universe();
    if p >= 1.0 {
        return domain.clone();
    }
    if p <= 0.0 {
        return VertexSet::empty(n);
    }
    if let Some(k) = dyadic_exponent(p) {
        let words = domain
            .words()
            .iter()
            .map(|&d| {
                if d == 0 {
                    return 0;
                }
                let mut w = u64::MAX;
                for _ in 0..k {
                    w &= rng.next_u64();
                }
                w & d
            })
            .collect();
        return VertexSet::from_words(n, words);
    }
    let th = threshold53(p);
    let mut out = VertexSet::empty(n);
    for v in domain.iter() {
        if (rng.next_u64() >> 11) < th {
            out.insert(v);
        }
    }
    out
}

/// A repeated p-random query over a fixed domain.
#[derive(Clone, Debug)]
pub struct PRandomSchedule {
    p: f64,
    t: usize,
    domain: VertexSet,
    seed: Seed,
}

impl PRandomSchedule {
    pub fn new(p: f64, t: usize, domain: VertexSet, seed: Seed) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::pre(format!(
                "inclusion probability {p} outside (0, 1]"
            )));
        }
        if t == 0 {
            return Err(Error::pre("repetition count must be positive"));
        }
        if domain.is_empty() {
            return Err(Error::pre("p-random domain is empty"));
        }
        Ok(PRandomSchedule { p, t, domain, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn domain(&self) -> &VertexSet {
        &self.domain
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    /// Draw `index` (0-based, `< t`).
    pub fn draw(&self, index: usize) -> VertexSet {
        assert!(index < self.t, "draw index {index} outside 0..{}", self.t);
        draw_p_random(self.seed, index as u64, &self.domain, self.p)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexSet> + '_ {
        (0..self.t).map(|i| self.draw(i))
    }
}

/// Stateless form of [`PRandomSchedule::draw`].
pub fn draw_p_random(seed: Seed, index: u64, domain: &VertexSet, p: f64) -> VertexSet {
    bernoulli_subset(&mut seed.rng_at(index), domain, p)
}

/// Trials needed so that an event of per-trial probability `rate` occurs for
/// every one of the ~n² pairs with total failure probability at most `delta`.
///
/// Uses the exact geometric bound `(ln n² + ln 1/δ) / -ln(1 - rate)`, replaced
/// by the linearised `(2 ln n + ln 1/δ) / rate` for `rate <= 1/2`, where the
/// two agree to first order. A certain event needs one trial.
pub fn repetitions(n: usize, delta: f64, rate: f64) -> Result<usize> {
    if !(rate > 0.0) {
        return Err(Error::pre(format!(
            "per-trial success rate {rate} must be positive"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::pre(format!("failure budget {delta} outside (0, 1)")));
    }
    if rate >= 1.0 {
        return Ok(1);
    }
    let budget = 2.0 * (n.max(2) as f64).ln() + (1.0 / delta).ln();
    let t = if rate <= 0.5 {
        budget / rate
    } else {
        budget / -(1.0 - rate).ln()
    };
    Ok((t.ceil() as usize).max(1))
}

/// Uniform random permutation of `0..n`.
pub fn shuffled(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_probability_returns_domain() {
        let dom = VertexSet::from_members(100, (0..100).step_by(3));
        let s = draw_p_random(Seed::new(1, 2), 0, &dom, 1.0);
        assert_eq!(s, dom);
    }

    #[test]
    fn draws_are_reproducible_and_random_access() {
        let dom = VertexSet::full(500);
        let sched = PRandomSchedule::new(0.3, 50, dom, Seed::new(42, 7)).unwrap();
        let forward: Vec<_> = sched.iter().collect();
        for i in (0..50).rev() {
            assert_eq!(sched.draw(i), forward[i]);
        }
        assert_ne!(forward[0], forward[1]);
    }

    #[test]
    fn draws_stay_inside_domain() {
        let dom = VertexSet::from_members(300, (0..300).filter(|v| v % 7 == 2));
        for p in [0.5, 0.125, 0.3] {
            for i in 0..20 {
                assert!(draw_p_random(Seed::new(9, 1), i, &dom, p).is_subset(&dom));
            }
        }
    }

    #[test]
    fn half_probability_mean_size() {
        // 10^4 draws over a domain of 10^4; each draw's size is Bin(10^4, 1/2).
        let n = 10_000;
        let dom = VertexSet::full(n);
        let draws = 10_000u64;
        let total: usize = (0..draws)
            .map(|i| draw_p_random(Seed::new(5, 5), i, &dom, 0.5).len())
            .sum();
        let mean = total as f64 / draws as f64;
        let sd_of_mean = (n as f64 * 0.25).sqrt() / (draws as f64).sqrt();
        assert!((mean - 5000.0).abs() <= 3.0 * sd_of_mean, "mean {mean}");
    }

    #[test]
    fn inclusion_frequency_converges() {
        let dom = VertexSet::full(8);
        let draws = 100_000u64;
        for p in [0.5, 0.2, 1.0 / 16.0, 0.731] {
            let hits = (0..draws)
                .filter(|&i| draw_p_random(Seed::new(11, 3), i, &dom, p).contains(5))
                .count() as f64;
            let sd = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (hits - draws as f64 * p).abs() <= 4.0 * sd,
                "p={p} hits={hits}"
            );
        }
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        let dom = VertexSet::full(1);
        let draws = 20_000u64;
        let a = Seed::new(3, stream_id("x", 1, 0));
        let b = Seed::new(3, stream_id("x", 1, 1));
        let mut agree = 0i64;
        for i in 0..draws {
            let x = draw_p_random(a, i, &dom, 0.5).contains(0);
            let y = draw_p_random(b, i, &dom, 0.5).contains(0);
            agree += if x == y { 1 } else { -1 };
        }
        // correlation of two independent fair ±1 sequences: sd = 1/sqrt(N)
        let corr = agree as f64 / draws as f64;
        assert!(corr.abs() < 4.0 / (draws as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn repetition_counts() {
        // p = 1/4, r = 2, m = 2: rate = (1/16)(1 - 1/2 - 1/8) = 0.0234375
        let rate = 0.0625 * (1.0 - 0.5 - 0.125);
        assert_eq!(rate, 0.0234375);
        assert_eq!(repetitions(16, 0.5, rate).unwrap(), 267);
        assert_eq!(repetitions(16, 0.5, 1.0).unwrap(), 1);
        assert!(repetitions(16, 0.1, 0.0).is_err());
        assert!(repetitions(16, 0.1, -0.5).is_err());
        let mut last = usize::MAX;
        for d in [0.001, 0.01, 0.1, 0.5] {
            let t = repetitions(100, d, 0.05).unwrap();
            assert!(t <= last);
            last = t;
        }
    }

    #[test]
    fn schedule_rejects_bad_parameters() {
        let dom = VertexSet::full(4);
        assert!(PRandomSchedule::new(0.0, 3, dom.clone(), Seed::new(0, 0)).is_err());
        assert!(PRandomSchedule::new(1.5, 3, dom.clone(), Seed::new(0, 0)).is_err());
        assert!(PRandomSchedule::new(0.5, 0, dom, Seed::new(0, 0)).is_err());
        assert!(PRandomSchedule::new(0.5, 1, VertexSet::empty(4), Seed::new(0, 0)).is_err());
    }
}
