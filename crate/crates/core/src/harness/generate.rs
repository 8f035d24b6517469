//! Instance generators. Vertices in parameters are 1-indexed, like the graph
//! file format.

use std::path::PathBuf;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{edge, EdgeSet, HiddenGraph};
use crate::rng::{shuffled, Seed};

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `m` distinct pairs, uniformly.
    ErdosRenyiM {
        m: usize,
    },
    /// `d` leaves on `center`, or on a random centre.
    PlantedStar {
        d: usize,
        center: Option<usize>,
    },
    /// Two random centres with `d1` and `d2` private leaves.
    DoubleStar {
        d1: usize,
        d2: usize,
    },
    /// `m` disjoint edges.
    Matching {
        m: usize,
    },
    /// `{i} × ([m/2] \ {i}) ∪ {i} × J` with `J ⊆ [m/2+1, n]`, `|J| = m/2`;
    /// random `i` and `J` when absent.
    LowerBoundNonAdaptive {
        m: usize,
        i: Option<usize>,
        j: Option<Vec<usize>>,
    },
    /// A star on `v_t` over `V′ ∪ U ∪ W` with `|V′| = m/2`, `|U| = m/2 − d`
    /// and `d` draws for `W`; at most `m − 1` edges.
    LowerBoundLasVegas {
        m: usize,
    },
    FromFile(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub generator: Generator,
    pub n: usize,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(generator: Generator, n: usize, seed: u64) -> Self {
        InstanceSpec { generator, n, seed }
    }

    pub fn name(&self) -> &'static str {
        match self.generator {
            Generator::ErdosRenyiM { .. } => "erdos-renyi-m",
            Generator::PlantedStar { .. } => "planted-star",
            Generator::DoubleStar { .. } => "double-star",
            Generator::Matching { .. } => "matching",
            Generator::LowerBoundNonAdaptive { .. } => "lower-bound-LBNAMC",
            Generator::LowerBoundLasVegas { .. } => "lower-bound-LVLBTR",
            Generator::FromFile(_) => "from-file",
        }
    }

    /// Edge bound handed to learners that need one.
    pub fn m_bound(&self) -> Option<usize> {
        Some(match &self.generator {
            Generator::ErdosRenyiM { m } | Generator::Matching { m } => *m,
            Generator::PlantedStar { d, .. } => *d,
            Generator::DoubleStar { d1, d2 } => d1 + d2,
            Generator::LowerBoundNonAdaptive { m, .. } | Generator::LowerBoundLasVegas { m } => *m,
            Generator::FromFile(_) => return None,
        })
    }

    /// Same instance family, another seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        InstanceSpec {
            seed,
            ..self.clone()
        }
    }
}

/// `d = max(1, ⌊m^{2/3} log^{1/3} m / (2^10 log^{1/3} n)⌋)`.
pub fn lvlbtr_d(n: usize, m: usize) -> usize {
    let (m, n) = (m.max(2) as f64, n.max(2) as f64);
    let d = m.powf(2.0 / 3.0) * m.log2().cbrt() / (1024.0 * n.log2().cbrt());
    (d.floor() as usize).max(1)
}

fn check_vertex(n: usize, v: usize) -> Result<usize> {
    if v == 0 || v > n {
        return Err(Error::pre(format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn generate(spec: &InstanceSpec) -> Result<HiddenGraph> {
    let n = spec.n;
    let mut rng = Seed::for_phase(spec.seed, spec.name(), 0, 0).rng();
    let pairs = n * n.saturating_sub(1) / 2;
    let edges: EdgeSet = match &spec.generator {
        Generator::FromFile(path) => {
            let g = HiddenGraph::read_file(path)?;
            if g.n() != n && n != 0 {
                return Err(Error::pre(format!(
                    "graph file has n = {}, instance asks for n = {n}",
                    g.n()
                )));
            }
            return Ok(g);
        }
        Generator::ErdosRenyiM { m } => {
            if *m > pairs {
                return Err(Error::pre(format!("{m} edges do not fit on {n} vertices")));
            }
            let mut chosen = EdgeSet::new();
            if *m * 2 > pairs {
                let all: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect();
                for i in sample(&mut rng, pairs, *m) {
                    chosen.insert(all[i]);
                }
            } else {
                while chosen.len() < *m {
                    let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    if u != v {
                        chosen.insert(edge(u, v));
                    }
                }
            }
            chosen
        }
        Generator::PlantedStar { d, center } => {
            if *d >= n {
                return Err(Error::pre(format!(
                    "a star with {d} leaves needs more than {n} vertices"
                )));
            }
            let c = match center {
                Some(c) => check_vertex(n, *c)?,
                None => rng.gen_range(0..n),
            };
            let others: Vec<usize> = (0..n).filter(|&v| v != c).collect();
            sample(&mut rng, others.len(), *d)
                .into_iter()
                .map(|i| edge(c, others[i]))
                .collect()
        }
        Generator::DoubleStar { d1, d2 } => {
            if d1 + d2 + 2 > n {
                return Err(Error::pre("double star does not fit"));
            }
            let perm = shuffled(&mut rng, n);
            let (c1, c2) = (perm[0], perm[1]);
            let mut e: EdgeSet = perm[2..2 + d1].iter().map(|&v| edge(c1, v)).collect();
            e.extend(perm[2 + d1..2 + d1 + d2].iter().map(|&v| edge(c2, v)));
            e
        }
        Generator::Matching { m } => {
            if 2 * m > n {
                return Err(Error::pre(format!(
                    "{m} disjoint edges need {} vertices",
                    2 * m
                )));
            }
            let perm = shuffled(&mut rng, n);
            (0..*m)
                .map(|k| edge(perm[2 * k], perm[2 * k + 1]))
                .collect()
        }
        Generator::LowerBoundNonAdaptive { m, i, j } => {
            let h = m / 2;
            if h == 0 || 2 * h > n {
                return Err(Error::pre("lower-bound family needs 2 ≤ m ≤ n"));
            }
            let i = match i {
                Some(i) if (1..=h).contains(i) => i - 1,
                Some(i) => return Err(Error::pre(format!("i = {i} outside 1..={h}"))),
                None => rng.gen_range(0..h),
            };
            let legs: Vec<usize> = match j {
                Some(js) => {
                    if js.len() != h {
                        return Err(Error::pre(format!("J needs {h} vertices")));
                    }
                    js.iter()
                        .map(|&v| {
                            let v = check_vertex(n, v)?;
                            if v < h {
                                return Err(Error::pre("J must avoid the first m/2 vertices"));
                            }
                            Ok(v)
                        })
                        .collect::<Result<_>>()?
                }
                None => sample(&mut rng, n - h, h)
                    .into_iter()
                    .map(|x| x + h)
                    .collect(),
            };
            let mut e: EdgeSet = (0..h).filter(|&x| x != i).map(|x| edge(i, x)).collect();
            e.extend(legs.into_iter().map(|v| edge(i, v)));
            e
        }
        Generator::LowerBoundLasVegas { m } => {
            let r = m / 2;
            let d = lvlbtr_d(n, *m);
            if r == 0 || d > r || r + (r - d) + 1 > n {
                return Err(Error::pre(
                    "lower-bound distribution needs 2 ≤ m and more room",
                ));
            }
            let s = r - d;
            let t = rng.gen_range(0..r);
            let rest: Vec<usize> = (r..n).collect();
            let u_idx = sample(&mut rng, rest.len(), s).into_vec();
            let u: Vec<usize> = u_idx.iter().map(|&i| rest[i]).collect();
            let pool: Vec<usize> = rest.iter().copied().filter(|v| !u.contains(v)).collect();
            let mut e: EdgeSet = (0..r).filter(|&x| x != t).map(|x| edge(t, x)).collect();
            e.extend(u.iter().map(|&x| edge(t, x)));
            for _ in 0..d {
                e.insert(edge(t, pool[rng.gen_range(0..pool.len())]));
            }
            e
        }
    };
    Ok(HiddenGraph::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_star_with_given_centre() {
        let spec = InstanceSpec::new(
            Generator::PlantedStar {
                d: 5,
                center: Some(1),
            },
            16,
            3,
        );
        let g = generate(&spec).unwrap();
        assert_eq!(g.m(), 5);
        assert!(g.edges().iter().all(|&(u, _)| u == 0));
        assert_eq!(g, generate(&spec).unwrap());
    }

    #[test]
    fn exact_edge_counts() {
        for (gen, m) in [
            (Generator::ErdosRenyiM { m: 30 }, 30),
            (Generator::ErdosRenyiM { m: 40 }, 40),
            (Generator::Matching { m: 6 }, 6),
            (Generator::DoubleStar { d1: 4, d2: 6 }, 10),
            (
                Generator::LowerBoundNonAdaptive {
                    m: 8,
                    i: None,
                    j: None,
                },
                7,
            ),
        ] {
            for seed in 0..5 {
                let g = generate(&InstanceSpec::new(gen.clone(), 12, seed)).unwrap();
                assert_eq!(g.m(), m, "{gen:?}");
            }
        }
        let spec = InstanceSpec::new(Generator::ErdosRenyiM { m: 67 }, 12, 0);
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn non_adaptive_lower_bound_shape() {
        let spec = InstanceSpec::new(
            Generator::LowerBoundNonAdaptive {
                m: 6,
                i: Some(2),
                j: Some(vec![10, 11, 12]),
            },
            20,
            0,
        );
        let g = generate(&spec).unwrap();
        let expect: EdgeSet = [(1, 0), (1, 2), (1, 9), (1, 10), (1, 11)]
            .into_iter()
            .map(|(a, b)| edge(a, b))
            .collect();
        assert_eq!(g.edge_set(), expect);
    }

    #[test]
    fn las_vegas_lower_bound_is_a_star() {
        for seed in 0..10 {
            let g = generate(&InstanceSpec::new(
                Generator::LowerBoundLasVegas { m: 16 },
                200,
                seed,
            ))
            .unwrap();
            assert!(g.m() < 16 && g.m() >= 16 - 2);
            let centre = (0..200).max_by_key(|&v| g.degree(v)).unwrap();
            assert_eq!(g.degree(centre), g.m());
            assert!(centre < 8);
        }
    }
}
