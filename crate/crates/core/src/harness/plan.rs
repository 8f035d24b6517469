//! Experiment plan files: one `key = value` per line, `#` starts a comment.

use std::fs;
use std::path::{Path, PathBuf};

use super::dispatch::algorithm;
use super::generate::{Generator, InstanceSpec};
use crate::config::Constants;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub algorithm: String,
    /// Instance family; each trial draws its own instance seed.
    pub instance: InstanceSpec,
    /// Edge bound handed to the learner; defaults to the generator's.
    pub m: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub delta: Option<f64>,
    pub rounds: Option<usize>,
    pub w: Option<usize>,
    pub constants: Constants,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    /// Reuse one instance (the plan seed's) for every trial.
    pub fixed_instance: bool,
    pub trials_csv: Option<PathBuf>,
    pub aggregate_csv: Option<PathBuf>,
    pub plot_tsv: Option<PathBuf>,
    pub transcripts: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn new(algorithm: &str, instance: InstanceSpec, trials: usize, seed: u64) -> Self {
        ExperimentPlan {
            algorithm: algorithm.to_string(),
            instance,
            m: None,
            trials,
            seed,
            delta: None,
            rounds: None,
            w: None,
            constants: Constants::default(),
            threads: None,
            fixed_instance: false,
            trials_csv: None,
            aggregate_csv: None,
            plot_tsv: None,
            transcripts: None,
            cache: None,
        }
    }

    /// The bound the learner is told.
    pub fn learner_m(&self) -> Option<usize> {
        self.m.or_else(|| self.instance.m_bound())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::pre(format!("`{key}`: cannot parse `{v}`")))
}

/// Splits `key = value` lines; `#` starts a comment, keys must be unique.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut kv: Vec<(String, String)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", no + 1)))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if kv.iter().any(|(x, _)| *x == k) {
            return Err(Error::Parse(format!("line {}: `{k}` given twice", no + 1)));
        }
        kv.push((k, v));
    }
    Ok(kv)
}

struct Keys<'a> {
    kv: &'a [(String, String)],
    base: &'a Path,
}

impl Keys<'_> {
    fn get(&self, k: &str) -> Option<&str> {
        self.kv
            .iter()
            .find(|(x, _)| x == k)
            .map(|(_, v)| v.as_str())
    }

    fn req(&self, k: &str) -> Result<&str> {
        self.get(k)
            .ok_or_else(|| Error::pre(format!("missing `{k}`")))
    }

    fn num<T: std::str::FromStr>(&self, k: &str) -> Result<Option<T>> {
        self.get(k).map(|v| parse_num(k, v)).transpose()
    }

    fn path(&self, k: &str) -> Option<PathBuf> {
        self.get(k).map(|v| self.base.join(v))
    }
}

fn need(v: Option<usize>, k: &str) -> Result<usize> {
    v.ok_or_else(|| Error::pre(format!("generator needs `{k}`")))
}

fn instance(keys: &Keys<'_>) -> Result<InstanceSpec> {
    let n: usize = parse_num("n", keys.req("n")?)?;
    let m = keys.num("m")?;
    let generator = match keys.req("generator")? {
        "erdos-renyi-m" => Generator::ErdosRenyiM { m: need(m, "m")? },
        "matching" => Generator::Matching { m: need(m, "m")? },
        "planted-star" => Generator::PlantedStar {
            d: need(keys.num("d")?, "d")?,
            center: keys.num("center")?,
        },
        "double-star" => {
            let d1 = need(keys.num("d1")?.or(keys.num("d")?), "d1")?;
            Generator::DoubleStar {
                d1,
                d2: keys.num("d2")?.unwrap_or(d1),
            }
        }
        "lower-bound-LBNAMC" => Generator::LowerBoundNonAdaptive {
            m: need(m, "m")?,
            i: keys.num("i")?,
            j: keys
                .get("j")
                .map(|v| {
                    v.split(',')
                        .map(|x| parse_num("j", x.trim()))
                        .collect::<Result<Vec<usize>>>()
                })
                .transpose()?,
        },
        "lower-bound-LVLBTR" => Generator::LowerBoundLasVegas { m: need(m, "m")? },
        "from-file" => Generator::FromFile(
            keys.path("file")
                .ok_or_else(|| Error::pre("from-file generator needs `file`"))?,
        ),
        other => return Err(Error::pre(format!("unknown generator `{other}`"))),
    };
    Ok(InstanceSpec::new(
        generator,
        n,
        keys.num("seed")?.unwrap_or(0),
    ))
}

/// Parses an instance file: the generator keys of a plan plus `seed`.
pub fn parse_instance_spec(text: &str, base: &Path) -> Result<InstanceSpec> {
    let kv = parse_key_values(text)?;
    if let Some((k, _)) = kv
        .iter()
        .find(|(k, _)| !INSTANCE_KEYS.contains(&k.as_str()))
    {
        return Err(Error::pre(format!("unknown instance key `{k}`")));
    }
    instance(&Keys { kv: &kv, base })
}

pub fn read_instance_spec(path: &Path) -> Result<InstanceSpec> {
    let text = fs::read_to_string(path)?;
    parse_instance_spec(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Parses plan text; relative paths resolve against `base`.
pub fn parse_plan(text: &str, base: &Path) -> Result<ExperimentPlan> {
    let kv = parse_key_values(text)?;
    let keys = Keys { kv: &kv, base };
    let alg = keys.req("algorithm")?.to_string();
    algorithm(&alg)?;
    let instance = instance(&keys)?;
    let trials: usize = keys.num("trials")?.unwrap_or(1);
    if trials == 0 {
        return Err(Error::pre("`trials` must be at least 1"));
    }
    let seed = instance.seed;
    let mut plan = ExperimentPlan::new(&alg, instance, trials, seed);
    plan.m = keys.num("learner_m")?;
    plan.delta = keys.num("delta")?;
    if let Some(d) = plan.delta {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::pre(format!("`delta` = {d} outside (0, 1)")));
        }
    }
    plan.rounds = keys.num("rounds")?;
    plan.w = keys.num("w")?;
    plan.threads = keys.num("threads")?;
    plan.fixed_instance = match keys.get("fixed_instance") {
        None | Some("false") => false,
        Some("true") => true,
        Some(v) => {
            return Err(Error::pre(format!(
                "`fixed_instance` must be true or false, got `{v}`"
            )))
        }
    };
    plan.trials_csv = keys.path("out.trials");
    plan.aggregate_csv = keys.path("out.aggregate");
    plan.plot_tsv = keys.path("out.plot");
    plan.transcripts = keys.path("out.transcripts");
    plan.cache = keys.path("cache");
    for (k, v) in &kv {
        if let Some(c) = k.strip_prefix("const.") {
            plan.constants.set(c, v)?;
        } else if !INSTANCE_KEYS.contains(&k.as_str()) && !PLAN_KEYS.contains(&k.as_str()) {
            return Err(Error::pre(format!("unknown plan key `{k}`")));
        }
    }
    Ok(plan)
}

pub const INSTANCE_KEYS: &[&str] = &[
    "generator",
    "n",
    "m",
    "d",
    "d1",
    "d2",
    "center",
    "i",
    "j",
    "file",
    "seed",
];

pub const PLAN_KEYS: &[&str] = &[
    "algorithm",
    "trials",
    "learner_m",
    "delta",
    "rounds",
    "w",
    "threads",
    "fixed_instance",
    "out.trials",
    "out.aggregate",
    "out.plot",
    "out.transcripts",
    "cache",
];

pub fn read_plan(path: &Path) -> Result<ExperimentPlan> {
    let text = fs::read_to_string(path)?;
    parse_plan(&text, path.parent().unwrap_or(Path::new(".")))
}
