//! The query oracle with round enforcement, exact counting and transcripts.

use std::fmt::Write as _;
use std::ops::Range;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, HiddenGraph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Queries are batched into rounds; answers appear only when a round closes.
    RoundStructured,
    /// Every query is answered immediately and counts as its own round.
    FullyAdaptive,
}

/// Handle to one round of a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RoundId(usize);

impl RoundId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, Default)]
struct Round {
    queries: Vec<VertexSet>,
    answers: Option<Vec<bool>>,
}

/// One learner's view of a hidden graph.
pub struct OracleSession<'g> {
    target: &'g HiddenGraph,
    mode: Mode,
    rounds: Vec<Round>,
    open: Option<usize>,
    query_count: usize,
}

impl<'g> OracleSession<'g> {
    pub fn new(target: &'g HiddenGraph, mode: Mode) -> Self {
        OracleSession {
            target,
            mode,
            rounds: Vec::new(),
            open: None,
            query_count: 0,
        }
    }

    pub fn round_structured(target: &'g HiddenGraph) -> Self {
        Self::new(target, Mode::RoundStructured)
    }

    pub fn adaptive(target: &'g HiddenGraph) -> Self {
        Self::new(target, Mode::FullyAdaptive)
    }

    /// Vertex count; the only fact about the target a learner may read.
    pub fn n(&self) -> usize {
        self.target.n()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn query_count(&self) -> usize {
        self.query_count
    }

    /// Number of closed rounds.
    pub fn current_round(&self) -> usize {
        self.rounds.iter().filter(|r| r.answers.is_some()).count()
    }

    pub fn round_sizes(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.queries.len()).collect()
    }

    pub fn open_round(&mut self) -> Result<RoundId> {
        if self.mode != Mode::RoundStructured {
            return Err(Error::Contract("open_round in fully-adaptive mode".into()));
        }
        if let Some(r) = self.open {
            return Err(Error::Contract(format!("round {r} is still open")));
        }
        self.rounds.push(Round::default());
        let id = self.rounds.len() - 1;
        self.open = Some(id);
        Ok(RoundId(id))
    }

    pub fn submit(&mut self, round: RoundId, q: VertexSet) -> Result<()> {
        if self.open != Some(round.0) {
            return Err(Error::Contract(format!("round {} is not open", round.0)));
        }
        if q.universe() != self.n() {
            return Err(Error::pre(format!(
                "query over {} vertices submitted to a graph on {}",
                q.universe(),
                self.n()
            )));
        }
        self.rounds[round.0].queries.push(q);
        self.query_count += 1;
        Ok(())
    }

    pub fn close_round(&mut self, round: RoundId) -> Result<Vec<bool>> {
        if self.open != Some(round.0) {
            return Err(Error::Contract(format!("round {} is not open", round.0)));
        }
        let r = &mut self.rounds[round.0];
        let answers: Vec<bool> = r.queries.iter().map(|q| self.target.answer(q)).collect();
        r.answers = Some(answers.clone());
        self.open = None;
        Ok(answers)
    }

    /// Answers of a closed round.
    pub fn answers(&self, round: RoundId) -> Result<&[bool]> {
        match self.rounds.get(round.0).and_then(|r| r.answers.as_deref()) {
            Some(a) => Ok(a),
            None => Err(Error::Contract(format!(
                "answers of round {} requested before it closed",
                round.0
            ))),
        }
    }

    /// Opens a round, submits every query and closes it.
    pub fn ask_round(&mut self, queries: Vec<VertexSet>) -> Result<Vec<bool>> {
        let id = self.open_round()?;
        for q in queries {
            self.submit(id, q)?;
        }
        self.close_round(id)
    }

    /// Single adaptive query.
    pub fn ask(&mut self, q: VertexSet) -> Result<bool> {
        if self.mode != Mode::FullyAdaptive {
            return Err(Error::Contract("ask() requires fully-adaptive mode".into()));
        }
        if q.universe() != self.n() {
            return Err(Error::pre("query universe does not match the graph"));
        }
        let a = self.target.answer(&q);
        self.rounds.push(Round {
            queries: vec![q],
            answers: Some(vec![a]),
        });
        self.query_count += 1;
        Ok(a)
    }

    /// Snapshot of everything asked so far.
    pub fn transcript(&self, alg: &str, seed: u64) -> Transcript {
        Transcript {
            alg: alg.to_string(),
            seed,
            n: self.target.n(),
            m: self.target.m(),
            rounds: self
                .rounds
                .iter()
                .filter_map(|r| {
                    r.answers
                        .as_ref()
                        .map(|a| r.queries.iter().cloned().zip(a.iter().copied()).collect())
                })
                .collect(),
            result: None,
        }
    }
}

/// Collects the queries of one round from several independent sub-plans,
/// remembering which slice of the answers belongs to which plan.
#[derive(Clone, Debug, Default)]
pub struct Batch {
    queries: Vec<VertexSet>,
}

impl Batch {
    pub fn new() -> Self {
        Batch::default()
    }

    pub fn push(&mut self, q: VertexSet) -> usize {
        self.queries.push(q);
        self.queries.len() - 1
    }

    pub fn extend<I: IntoIterator<Item = VertexSet>>(&mut self, qs: I) -> Range<usize> {
        let start = self.queries.len();
        self.queries.extend(qs);
        start..self.queries.len()
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Asks everything as a single round (possibly empty).
    pub fn run(self, session: &mut OracleSession<'_>) -> Result<Vec<bool>> {
        session.ask_round(self.queries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptResult {
    pub edges: EdgeSet,
    pub success: bool,
    pub wall_ms: u64,
}

/// Per-round query/answer record of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub alg: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub rounds: Vec<Vec<(VertexSet, bool)>>,
    pub result: Option<TranscriptResult>,
}

impl Transcript {
    pub fn query_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn with_result(mut self, edges: EdgeSet, success: bool, wall_ms: u64) -> Self {
        self.result = Some(TranscriptResult {
            edges,
            success,
            wall_ms,
        });
        self
    }

    /// True iff every recorded answer is reproduced by `target`.
    pub fn replay(&self, target: &HiddenGraph) -> bool {
        target.n() == self.n
            && self
                .rounds
                .iter()
                .flatten()
                .all(|(q, a)| target.answer(q) == *a)
    }

    /// Text form. Data lines are `round<TAB>hex<TAB>answer`; `#` lines carry
    /// the header, round boundaries (so empty rounds survive) and the result.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "#transcript alg={} seed={} n={} m={} rounds={}",
            self.alg,
            self.seed,
            self.n,
            self.m,
            self.rounds.len()
        );
        for (i, round) in self.rounds.iter().enumerate() {
            let _ = writeln!(out, "#round {i} queries={}", round.len());
            for (q, a) in round {
                let _ = writeln!(out, "{i}\t{}\t{}", q.to_hex(), u8::from(*a));
            }
        }
        if let Some(r) = &self.result {
            let edges: Vec<String> = r
                .edges
                .iter()
                .map(|(u, v)| format!("{}-{}", u + 1, v + 1))
                .collect();
            let _ = writeln!(
                out,
                "#result success={} wall_ms={} edges={}",
                u8::from(r.success),
                r.wall_ms,
                edges.join(",")
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Transcript> {
        let bad = |line: usize, msg: &str| Error::Parse(format!("transcript line {line}: {msg}"));
        let mut lines = text.lines().enumerate();
        let (_, head) = lines.next().ok_or_else(|| bad(1, "empty transcript"))?;
        let fields = key_values(
            head.strip_prefix("#transcript")
                .ok_or_else(|| bad(1, "missing header"))?,
        );
        let get = |k: &str| fields.iter().find(|(a, _)| a == k).map(|(_, b)| b.as_str());
        let num = |k: &str| -> Result<u64> {
            get(k)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(1, &format!("missing or bad `{k}`")))
        };
        let mut t = Transcript {
            alg: get("alg").unwrap_or("").to_string(),
            seed: num("seed")?,
            n: num("n")? as usize,
            m: num("m")? as usize,
            rounds: vec![Vec::new(); num("rounds")? as usize],
            result: None,
        };
        for (idx, line) in lines {
            let ln = idx + 1;
            if let Some(rest) = line.strip_prefix("#result") {
                let kv = key_values(rest);
                let get = |k: &str| kv.iter().find(|(a, _)| a == k).map(|(_, b)| b.as_str());
                let mut edges = EdgeSet::new();
                for e in get("edges")
                    .unwrap_or("")
                    .split(',')
                    .filter(|s| !s.is_empty())
                {
                    let (a, b) = e.split_once('-').ok_or_else(|| bad(ln, "bad edge"))?;
                    let a: usize = a.parse().map_err(|_| bad(ln, "bad edge"))?;
                    let b: usize = b.parse().map_err(|_| bad(ln, "bad edge"))?;
                    if a == 0 || b == 0 {
                        return Err(bad(ln, "edge endpoints are 1-indexed"));
                    }
                    edges.insert(crate::graph::edge(a - 1, b - 1));
                }
                t.result = Some(TranscriptResult {
                    edges,
                    success: get("success") == Some("1"),
                    wall_ms: get("wall_ms").and_then(|v| v.parse().ok()).unwrap_or(0),
                });
                continue;
            }
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(r), Some(h), Some(a), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad(ln, "expected three tab-separated fields"));
            };
            let r: usize = r.parse().map_err(|_| bad(ln, "bad round index"))?;
            let q = VertexSet::from_hex(t.n, h).ok_or_else(|| bad(ln, "bad vertex set"))?;
            let a = match a {
                "0" => false,
                "1" => true,
                _ => return Err(bad(ln, "answer must be 0 or 1")),
            };
            t.rounds
                .get_mut(r)
                .ok_or_else(|| bad(ln, "round index beyond header count"))?
                .push((q, a));
        }
        Ok(t)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Transcript> {
        Transcript::parse(&std::fs::read_to_string(path)?)
    }
}

fn key_values(s: &str) -> Vec<(String, String)> {
    s.split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> HiddenGraph {
        HiddenGraph::new(6, [(0, 1), (2, 5)]).unwrap()
    }

    #[test]
    fn round_accounting() {
        let g = g();
        let mut s = OracleSession::round_structured(&g);
        let r = s.open_round().unwrap();
        for q in [vec![0, 1], vec![2, 3], vec![2, 5, 4]] {
            s.submit(r, VertexSet::from_members(6, q)).unwrap();
        }
        assert_eq!(s.close_round(r).unwrap(), vec![true, false, true]);
        assert_eq!(s.query_count(), 3);
        assert_eq!(s.current_round(), 1);
        let e = s.open_round().unwrap();
        assert!(s.close_round(e).unwrap().is_empty());
        assert_eq!(s.current_round(), 2);
        assert_eq!(s.query_count(), 3);
    }

    #[test]
    fn contract_violations() {
        let g = g();
        let mut s = OracleSession::round_structured(&g);
        let r = s.open_round().unwrap();
        s.submit(r, VertexSet::full(6)).unwrap();
        assert!(matches!(s.answers(r), Err(Error::Contract(_))));
        assert!(matches!(s.open_round(), Err(Error::Contract(_))));
        s.close_round(r).unwrap();
        assert!(matches!(
            s.submit(r, VertexSet::full(6)),
            Err(Error::Contract(_))
        ));
        assert!(matches!(s.close_round(r), Err(Error::Contract(_))));
        assert_eq!(s.answers(r).unwrap(), &[true]);
        assert!(matches!(s.ask(VertexSet::full(6)), Err(Error::Contract(_))));
        assert!(s.submit(RoundId(7), VertexSet::full(6)).is_err());
    }

    #[test]
    fn adaptive_mode() {
        let g = g();
        let mut s = OracleSession::adaptive(&g);
        assert!(s.ask(VertexSet::from_members(6, [0, 1])).unwrap());
        assert!(!s.ask(VertexSet::from_members(6, [0, 2])).unwrap());
        assert_eq!(s.current_round(), 2);
        assert!(s.open_round().is_err());
    }

    #[test]
    fn transcript_round_trip_and_replay() {
        let g = g();
        let mut s = OracleSession::round_structured(&g);
        s.ask_round(vec![VertexSet::full(6), VertexSet::from_members(6, [3])])
            .unwrap();
        s.ask_round(vec![]).unwrap();
        s.ask_round(vec![VertexSet::from_members(6, [2, 5])])
            .unwrap();
        let t = s.transcript("demo", 17).with_result(g.edge_set(), true, 4);
        let back = Transcript::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.round_count(), 3);
        assert_eq!(back.query_count(), s.query_count());
        assert!(back.replay(&g));
        let other = HiddenGraph::new(6, [(0, 1)]).unwrap();
        assert!(!back.replay(&other));
    }
}
