//! On-disk form of verified matrices.
//!
//! ```text
//! kind n m w t seed hash
//! <t rows>
//! ```
//!
//! Symbol matrices store each row as space-separated entries; boolean
//! matrices store each row as a hex bitset over the `n` columns. `seed` is
//! `-` for constructed matrices. `hash` is a SHA-256 prefix of the header
//! fields and body, written only for matrices that passed verification, and
//! `-` otherwise.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::disjunct::DisjunctMatrix;
use super::family::{verify_covering, Coverage, Provenance, QueryFamily};
use super::oneor::{build_one_or_code, OneOrCode};
use super::partition::PartitionMatrix;
use crate::error::{Error, Result};
use crate::graph::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    TwoRoundFamily,
    OneOr,
    Partition,
    Disjunct,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::TwoRoundFamily => "two-round-family",
            MatrixKind::OneOr => "one-or",
            MatrixKind::Partition => "partition",
            MatrixKind::Disjunct => "disjunct",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "two-round-family" => MatrixKind::TwoRoundFamily,
            "one-or" => MatrixKind::OneOr,
            "partition" => MatrixKind::Partition,
            "disjunct" => MatrixKind::Disjunct,
            other => return Err(Error::Parse(format!("unknown matrix kind `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixBody {
    Symbols(Vec<Vec<u32>>),
    Bits(Vec<VertexSet>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub n: usize,
    pub m: usize,
    pub w: usize,
    pub seed: Option<u64>,
    pub verified: bool,
    pub body: MatrixBody,
}

impl MatrixFile {
    pub fn t(&self) -> usize {
        match &self.body {
            MatrixBody::Symbols(r) => r.len(),
            MatrixBody::Bits(r) => r.len(),
        }
    }

    fn body_text(&self) -> String {
        let mut s = String::new();
        match &self.body {
            MatrixBody::Symbols(rows) => {
                for r in rows {
                    let line: Vec<String> = r.iter().map(u32::to_string).collect();
                    s.push_str(&line.join(" "));
                    s.push('\n');
                }
            }
            MatrixBody::Bits(rows) => {
                for r in rows {
                    s.push_str(&r.to_hex());
                    s.push('\n');
                }
            }
        }
        s
    }

    fn fields(&self) -> String {
        let seed = self.seed.map_or("-".to_string(), |s| s.to_string());
        format!(
            "{} {} {} {} {} {}",
            self.kind.as_str(),
            self.n,
            self.m,
            self.w,
            self.t(),
            seed
        )
    }

    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.fields().as_bytes());
        h.update(b"\n");
        h.update(self.body_text().as_bytes());
        h.finalize()[..16].iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    pub fn to_text(&self) -> String {
        let hash = if self.verified {
            self.hash()
        } else {
            "-".to_string()
        };
        format!("{} {hash}\n{}", self.fields(), self.body_text())
    }

    /// Parses a file; a recorded hash that does not match the content is an
    /// error, so `verified` is true only for intact verified files.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 7 {
            return Err(Error::Parse(format!(
                "matrix header needs 7 fields, found {}",
                f.len()
            )));
        }
        let num = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
        };
        let kind = MatrixKind::parse(f[0])?;
        let (n, m, w, t) = (
            num(f[1], "n")?,
            num(f[2], "m")?,
            num(f[3], "w")?,
            num(f[4], "t")?,
        );
        let seed = match f[5] {
            "-" => None,
            s => Some(
                s.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad seed `{s}`")))?,
            ),
        };
        let rows: Vec<&str> = lines.collect();
        if rows.len() != t {
            return Err(Error::Parse(format!(
                "expected {t} rows, found {}",
                rows.len()
            )));
        }
        let body = if kind == MatrixKind::Partition {
            let mut out = Vec::with_capacity(t);
            for r in rows {
                let row: Vec<u32> = r
                    .split_whitespace()
                    .map(|x| {
                        x.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad entry `{x}`")))
                    })
                    .collect::<Result<_>>()?;
                if row.len() != n || row.iter().any(|&x| x as usize >= w) {
                    return Err(Error::Parse("partition row does not fit its header".into()));
                }
                out.push(row);
            }
            MatrixBody::Symbols(out)
        } else {
            let mut out = Vec::with_capacity(t);
            for r in rows {
                out.push(
                    VertexSet::from_hex(n, r.trim())
                        .ok_or_else(|| Error::Parse(format!("bad bitset row `{r}`")))?,
                );
            }
            MatrixBody::Bits(out)
        };
        let mut file = MatrixFile {
            kind,
            n,
            m,
            w,
            seed,
            verified: false,
            body,
        };
        if f[6] != "-" {
            if f[6] != file.hash() {
                return Err(Error::Parse(
                    "verification hash does not match content".into(),
                ));
            }
            file.verified = true;
        }
        Ok(file)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        MatrixFile::parse(&fs::read_to_string(path)?)
    }

    pub fn from_family(f: &QueryFamily) -> Self {
        MatrixFile {
            kind: MatrixKind::TwoRoundFamily,
            n: f.n,
            m: f.m,
            w: 2,
            seed: f.seed(),
            verified: f.verified,
            body: MatrixBody::Bits(f.queries.clone()),
        }
    }

    pub fn to_family(&self) -> Result<QueryFamily> {
        match (&self.kind, &self.body) {
            (MatrixKind::TwoRoundFamily, MatrixBody::Bits(rows)) => Ok(QueryFamily {
                n: self.n,
                m: self.m,
                // not persisted; the search convention
                p: 1.0 / self.m.max(2) as f64,
                queries: rows.clone(),
                provenance: self
                    .seed
                    .map_or(Provenance::Constructed, |seed| Provenance::Sampled { seed }),
                verified: self.verified,
            }),
            _ => Err(Error::pre("not a two-round family file")),
        }
    }

    pub fn from_partition(p: &PartitionMatrix, verified: bool) -> Self {
        MatrixFile {
            kind: MatrixKind::Partition,
            n: p.cols(),
            m: p.m(),
            w: p.alphabet(),
            seed: None,
            verified,
            body: MatrixBody::Symbols((0..p.rows()).map(|r| p.row(r).to_vec()).collect()),
        }
    }

    pub fn to_partition(&self) -> Result<PartitionMatrix> {
        match (&self.kind, &self.body) {
            (MatrixKind::Partition, MatrixBody::Symbols(rows)) => {
                PartitionMatrix::from_entries(rows.len(), self.n, self.w, self.m, rows.concat())
            }
            _ => Err(Error::pre("not a partition matrix file")),
        }
    }

    pub fn from_disjunct(d: &DisjunctMatrix) -> Self {
        MatrixFile {
            kind: MatrixKind::Disjunct,
            n: d.cols(),
            m: d.d(),
            w: 2,
            seed: None,
            verified: d.verified,
            body: MatrixBody::Bits(d.rows().to_vec()),
        }
    }

    pub fn to_disjunct(&self) -> Result<DisjunctMatrix> {
        match (&self.kind, &self.body) {
            (MatrixKind::Disjunct, MatrixBody::Bits(rows)) => {
                let mut d = DisjunctMatrix::from_rows(self.n, self.m, rows.clone());
                d.verified = self.verified;
                Ok(d)
            }
            _ => Err(Error::pre("not a disjunct matrix file")),
        }
    }

    /// The `2t` queries of a one-or code as rows; `m` records `t`.
    pub fn from_one_or(c: &OneOrCode) -> Self {
        let rows = (0..c.width())
            .map(|k| VertexSet::from_members(c.n(), c.query(k)))
            .collect();
        MatrixFile {
            kind: MatrixKind::OneOr,
            n: c.n(),
            m: c.t() as usize,
            w: 2,
            seed: None,
            verified: true,
            body: MatrixBody::Bits(rows),
        }
    }
}

/// Result of re-checking a matrix file's defining property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub kind: MatrixKind,
    pub holds: bool,
    pub detail: String,
}

/// Re-runs the property check behind a matrix file, independently of its
/// recorded hash.
pub fn verify_matrix(file: &MatrixFile, limit: u128) -> Result<VerifyReport> {
    let (holds, detail) = match file.kind {
        MatrixKind::TwoRoundFamily => match verify_covering(&file.to_family()?, limit)? {
            Coverage::Holds => (
                true,
                format!("covering holds for n={} m={}", file.n, file.m),
            ),
            Coverage::Violated { graph, nonedges } => (
                false,
                format!("counterexample graph {graph:?} with uncovered non-edges {nonedges:?}"),
            ),
        },
        MatrixKind::Partition => {
            let p = file.to_partition()?;
            let worst = p.max_agreement();
            (
                p.satisfies_bound(),
                format!(
                    "max agreement {worst}, bound t/(2m) = {}/{}",
                    p.rows(),
                    2 * p.m()
                ),
            )
        }
        MatrixKind::Disjunct => {
            let ok = file.to_disjunct()?.verify(limit)?;
            (ok, format!("{}-disjunct: {ok}", file.m))
        }
        MatrixKind::OneOr => {
            let expect = MatrixFile::from_one_or(&build_one_or_code(file.n)?);
            let ok = expect.body == file.body;
            (
                ok,
                format!("matches the canonical code for n={}: {ok}", file.n),
            )
        }
    };
    Ok(VerifyReport {
        kind: file.kind,
        holds,
        detail,
    })
}

/// Cache path for a sampled two-round family.
pub fn family_cache_path(dir: &Path, n: usize, m: usize, t: usize) -> PathBuf {
    dir.join(format!("two-round-family-n{n}-m{m}-t{t}.mat"))
}

/// Loads a verified family from `dir` if present; otherwise runs `search`
/// and stores what it finds.
pub fn cached_family(
    dir: &Path,
    n: usize,
    m: usize,
    t: usize,
    search: impl FnOnce() -> Result<Option<QueryFamily>>,
) -> Result<Option<QueryFamily>> {
    let path = family_cache_path(dir, n, m, t);
    if path.exists() {
        let f = MatrixFile::read_file(&path)?.to_family()?;
        if f.verified {
            return Ok(Some(f));
        }
    }
    let found = search()?;
    if let Some(f) = &found {
        fs::create_dir_all(dir)?;
        MatrixFile::from_family(f).write_file(&path)?;
    }
    Ok(found)
}
