//! The embedded knot corpus and golden-table verification.
//!
//! The corpus is a TOML document:
//!
//! ```toml
//! format = "khv-corpus"
//! version = 1
//!
//! [[knot]]
//! name = "3_1"
//! pd = "X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)"
//! components = 1
//! kh = "q + q^3 + q^5*t^2 + q^9*t^3"
//! vn = ["t^3*x^9 + t^2*x^5 + x^3 + x", "9*t^3*x^9 + ..."]
//! ```
//!
//! `kh` uses the canonical [`KhPoly`] text, `vn` lists `v_0, v_1, …` as
//! exact-fraction term lists in `t` and `x`. `vn` is optional.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::diagram::{parse_pd, Diagram, DiagramError};
use crate::expansion::{series_reconstruct, v_n, VnPoly};
use crate::homology::{homology_ranks, Ring};
use crate::polynomials::{khovanov_polynomial, KhPoly};
use crate::Rational;

pub const CORPUS_FORMAT: &str = "khv-corpus";
pub const CORPUS_VERSION: u32 = 1;

/// The knots whose rows make up the golden table.
pub const TABLE_KNOTS: [&str; 7] = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3"];
/// Rows per knot: `Kh` and `v_0 … v_5`.
pub const TABLE_ORDERS: usize = 6;

const EMBEDDED: &str = include_str!("../data/corpus.toml");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown knot {0:?}")]
    UnknownKnot(String),
    #[error("cannot read corpus file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("corpus is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unsupported corpus format {format:?} version {version}")]
    Format { format: String, version: u32 },
    #[error("corpus entry {name:?}: {msg}")]
    BadEntry { name: String, msg: String },
    #[error("corpus entry {name:?}: {source}")]
    Diagram { name: String, source: DiagramError },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    format: String,
    version: u32,
    #[serde(default)]
    knot: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    pd: String,
    components: usize,
    kh: String,
    #[serde(default)]
    vn: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub pd: String,
    pub diagram: Diagram,
    pub components: usize,
    pub expected_kh: KhPoly,
    /// `v_0, v_1, …`; empty when not stored.
    pub expected_vn: Vec<VnPoly>,
}

impl CorpusEntry {
    fn from_raw(raw: RawEntry) -> Result<CorpusEntry, CorpusError> {
        let name = raw.name;
        let bad = |msg: String| CorpusError::BadEntry { name: name.clone(), msg };
        let diagram = parse_pd(&raw.pd).map_err(|source| CorpusError::Diagram { name: name.clone(), source })?;
        if diagram.components() != raw.components {
            return Err(bad(format!("diagram has {} components, expected {}", diagram.components(), raw.components)));
        }
        let expected_kh = KhPoly::parse(&raw.kh).map_err(|e| bad(format!("kh: {e}")))?;
        let expected_vn = raw
            .vn
            .iter()
            .enumerate()
            .map(|(n, s)| VnPoly::parse(s, n).map_err(|e| bad(format!("v_{n}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(v0) = expected_vn.first() {
            if !v0.same_terms(&v_n(&expected_kh.to_ranks(), 0)) {
                return Err(bad("v_0 is not kh with q renamed x".into()));
            }
        }
        Ok(CorpusEntry { pd: raw.pd, diagram, components: raw.components, expected_kh, expected_vn, name })
    }
}

#[derive(Clone, Debug)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
}

impl Corpus {
    /// The corpus compiled into the library.
    pub fn embedded() -> Corpus {
        Corpus::from_toml(EMBEDDED).expect("embedded corpus is valid")
    }

    pub fn from_toml(text: &str) -> Result<Corpus, CorpusError> {
        let raw: RawCorpus = toml::from_str(text)?;
        if raw.format != CORPUS_FORMAT || raw.version != CORPUS_VERSION {
            return Err(CorpusError::Format { format: raw.format, version: raw.version });
        }
        let entries = raw.knot.into_iter().map(CorpusEntry::from_raw).collect::<Result<Vec<_>, _>>()?;
        for (k, e) in entries.iter().enumerate() {
            if entries[..k].iter().any(|o| o.name == e.name) {
                return Err(CorpusError::BadEntry { name: e.name.clone(), msg: "duplicate name".into() });
            }
        }
        Ok(Corpus { entries })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
        Corpus::from_toml(&text)
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn load(&self, name: &str) -> Result<&CorpusEntry, CorpusError> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| CorpusError::UnknownKnot(name.into()))
    }

    pub fn verify_table(&self) -> VerifyReport {
        self.verify_table_with(&StandardPipeline)
    }

    /// Runs `pipeline` on every table knot and compares each row exactly.
    pub fn verify_table_with<P: Pipeline + Sync>(&self, pipeline: &P) -> VerifyReport {
        let knots: Vec<KnotReport> = TABLE_KNOTS.par_iter().map(|name| self.verify_knot(name, pipeline)).collect();
        VerifyReport { knots }
    }

    fn verify_knot<P: Pipeline>(&self, name: &str, pipeline: &P) -> KnotReport {
        let rows_named =
            |err: String| KnotReport { name: name.into(), error: Some(err), rows: Vec::new(), routes_agree: false };
        let entry = match self.load(name) {
            Ok(e) => e,
            Err(e) => return rows_named(e.to_string()),
        };
        if entry.expected_vn.len() < TABLE_ORDERS {
            return rows_named(format!("only {} v_n rows stored", entry.expected_vn.len()));
        }
        let kh = match pipeline.kh(&entry.diagram) {
            Ok(kh) => kh,
            Err(e) => return rows_named(e),
        };
        let mut rows = vec![RowReport {
            row: "Kh".into(),
            mismatch: first_mismatch(&kh_terms(&entry.expected_kh), &kh_terms(&kh)),
        }];
        let computed: Vec<VnPoly> = (0..TABLE_ORDERS).map(|n| pipeline.vn(&kh, n)).collect();
        for (n, (want, got)) in entry.expected_vn.iter().zip(&computed).enumerate() {
            rows.push(RowReport { row: format!("v_{n}"), mismatch: first_mismatch(&vn_terms(want), &vn_terms(got)) });
        }
        let series = series_reconstruct(&kh, TABLE_ORDERS - 1);
        let routes_agree = series.iter().zip(&computed).all(|(a, b)| a.same_terms(b));
        KnotReport { name: name.into(), error: None, rows, routes_agree }
    }
}

/// The computation under test, split so that verification can be run
/// against deliberately broken variants.
pub trait Pipeline {
    fn kh(&self, d: &Diagram) -> Result<KhPoly, String>;
    fn vn(&self, kh: &KhPoly, n: usize) -> VnPoly;
}

/// Rational homology ranks, then the closed form for `v_n`.
pub struct StandardPipeline;

impl Pipeline for StandardPipeline {
    fn kh(&self, d: &Diagram) -> Result<KhPoly, String> {
        let r = homology_ranks(d, Ring::Rationals).map_err(|e| e.to_string())?;
        Ok(khovanov_polynomial(&r))
    }

    fn vn(&self, kh: &KhPoly, n: usize) -> VnPoly {
        v_n(&kh.to_ranks(), n)
    }
}

type Terms = Vec<((i64, i64), Rational)>;

/// Terms keyed `(x, t)`, descending, i.e. in table order.
fn kh_terms(p: &KhPoly) -> Terms {
    let mut v: Terms = p.terms().map(|((i, j), c)| ((j, i), Rational::from_integer(c.into()))).collect();
    v.sort_by_key(|t| std::cmp::Reverse(t.0));
    v
}

fn vn_terms(p: &VnPoly) -> Terms {
    p.terms().rev().map(|((i, j), c)| ((j, i), c.clone())).collect()
}

fn first_mismatch(want: &Terms, got: &Terms) -> Option<Mismatch> {
    let mut keys: Vec<(i64, i64)> = want.iter().chain(got).map(|(k, _)| *k).collect();
    keys.sort_by(|a, b| b.cmp(a));
    keys.dedup();
    let lookup = |t: &Terms, k| t.iter().find(|(kk, _)| *kk == k).map(|(_, c)| c.clone()).unwrap_or_default();
    keys.into_iter().find_map(|k| {
        let (e, g) = (lookup(want, k), lookup(got, k));
        (e != g).then_some(Mismatch { t: k.1, x: k.0, expected: e, actual: g })
    })
}

/// A monomial `t^t x^x` whose coefficient differs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub t: i64,
    pub x: i64,
    pub expected: Rational,
    pub actual: Rational,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at t^{}*x^{}: expected {}, got {}", self.t, self.x, self.expected, self.actual)
    }
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub row: String,
    pub mismatch: Option<Mismatch>,
}

#[derive(Clone, Debug)]
pub struct KnotReport {
    pub name: String,
    /// Set when the knot could not be computed at all.
    pub error: Option<String>,
    pub rows: Vec<RowReport>,
    /// Whether the closed form and the series substitution agree.
    pub routes_agree: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub knots: Vec<KnotReport>,
}

impl VerifyReport {
    /// Rows expected in a complete report.
    pub fn total(&self) -> usize {
        self.knots.len() * (TABLE_ORDERS + 1)
    }

    pub fn passed(&self) -> usize {
        self.knots.iter().flat_map(|k| &k.rows).filter(|r| r.mismatch.is_none()).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.total() && self.knots.iter().all(|k| k.routes_agree)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &RowReport)> {
        self.knots
            .iter()
            .flat_map(|k| k.rows.iter().map(move |r| (k.name.as_str(), r)))
            .filter(|(_, r)| r.mismatch.is_some())
    }

    pub fn knot(&self, name: &str) -> Option<&KnotReport> {
        self.knots.iter().find(|k| k.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.knots {
            if let Some(e) = &k.error {
                writeln!(f, "{:<4} error: {e}", k.name)?;
                continue;
            }
            for r in &k.rows {
                match &r.mismatch {
                    None => writeln!(f, "{:<4} {:<3} ok", k.name, r.row)?,
                    Some(m) => writeln!(f, "{:<4} {:<3} FAIL {m}", k.name, r.row)?,
                }
            }
            if !k.routes_agree {
                writeln!(f, "{:<4} closed form and series substitution disagree", k.name)?;
            }
        }
        write!(f, "{}/{} rows match", self.passed(), self.total())
    }
}
