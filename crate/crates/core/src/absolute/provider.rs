//! Tables of externally supplied invariants of `X̃_{8,1}`, the plane blown up at
//! eight points of a conic and one point off it.
//!
//! A table is a sequence of JSON records, either one per line or as a single JSON
//! array. Complex records carry a genus and tangency profiles,
//!
//! ```text
//! {"surface": "tX81", "class": "4:1,1,1,1,1,1,1,1,2", "genus": 0, "alpha": "0", "beta": "0", "value": 70}
//! ```
//!
//! and real records carry a real structure instead,
//!
//! ```text
//! {"surface": "tX81", "class": "4:1,1,1,1,1,1,1,1,2", "real": "kappa=0", "value": 30}
//! ```
//!
//! where `real` is `kappa=K` (`K ≤ 4`) for `W_{X̃_{8,1}(K)}` or `component=L-1`,
//! `component=L1` for the invariant of `X̃_{8,1}(4)` counting curves in the
//! component of Euler characteristic `∓1` of the complement of the conic.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{format_class_literal, parse_class_literal, MultiSeq};
use crate::num::Int;

/// Value of the `surface` field.
pub const SURFACE_TAG: &str = "tX81";

/// Number of exceptional coefficients of a class of `X̃_{8,1}`.
const COEFFICIENTS: usize = 9;

/// Real structure a real record refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RealTag {
    /// `X̃_{8,1}(κ)`: `κ` pairs of conjugated points on the conic.
    Kappa(u8),
    /// `X̃_{8,1}(4)`, curves in the component of Euler characteristic `χ = ±1`.
    Component(i8),
}

impl fmt::Display for RealTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealTag::Kappa(k) => write!(f, "kappa={k}"),
            RealTag::Component(c) => write!(f, "component=L{c}"),
        }
    }
}

impl RealTag {
    /// Parse [`RealTag`]'s textual form.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad real structure tag `{text}`"));
        match text.trim().split_once('=') {
            Some(("kappa", k)) => {
                let k: u8 = k.parse().map_err(|_| bad())?;
                if k > 4 {
                    return Err(bad());
                }
                Ok(RealTag::Kappa(k))
            }
            Some(("component", "L-1")) => Ok(RealTag::Component(-1)),
            Some(("component", "L1")) => Ok(RealTag::Component(1)),
            _ => Err(bad()),
        }
    }
}

/// Lookup key of a complex invariant `GW^{α,β}_{X̃_{8,1}}(d, g)`.
///
/// The invariant is symmetric in the eight points of the conic, so their
/// coefficients are stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexKey {
    dd: i64,
    mu: Vec<i64>,
    genus: i64,
    alpha: MultiSeq,
    beta: MultiSeq,
}

impl ComplexKey {
    /// Key of `GW^{α,β}(dd·D − Σ mu_i Ẽ_i, g)`.
    pub fn new(dd: i64, mu: &[i64], genus: i64, alpha: MultiSeq, beta: MultiSeq) -> Result<Self> {
        let mut mu = check_len(mu)?.to_vec();
        mu[..8].sort_unstable_by(|a, b| b.cmp(a));
        Ok(ComplexKey { dd, mu, genus, alpha, beta })
    }
}

impl fmt::Display for ComplexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{SURFACE_TAG} class={} genus={} alpha={} beta={}",
            format_class_literal(self.dd, &self.mu),
            self.genus,
            seq_text(&self.alpha),
            seq_text(&self.beta)
        )
    }
}

/// Lookup key of a real invariant of `X̃_{8,1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealKey {
    dd: i64,
    mu: Vec<i64>,
    tag: RealTag,
}

impl RealKey {
    /// Key of the real invariant of `dd·D − Σ mu_i Ẽ_i` for the given structure.
    pub fn new(dd: i64, mu: &[i64], tag: RealTag) -> Result<Self> {
        Ok(RealKey { dd, mu: check_len(mu)?.to_vec(), tag })
    }
}

impl fmt::Display for RealKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{SURFACE_TAG} class={} real={}", format_class_literal(self.dd, &self.mu), self.tag)
    }
}

fn check_len(mu: &[i64]) -> Result<&[i64]> {
    if mu.len() != COEFFICIENTS {
        return Err(Error::Domain(format!(
            "classes of X̃_(8,1) have {COEFFICIENTS} exceptional coefficients, got {}",
            mu.len()
        )));
    }
    Ok(mu)
}

fn seq_text(s: &MultiSeq) -> String {
    if s.is_zero() {
        "0".into()
    } else {
        s.literal()
    }
}

/// One record of a table file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    /// Always [`SURFACE_TAG`].
    pub surface: String,
    /// Class literal `dd:mu_1,…,mu_9`.
    pub class: String,
    /// Genus (complex records).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    /// Fixed tangency profile (complex records; zero when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// Moving tangency profile (complex records; zero when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// Real structure tag (real records).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<String>,
    /// The invariant.
    pub value: Int,
}

/// Externally supplied invariants of `X̃_{8,1}`.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Provider {
    complex: HashMap<ComplexKey, Int>,
    real: HashMap<RealKey, Int>,
}

impl Provider {
    /// Empty table.
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse a table: JSON records one per line (blank lines and lines starting
    /// with `#` are skipped) or a single JSON array of records.
    pub fn parse(text: &str) -> Result<Self> {
        let records: Vec<Record> = if text.trim_start().starts_with('[') {
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("provider table: {e}")))?
        } else {
            let mut out = Vec::new();
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let record = serde_json::from_str(line)
                    .map_err(|e| Error::Parse(format!("provider table line {}: {e}", n + 1)))?;
                out.push(record);
            }
            out
        };
        let mut provider = Provider::new();
        for record in records {
            provider.insert_record(&record)?;
        }
        Ok(provider)
    }

    /// Read and parse a table file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read provider table {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Add one record; a key given twice with different values is an error.
    pub fn insert_record(&mut self, record: &Record) -> Result<()> {
        if record.surface != SURFACE_TAG {
            return Err(Error::Parse(format!(
                "provider records must have surface `{SURFACE_TAG}`, got `{}`",
                record.surface
            )));
        }
        let (dd, mu) = parse_class_literal(&record.class)?;
        match &record.real {
            Some(tag) => {
                if record.genus.is_some() || record.alpha.is_some() || record.beta.is_some() {
                    return Err(Error::Parse(format!(
                        "real record for {} must not carry genus or tangency data",
                        record.class
                    )));
                }
                let key = RealKey::new(dd, &mu, RealTag::parse(tag)?)?;
                insert(&mut self.real, key, record.value)
            }
            None => {
                let parse = |s: &Option<String>| s.as_deref().map(MultiSeq::parse).unwrap_or(Ok(MultiSeq::zero()));
                let genus = record.genus.unwrap_or(0);
                let key = ComplexKey::new(dd, &mu, genus, parse(&record.alpha)?, parse(&record.beta)?)?;
                insert(&mut self.complex, key, record.value)
            }
        }
    }

    /// Add a complex value.
    pub fn insert_complex(&mut self, key: ComplexKey, value: Int) -> Result<()> {
        insert(&mut self.complex, key, value)
    }

    /// Add a real value.
    pub fn insert_real(&mut self, key: RealKey, value: Int) -> Result<()> {
        insert(&mut self.real, key, value)
    }

    /// Complex value, if present.
    pub fn complex(&self, key: &ComplexKey) -> Option<Int> {
        self.complex.get(key).copied()
    }

    /// Real value, if present.
    pub fn real(&self, key: &RealKey) -> Option<Int> {
        self.real.get(key).copied()
    }

    /// Number of records.
    pub fn len(&self) -> usize {
        self.complex.len() + self.real.len()
    }

    /// Whether the table is empty.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn insert<K: std::hash::Hash + Eq + fmt::Display>(map: &mut HashMap<K, Int>, key: K, value: Int) -> Result<()> {
    match map.get(&key) {
        Some(&old) if old != value => {
            Err(Error::Parse(format!("conflicting provider values {old} and {value} for {key}")))
        }
        _ => {
            map.insert(key, value);
            Ok(())
        }
    }
}
