//! Homology classes of blown-up planes and tangency sequences.
//!
//! A class on a surface with `n` exceptional curves is written `dD - Σ μ_i E_i`; its
//! textual form is `dD:μ1,...,μn`. Tangency profiles `α, β ∈ Z_{≥0}^∞` are
//! [`MultiSeq`] values written as `weight^count` lists such as `1^2,2^1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible index of a [`MultiSeq`] entry.
pub const MULTISEQ_INDEX_CAP: usize = 64;

/// The family a class lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceModel {
    /// The plane blown up at `n ≤ 8` points of a smooth conic `E`.
    TildeXn(usize),
    /// The plane blown up at `n ≤ 8` generic points (no distinguished conic).
    Xn(usize),
    /// The plane blown up at eight points of a conic and one point off it.
    TildeX81,
}

impl SurfaceModel {
    /// Build a model, checking the range of `n`.
    pub fn new_tilde(n: usize) -> Result<Self> {
        if n > 8 {
            return Err(Error::Domain(format!("at most 8 points on the conic, got {n}")));
        }
        Ok(SurfaceModel::TildeXn(n))
    }

    /// Build a model of a generic blow-up, checking the range of `n`.
    pub fn new_generic(n: usize) -> Result<Self> {
        if n > 8 {
            return Err(Error::Domain(format!("at most 8 blown-up points, got {n}")));
        }
        Ok(SurfaceModel::Xn(n))
    }

    /// Number of exceptional classes.
    pub fn n(&self) -> usize {
        match *self {
            SurfaceModel::TildeXn(n) | SurfaceModel::Xn(n) => n,
            SurfaceModel::TildeX81 => 9,
        }
    }

    /// Number of exceptional classes whose centre lies on the conic.
    pub fn conic_points(&self) -> Option<usize> {
        match *self {
            SurfaceModel::TildeXn(n) => Some(n),
            SurfaceModel::TildeX81 => Some(8),
            SurfaceModel::Xn(_) => None,
        }
    }
}

/// An element `dD·[D] − Σ μ_i [E_i]` of `H_2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceClass {
    /// The model this class lives on.
    pub model: SurfaceModel,
    /// Coefficient of `[D]`.
    pub dd: i64,
    /// Coefficients `μ_i` (so that the class is `dD·D − Σ μ_i E_i`).
    pub mu: Vec<i64>,
}

impl SurfaceClass {
    /// Build a class, checking that `mu` has one entry per exceptional class.
    pub fn new(model: SurfaceModel, dd: i64, mu: Vec<i64>) -> Result<Self> {
        if mu.len() != model.n() {
            return Err(Error::Domain(format!(
                "class has {} exceptional coefficients but the surface has {}",
                mu.len(),
                model.n()
            )));
        }
        Ok(SurfaceClass { model, dd, mu })
    }

    /// Parse `dD:μ1,...,μn` on the given model.
    pub fn parse(model: SurfaceModel, text: &str) -> Result<Self> {
        let (dd, mu) = parse_class_literal(text)?;
        SurfaceClass::new(model, dd, mu)
    }

    /// The class `[D]` pulled back to `model`.
    pub fn line(model: SurfaceModel) -> Self {
        SurfaceClass { model, dd: 1, mu: vec![0; model.n()] }
    }

    /// The exceptional class `[E_i]` (1-based index).
    pub fn exceptional(model: SurfaceModel, i: usize) -> Self {
        let mut mu = vec![0; model.n()];
        mu[i - 1] = -1;
        SurfaceClass { model, dd: 0, mu }
    }

    /// The class `E = 2D − Σ_{conic} E_i` of the strict transform of the conic.
    pub fn conic(model: SurfaceModel) -> Result<Self> {
        let k = model
            .conic_points()
            .ok_or_else(|| Error::Domain("the generic blow-up has no distinguished conic".into()))?;
        let mut mu = vec![0; model.n()];
        for m in mu.iter_mut().take(k) {
            *m = 1;
        }
        Ok(SurfaceClass { model, dd: 2, mu })
    }

    /// The anticanonical class `c_1 = 3D − Σ E_i`.
    pub fn c1(model: SurfaceModel) -> Self {
        SurfaceClass { model, dd: 3, mu: vec![1; model.n()] }
    }

    /// Intersection product `d1·d2 = dD1·dD2 − Σ μ1_i μ2_i`.
    pub fn dot(&self, other: &SurfaceClass) -> Result<i64> {
        if self.model != other.model {
            return Err(Error::Domain("classes live on different surfaces".into()));
        }
        Ok(self.dd * other.dd - self.mu.iter().zip(&other.mu).map(|(a, b)| a * b).sum::<i64>())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: i64, other: &SurfaceClass, b: i64) -> Result<SurfaceClass> {
        if self.model != other.model {
            return Err(Error::Domain("classes live on different surfaces".into()));
        }
        Ok(SurfaceClass {
            model: self.model,
            dd: a * self.dd + b * other.dd,
            mu: self.mu.iter().zip(&other.mu).map(|(x, y)| a * x + b * y).collect(),
        })
    }

    /// `d·[E]`, the intersection with the conic (ninth point excluded on `X̃_{8,1}`).
    pub fn pair_e(&self) -> Result<i64> {
        let k = self
            .model
            .conic_points()
            .ok_or_else(|| Error::Domain("the generic blow-up has no distinguished conic".into()))?;
        Ok(2 * self.dd - self.mu.iter().take(k).sum::<i64>())
    }

    /// `c_1·d = 3dD − Σ μ_i`.
    pub fn pair_c1(&self) -> i64 {
        3 * self.dd - self.mu.iter().sum::<i64>()
    }

    /// `d·[E_i]` for the 1-based index `i`.
    pub fn pair_exceptional(&self, i: usize) -> i64 {
        self.mu[i - 1]
    }

    /// `(d² − c_1·d)/2 + 1`, the arithmetic genus.
    pub fn arithmetic_genus(&self) -> i64 {
        let sq = self.dd * self.dd - self.mu.iter().map(|m| m * m).sum::<i64>();
        (sq - self.pair_c1()) / 2 + 1
    }

    /// Textual form `dD:μ1,...,μn`.
    pub fn literal(&self) -> String {
        format_class_literal(self.dd, &self.mu)
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

/// Parse the `INT ":" INT ("," INT)*` grammar (the list may be empty when `n = 0`).
pub fn parse_class_literal(text: &str) -> Result<(i64, Vec<i64>)> {
    let text = text.trim();
    let (head, tail) = match text.split_once(':') {
        Some((h, t)) => (h, Some(t)),
        None => (text, None),
    };
    let dd = head
        .trim()
        .parse::<i64>()
        .map_err(|_| Error::Parse(format!("bad class literal `{text}`")))?;
    let mut mu = Vec::new();
    if let Some(t) = tail {
        if !t.trim().is_empty() {
            for part in t.split(',') {
                mu.push(
                    part.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad class literal `{text}`")))?,
                );
            }
        }
    }
    Ok((dd, mu))
}

/// Format `dD:μ1,...,μn`.
pub fn format_class_literal(dd: i64, mu: &[i64]) -> String {
    let parts: Vec<String> = mu.iter().map(|m| m.to_string()).collect();
    format!("{}:{}", dd, parts.join(","))
}

/// A finitely supported sequence of non-negative integers indexed from 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiSeq {
    /// `counts[i-1]` is the `i`-th entry; never has trailing zeros.
    counts: Vec<u64>,
}

impl MultiSeq {
    /// The zero sequence.
    pub fn zero() -> Self {
        MultiSeq::default()
    }

    /// `c·u_i`.
    pub fn unit(i: usize, c: u64) -> Self {
        let mut s = MultiSeq::zero();
        s.set(i, c);
        s
    }

    /// Build from a dense slice (`v[0]` is the weight-1 entry).
    pub fn from_dense(v: &[u64]) -> Self {
        let mut s = MultiSeq { counts: v.to_vec() };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
    }

    /// The entry of index `i ≥ 1`.
    pub fn get(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        self.counts.get(i - 1).copied().unwrap_or(0)
    }

    /// Set the entry of index `i ≥ 1`.
    pub fn set(&mut self, i: usize, c: u64) {
        assert!(i >= 1, "MultiSeq indices start at 1");
        if self.counts.len() < i {
            self.counts.resize(i, 0);
        }
        self.counts[i - 1] = c;
        self.trim();
    }

    /// Largest index with a nonzero entry (0 for the zero sequence).
    pub fn max_index(&self) -> usize {
        self.counts.len()
    }

    /// Dense view, `[a_1, a_2, ...]`.
    pub fn dense(&self) -> &[u64] {
        &self.counts
    }

    /// `true` for the zero sequence.
    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// `|a| = Σ a_i`.
    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Ia = Σ i·a_i`.
    pub fn weighted(&self) -> u64 {
        self.counts.iter().enumerate().map(|(i, c)| (i as u64 + 1) * c).sum()
    }

    /// `I^a = Π i^{a_i}`.
    pub fn product(&self) -> Result<i128> {
        let mut acc: i128 = 1;
        for (i, &c) in self.counts.iter().enumerate() {
            acc = crate::num::mul(acc, crate::num::pow(i as i128 + 1, c)?)?;
        }
        Ok(acc)
    }

    /// `Σ_j a_{2j}`.
    pub fn even_size(&self) -> u64 {
        self.counts.iter().skip(1).step_by(2).sum()
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &MultiSeq) -> MultiSeq {
        let len = self.counts.len().max(other.counts.len());
        let v: Vec<u64> = (1..=len).map(|i| self.get(i) + other.get(i)).collect();
        MultiSeq::from_dense(&v)
    }

    /// `c·self`.
    pub fn scaled(&self, c: u64) -> MultiSeq {
        MultiSeq::from_dense(&self.counts.iter().map(|x| x * c).collect::<Vec<_>>())
    }

    /// Parse the `weight^count` list grammar; the empty string is the zero sequence.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = MultiSeq::zero();
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(s);
        }
        for part in text.split(',') {
            let (w, c) = part
                .trim()
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("bad sequence literal `{text}`")))?;
            let w: usize =
                w.trim().parse().map_err(|_| Error::Parse(format!("bad sequence literal `{text}`")))?;
            let c: u64 =
                c.trim().parse().map_err(|_| Error::Parse(format!("bad sequence literal `{text}`")))?;
            if w == 0 || w > MULTISEQ_INDEX_CAP {
                return Err(Error::Parse(format!(
                    "sequence index {w} outside 1..={MULTISEQ_INDEX_CAP}"
                )));
            }
            let prev = s.get(w);
            s.set(w, prev + c);
        }
        Ok(s)
    }

    /// Textual form, e.g. `1^2,2^1`; empty for the zero sequence.
    pub fn literal(&self) -> String {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, c)| format!("{}^{}", i + 1, c))
            .collect();
        parts.join(",")
    }
}

impl fmt::Display for MultiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl FromStr for MultiSeq {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MultiSeq::parse(s)
    }
}

impl PartialOrd for MultiSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.counts.len().cmp(&other.counts.len()).then_with(|| self.counts.cmp(&other.counts))
    }
}

/// `(|a|, Ia, I^a)`.
pub fn seq_functionals(a: &MultiSeq) -> Result<(u64, u64, i128)> {
    Ok((a.size(), a.weighted(), a.product()?))
}

/// All sequences `b` with `b ≤ a` componentwise.
pub fn sub_sequences(a: &MultiSeq) -> Vec<MultiSeq> {
    let mut out = vec![Vec::<u64>::new()];
    for &c in a.dense() {
        let mut next = Vec::new();
        for prefix in &out {
            for x in 0..=c {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(|v| MultiSeq::from_dense(&v)).collect()
}
