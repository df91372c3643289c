//! Relative Gromov–Witten invariants `GW^{α,β}_{X̃_n}(d, g)` of the blown-up plane
//! relative to a conic, computed as weighted counts of marked floor diagrams.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagrams::{self, FloorDiagram, MarkingType};
use crate::error::{Error, Result};
use crate::homology::MultiSeq;
use crate::num::{self, Int};

/// Counters describing the work done by an engine.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Floor diagrams visited.
    pub diagrams: u64,
    /// Concrete markings visited (explicit enumeration only).
    pub markings: u64,
    /// Memo lookups answered from the table.
    pub memo_hits: u64,
    /// Memo lookups that had to be computed.
    pub memo_misses: u64,
}

/// A relative invariant request on `X̃_n`: the class `dd·D − Σ mu_i E_i`, the genus and
/// the tangency profiles with the conic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelativeQuery {
    /// Coefficient of the line class.
    pub dd: i64,
    /// Coefficients `μ_i` (the class is `dd·D − Σ μ_i E_i`).
    pub mu: Vec<i64>,
    /// Genus.
    pub genus: i64,
    /// Fixed tangency points.
    pub alpha: MultiSeq,
    /// Moving tangency points.
    pub beta: MultiSeq,
}

impl RelativeQuery {
    /// Build a request.
    pub fn new(dd: i64, mu: Vec<i64>, genus: i64, alpha: MultiSeq, beta: MultiSeq) -> Self {
        RelativeQuery { dd, mu, genus, alpha, beta }
    }

    /// `d·E = 2·dd − Σ μ_i`.
    pub fn conic_degree(&self) -> i64 {
        2 * self.dd - self.mu.iter().sum::<i64>()
    }

    /// `dd − 1 + g + |β|`: the number of point conditions not on the conic.
    pub fn free_conditions(&self) -> i64 {
        self.dd - 1 + self.genus + self.beta.size() as i64
    }

    /// Whether the tangency profile is compatible with the class.
    pub fn is_balanced(&self) -> bool {
        self.conic_degree() == (self.alpha.weighted() + self.beta.weighted()) as i64
    }

    /// Memo key; the invariant is symmetric in the `μ_i`, so they are sorted and
    /// zeros are dropped.
    pub fn key(&self) -> String {
        let mut mu: Vec<i64> = self.mu.iter().copied().filter(|&m| m != 0).collect();
        mu.sort_unstable_by(|a, b| b.cmp(a));
        let mu: Vec<String> = mu.iter().map(|m| m.to_string()).collect();
        format!(
            "{}:{}|g{}|a{}|b{}",
            self.dd,
            mu.join(","),
            self.genus,
            self.alpha.literal(),
            self.beta.literal()
        )
    }

    /// Marking type for diagrams of this request (non-negative `μ` only).
    pub fn marking_type(&self) -> MarkingType {
        MarkingType {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            tags: self.mu.iter().map(|&m| m.max(0) as u64).collect(),
        }
    }
}

/// Value of the invariant when no point condition lies outside the conic, i.e. when
/// `dd − 1 + g + |β| ≤ 0`, or for classes that are not the class of a curve of
/// positive degree. Returns `None` if the floor-diagram count applies.
pub fn base_case(q: &RelativeQuery) -> Option<Result<Int>> {
    if q.genus < 0 || !q.is_balanced() {
        return Some(Ok(0));
    }
    if q.dd <= 0 {
        // Only multiples of exceptional curves can occur.
        if q.dd < 0 || q.genus != 0 {
            return Some(Ok(0));
        }
        let nonzero: Vec<(usize, i64)> =
            q.mu.iter().copied().enumerate().filter(|&(_, m)| m != 0).collect();
        if nonzero.len() != 1 || nonzero[0].1 >= 0 {
            return Some(Ok(0));
        }
        let l = -nonzero[0].1;
        if l >= 2 {
            return Some(Err(Error::NonEnumerative(format!("{l}*E_{}", nonzero[0].0 + 1))));
        }
        let value = if q.alpha.is_zero() && q.beta == MultiSeq::unit(1, 1) { 1 } else { 0 };
        return Some(Ok(value));
    }
    if q.mu.iter().any(|&m| m < 0) {
        return Some(Ok(0));
    }
    let free = q.free_conditions();
    if free < 0 {
        return Some(Ok(0));
    }
    if free > 0 {
        return None;
    }
    // dd = 1, g = 0, β = 0
    let total_mu: i64 = q.mu.iter().sum();
    let ones = q.mu.iter().all(|&m| m <= 1);
    let value = if !ones {
        0
    } else if total_mu == 0 {
        (q.alpha == MultiSeq::unit(1, 2) || q.alpha == MultiSeq::unit(2, 1)) as Int
    } else if total_mu == 1 {
        (q.alpha == MultiSeq::unit(1, 1)) as Int
    } else if total_mu == 2 {
        q.alpha.is_zero() as Int
    } else {
        0
    };
    Some(Ok(value))
}

/// `μ^C(D, m) = I^β · Π_{internal} w(e)²`.
pub fn complex_multiplicity(diagram: &FloorDiagram, beta: &MultiSeq) -> Result<Int> {
    num::mul(beta.product()?, diagram.squared_weight_product()?)
}

/// Contribution of a single floor diagram.
#[derive(Debug, Clone)]
pub struct DiagramTerm {
    /// The diagram.
    pub diagram: FloorDiagram,
    /// Its multiplicity.
    pub multiplicity: Int,
    /// Number of marking classes on it.
    pub markings: Int,
}

/// Memoizing evaluator of relative invariants.
#[derive(Debug, Default, Clone)]
pub struct ComplexEngine {
    memo: HashMap<String, Int>,
    /// Work counters.
    pub stats: Stats,
}

impl ComplexEngine {
    /// Fresh engine.
    pub fn new() -> Self {
        Self::default()
    }

    /// The invariant `GW^{α,β}_{X̃_n}(d, g)`.
    pub fn gw(&mut self, q: &RelativeQuery) -> Result<Int> {
        if let Some(v) = base_case(q) {
            return v;
        }
        let key = q.key();
        if let Some(&v) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(v);
        }
        self.stats.memo_misses += 1;
        let mut total: Int = 0;
        for t in self.terms(q)? {
            total = num::add(total, num::mul(t.multiplicity, t.markings)?)?;
        }
        self.memo.insert(key, total);
        Ok(total)
    }

    /// Per-diagram contributions (empty for base cases).
    pub fn terms(&mut self, q: &RelativeQuery) -> Result<Vec<DiagramTerm>> {
        if let Some(v) = base_case(q) {
            v?;
            return Ok(Vec::new());
        }
        let ty = q.marking_type();
        let pool = ty.source_pool();
        let mut out = Vec::new();
        for diagram in diagrams::enumerate_diagrams_with_sources(q.dd, q.genus, Some(&pool)) {
            self.stats.diagrams += 1;
            let markings = diagrams::count_marking_classes(&diagram, &ty)?;
            if markings == 0 {
                continue;
            }
            let multiplicity = complex_multiplicity(&diagram, &q.beta)?;
            out.push(DiagramTerm { diagram, multiplicity, markings });
        }
        Ok(out)
    }

    /// Memo contents, for persistence.
    pub fn memo(&self) -> &HashMap<String, Int> {
        &self.memo
    }

    /// Seed the memo from persisted values.
    pub fn extend_memo(&mut self, entries: impl IntoIterator<Item = (String, Int)>) {
        self.memo.extend(entries);
    }
}

/// One-shot evaluation of `GW^{α,β}_{X̃_n}(d, g)`.
pub fn gw_relative(q: &RelativeQuery) -> Result<Int> {
    ComplexEngine::new().gw(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> MultiSeq {
        s.parse().unwrap()
    }

    #[test]
    fn base_cases() {
        let q = RelativeQuery::new(0, vec![-1], 0, MultiSeq::zero(), seq("1^1"));
        assert_eq!(gw_relative(&q).unwrap(), 1);
        let q = RelativeQuery::new(0, vec![-2], 0, MultiSeq::zero(), seq("1^2"));
        assert!(matches!(gw_relative(&q), Err(Error::NonEnumerative(_))));
        let q = RelativeQuery::new(1, vec![1, 1], 0, MultiSeq::zero(), MultiSeq::zero());
        assert_eq!(gw_relative(&q).unwrap(), 1);
        let q = RelativeQuery::new(1, vec![], 0, seq("2^1"), MultiSeq::zero());
        assert_eq!(gw_relative(&q).unwrap(), 1);
    }

    #[test]
    fn plane_cubics() {
        let q = RelativeQuery::new(3, vec![], 0, MultiSeq::zero(), seq("1^6"));
        assert_eq!(gw_relative(&q).unwrap(), 12);
        let q = RelativeQuery::new(3, vec![], 1, MultiSeq::zero(), seq("1^6"));
        assert_eq!(gw_relative(&q).unwrap(), 1);
    }

    #[test]
    fn lines_through_two_points() {
        let q = RelativeQuery::new(1, vec![], 0, MultiSeq::zero(), seq("1^2"));
        assert_eq!(gw_relative(&q).unwrap(), 1);
        let q = RelativeQuery::new(2, vec![], 0, MultiSeq::zero(), seq("1^4"));
        assert_eq!(gw_relative(&q).unwrap(), 1);
    }
}
