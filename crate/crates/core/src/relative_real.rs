//! Real floor diagrams: `(s, κ)`-real marked floor diagrams, their real
//! multiplicities `μ^ℝ` and `ν^{ℝ,ε}`, and the numbers `FW` computing relative
//! Welschinger invariants of `X̃_n(κ)`.
//!
//! The tangency points are labelled as follows: the real fixed points `α^ℜ` carry
//! the labels `1..|α^ℜ|` sorted by weight, the pairs of conjugated fixed points
//! `α^ℑ` carry the next `2|α^ℑ|` labels, again sorted by weight, and the pairs
//! `{2k-1, 2k}` after that are the `s` pairs of conjugated points outside the conic.

use std::collections::{BTreeMap, HashMap};

use crate::diagrams::{self, Elem, FloorDiagram, Marking, MarkingType, SourceRole};
use crate::error::{Error, Result};
use crate::homology::MultiSeq;
use crate::num::{self, Int};
use crate::relative_complex::{self, RelativeQuery, Stats};

/// Which of the three floor-diagram sums is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `FW_{X̃_n(κ)}`: all real diagrams, multiplicity `μ^ℝ`.
    Plain,
    /// `FW_{X̃_n(κ),ε}`: `ε`-sided diagrams, multiplicity `μ^ℝ` (requires `n = 2κ`).
    Sided(u8),
    /// `FW_{X̃_n(κ),ε,ε}`: significant `ε`-sided diagrams, multiplicity `ν^{ℝ,ε}`
    /// (requires `n = 2κ`).
    SidedSided(u8),
}

impl Variant {
    /// Short textual name, as used in memo keys and on the command line.
    pub fn name(&self) -> String {
        match self {
            Variant::Plain => "plain".into(),
            Variant::Sided(e) => format!("sided{e}"),
            Variant::SidedSided(e) => format!("sidedsided{e}"),
        }
    }
}

/// A request for `FW^{α^ℜ,β^ℜ,α^ℑ,β^ℑ}_{X̃_n(κ)}(d, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealQuery {
    /// Coefficient of the line class.
    pub dd: i64,
    /// Coefficients `μ_1..μ_n`; the number of entries is `n`.
    pub mu: Vec<i64>,
    /// Number of pairs of conjugated points among the blown-up points.
    pub kappa: usize,
    /// Number of pairs of conjugated points among the point conditions.
    pub s: usize,
    /// Real fixed tangency points.
    pub alpha_re: MultiSeq,
    /// Real moving tangency points.
    pub beta_re: MultiSeq,
    /// Pairs of conjugated fixed tangency points.
    pub alpha_im: MultiSeq,
    /// Pairs of conjugated moving tangency points.
    pub beta_im: MultiSeq,
}

impl RealQuery {
    /// A request with no fixed tangency points.
    pub fn new(dd: i64, mu: Vec<i64>, kappa: usize, s: usize, beta_re: MultiSeq, beta_im: MultiSeq) -> Self {
        RealQuery {
            dd,
            mu,
            kappa,
            s,
            alpha_re: MultiSeq::zero(),
            beta_re,
            alpha_im: MultiSeq::zero(),
            beta_im,
        }
    }

    /// Number of blown-up points.
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Complex tangency type `(α^ℜ + 2α^ℑ, β^ℜ + 2β^ℑ)`.
    pub fn complex_alpha(&self) -> MultiSeq {
        self.alpha_re.plus(&self.alpha_im.scaled(2))
    }

    /// See [`RealQuery::complex_alpha`].
    pub fn complex_beta(&self) -> MultiSeq {
        self.beta_re.plus(&self.beta_im.scaled(2))
    }

    /// `ζ = d·D − 1 + |α^ℜ| + |β^ℜ| + 2|α^ℑ| + 2|β^ℑ|`.
    pub fn zeta(&self) -> i64 {
        self.dd - 1
            + (self.alpha_re.size() + self.beta_re.size()) as i64
            + 2 * (self.alpha_im.size() + self.beta_im.size()) as i64
    }

    /// Number of real point conditions `r = ζ − 2s − |α^ℜ| − 2|α^ℑ|`.
    pub fn r(&self) -> i64 {
        self.zeta() - 2 * self.s as i64 - self.alpha_re.size() as i64 - 2 * self.alpha_im.size() as i64
    }

    /// Whether `d·E_{2i−1} = d·E_{2i}` for `i ≤ κ`.
    pub fn class_is_symmetric(&self) -> bool {
        (0..self.kappa).all(|i| self.mu.get(2 * i) == self.mu.get(2 * i + 1))
    }

    fn check(&self, variant: Variant) -> Result<()> {
        if 2 * self.kappa > self.n() {
            return Err(Error::Domain(format!("kappa = {} needs at least {} blown-up points", self.kappa, 2 * self.kappa)));
        }
        if !matches!(variant, Variant::Plain) && 2 * self.kappa != self.n() {
            return Err(Error::Domain("sided variants require n = 2kappa".into()));
        }
        if let Variant::Sided(e) | Variant::SidedSided(e) = variant {
            if e > 1 {
                return Err(Error::Domain("epsilon is 0 or 1".into()));
            }
        }
        Ok(())
    }

    /// Memo key: the pairs of conjugated blown-up points are sorted, the real
    /// coordinates are sorted, and zero coordinates are dropped.
    pub fn key(&self, variant: Variant) -> String {
        let mut pairs: Vec<i64> = (0..self.kappa).map(|i| self.mu[2 * i]).filter(|&m| m != 0).collect();
        pairs.sort_unstable_by(|a, b| b.cmp(a));
        let mut reals: Vec<i64> = self.mu[2 * self.kappa..].iter().copied().filter(|&m| m != 0).collect();
        reals.sort_unstable_by(|a, b| b.cmp(a));
        let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{}:[{}][{}]|s{}|aR{}|bR{}|aI{}|bI{}|{}",
            self.dd,
            join(&pairs),
            join(&reals),
            self.s,
            self.alpha_re.literal(),
            self.beta_re.literal(),
            self.alpha_im.literal(),
            self.beta_im.literal(),
            variant.name()
        )
    }

    /// Labels carried by fixed sources, indexed by weight.
    pub fn alpha_labels(&self) -> Vec<Vec<u32>> {
        let max = self.alpha_re.max_index().max(self.alpha_im.max_index());
        let mut out = vec![Vec::new(); max + 1];
        let mut next = 1u32;
        for w in 1..=self.alpha_re.max_index() {
            for _ in 0..self.alpha_re.get(w) {
                out[w].push(next);
                next += 1;
            }
        }
        for w in 1..=self.alpha_im.max_index() {
            for _ in 0..self.alpha_im.get(w) {
                out[w].push(next);
                out[w].push(next + 1);
                next += 2;
            }
        }
        out
    }

    fn complex_query(&self) -> RelativeQuery {
        RelativeQuery::new(self.dd, self.mu.clone(), 0, self.complex_alpha(), self.complex_beta())
    }
}

/// All real multiplicities of one marked floor diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RealContribution {
    /// `μ^ℝ_{s,κ}`.
    pub mu: Int,
    /// Whether the diagram is `ε`-sided, for `ε = 0, 1` (only meaningful if `n = 2κ`).
    pub sided: [bool; 2],
    /// `ν^{ℝ,ε}_s` (zero unless significant and `ε`-sided).
    pub nu: [Int; 2],
}

impl RealContribution {
    /// The multiplicity entering the sum of the given variant.
    pub fn value(&self, variant: Variant) -> Int {
        match variant {
            Variant::Plain => self.mu,
            Variant::Sided(e) => {
                if self.sided[e as usize] {
                    self.mu
                } else {
                    0
                }
            }
            Variant::SidedSided(e) => self.nu[e as usize],
        }
    }
}

/// How the number `r'_m` of real labelled edges entering `ν^{ℝ,ε}` is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealEdgeCount {
    /// Only internal edges.
    Internal,
    /// Internal edges and source edges.
    All,
    /// Only source edges.
    Sources,
}

/// The convention used by this crate for `r'_m`.
pub const R_PRIME_CONVENTION: RealEdgeCount = RealEdgeCount::Sources;

/// Is the element `a` incident to `b` (a vertex and one of its edges)?
fn incident(diagram: &FloorDiagram, a: Elem, b: Elem) -> bool {
    let floor_edge = |v: usize, e: Elem| match e {
        Elem::Edge(i) => diagram.edges[i].tail == v || diagram.edges[i].head == v,
        Elem::SourceEdge(k) => diagram.sources[k].floor == v,
        _ => false,
    };
    match (a, b) {
        (Elem::Floor(v), e) | (e, Elem::Floor(v)) => floor_edge(v, e),
        (Elem::Source(k), Elem::SourceEdge(l)) | (Elem::SourceEdge(l), Elem::Source(k)) => k == l,
        _ => false,
    }
}

/// Evaluate every real multiplicity of a concrete marking. Returns `None` when the
/// marked diagram is not `(s, κ)`-real of the requested real type.
pub fn real_contribution(
    diagram: &FloorDiagram,
    marking: &Marking,
    q: &RealQuery,
    r_prime: RealEdgeCount,
) -> Result<Option<RealContribution>> {
    let zeta = marking.labels.len();
    let a_re = q.alpha_re.size() as usize;
    let a_im = q.alpha_im.size() as usize;
    let r = q.r();
    if r < 0 {
        return Ok(None);
    }
    let r = r as usize;
    let f = diagram.floors.len();

    // ρ on A_0
    let mut rho: Vec<usize> = (0..=zeta).collect();
    let mut in_im = vec![false; zeta + 1];
    let mut pair_starts: Vec<usize> = (1..=a_im).map(|k| a_re + 2 * k - 1).collect();
    pair_starts.extend((1..=q.s).map(|k| a_re + 2 * a_im + 2 * k - 1));
    for i in pair_starts {
        if i + 1 > zeta {
            return Ok(None);
        }
        let (x, y) = (marking.labels[i - 1], marking.labels[i]);
        if !incident(diagram, x, y) {
            rho[i] = i + 1;
            rho[i + 1] = i;
            in_im[i] = true;
            in_im[i + 1] = true;
        }
    }
    let rho_tag = |t: u32| -> u32 {
        if (t as usize) <= 2 * q.kappa {
            if t % 2 == 1 {
                t + 1
            } else {
                t - 1
            }
        } else {
            t
        }
    };

    // floor map induced by the equivalence (D, m) ~ (D, m∘ρ)
    let mut phi: Vec<Option<usize>> = vec![None; f];
    let set = |phi: &mut Vec<Option<usize>>, a: usize, b: usize| -> bool {
        match phi[a] {
            None => {
                phi[a] = Some(b);
                true
            }
            Some(x) => x == b,
        }
    };
    for l in 1..=zeta {
        let x = marking.labels[l - 1];
        let y = marking.labels[rho[l] - 1];
        let ok = match (x, y) {
            (Elem::Floor(a), Elem::Floor(b)) => set(&mut phi, a, b),
            (Elem::Edge(a), Elem::Edge(b)) => {
                let (ea, eb) = (diagram.edges[a], diagram.edges[b]);
                ea.weight == eb.weight && set(&mut phi, ea.tail, eb.tail) && set(&mut phi, ea.head, eb.head)
            }
            (Elem::Source(a), Elem::Source(b)) | (Elem::SourceEdge(a), Elem::SourceEdge(b)) => {
                let (sa, sb) = (diagram.sources[a], diagram.sources[b]);
                sa.weight == sb.weight && set(&mut phi, sa.floor, sb.floor)
            }
            _ => false,
        };
        if !ok {
            return Ok(None);
        }
    }
    if f == 1 {
        phi[0] = Some(0);
    }
    let phi: Vec<usize> = match phi.into_iter().collect::<Option<Vec<_>>>() {
        Some(p) => p,
        None => return Ok(None),
    };
    let mut hit = vec![false; f];
    for &p in &phi {
        if hit[p] {
            return Ok(None);
        }
        hit[p] = true;
    }
    // tags: ρ(T(v)) = T(φ(v))
    let mut tags_at: Vec<Vec<u32>> = vec![Vec::new(); f];
    for (k, s) in diagram.sources.iter().enumerate() {
        if let SourceRole::Tag(t) = marking.roles[k] {
            tags_at[s.floor].push(t);
        }
    }
    for t in tags_at.iter_mut() {
        t.sort_unstable();
    }
    for v in 0..f {
        let mut image: Vec<u32> = tags_at[v].iter().map(|&t| rho_tag(t)).collect();
        image.sort_unstable();
        if image != tags_at[phi[v]] {
            return Ok(None);
        }
    }

    // real type: moving source edges in m(Im)
    let mut im_moving: BTreeMap<usize, u64> = BTreeMap::new();
    let mut real_moving: BTreeMap<usize, u64> = BTreeMap::new();
    for (k, s) in diagram.sources.iter().enumerate() {
        if let SourceRole::Moving(l) = marking.roles[k] {
            let entry = if in_im[l as usize] { &mut im_moving } else { &mut real_moving };
            *entry.entry(s.weight as usize).or_default() += 1;
        }
    }
    for (&w, &c) in &im_moving {
        if c != 2 * q.beta_im.get(w) {
            return Ok(None);
        }
    }
    for w in 1..=q.beta_im.max_index() {
        if im_moving.get(&w).copied().unwrap_or(0) != 2 * q.beta_im.get(w) {
            return Ok(None);
        }
    }

    let edge_label: Vec<usize> = {
        let mut v = vec![0usize; diagram.edges.len()];
        for (l, el) in marking.labels.iter().enumerate() {
            if let Elem::Edge(e) = el {
                v[*e] = l + 1;
            }
        }
        v
    };
    let edge_is_real = |e: usize| !in_im[edge_label[e]];
    // source edges: real if their label is fixed by ρ, or, for tags, if the tag and
    // its floor are fixed
    let source_is_real = |k: usize| -> bool {
        match marking.roles[k] {
            SourceRole::Fixed(l) | SourceRole::Moving(l) => !in_im[l as usize],
            SourceRole::Tag(t) => rho_tag(t) == t && phi[diagram.sources[k].floor] == diagram.sources[k].floor,
        }
    };

    let beta_re_even: u64 = (1..=q.beta_re.max_index()).filter(|w| w % 2 == 0).map(|w| q.beta_re.get(w)).sum();
    let i_beta_im = q.beta_im.product()?;
    let mut e_product: Int = 1;
    for (e, edge) in diagram.edges.iter().enumerate() {
        if edge_label[e] <= zeta - r {
            e_product = num::mul(e_product, edge.weight as Int)?;
        }
    }
    let im_pairs: Vec<usize> = (0..f).filter(|&v| phi[v] > v).collect();

    // μ^ℝ
    let even_ok = diagram
        .edges
        .iter()
        .enumerate()
        .all(|(e, edge)| edge.weight % 2 == 1 || in_im[edge_label[e]]);
    let mu = if even_ok {
        let mut sign_exp = 0i64;
        for &v in &im_pairs {
            let high_tags = tags_at[v].iter().filter(|&&t| t as usize > 2 * q.kappa).count() as i64;
            sign_exp += diagram.floors[v] as i64 + high_tags;
        }
        let mut m = num::mul(num::pow(2, beta_re_even)?, i_beta_im)?;
        m = num::mul(m, num::sign(sign_exp))?;
        num::mul(m, e_product)?
    } else {
        0
    };

    let mut contribution = RealContribution { mu, sided: [false; 2], nu: [0; 2] };
    if 2 * q.kappa != q.n() {
        return Ok(Some(contribution));
    }

    // ε-sided
    let real_edges_even = diagram.edges.iter().enumerate().all(|(e, edge)| !edge_is_real(e) || edge.weight % 2 == 0)
        && diagram.sources.iter().enumerate().all(|(k, s)| !source_is_real(k) || s.weight % 2 == 0);
    let deg1_paired = (0..f).all(|v| diagram.floors[v] != 1 || phi[v] != v);
    contribution.sided = [real_edges_even, real_edges_even && deg1_paired];

    // significant
    let im_even = diagram.edges.iter().enumerate().all(|(e, edge)| edge_is_real(e) || edge.weight % 2 == 0)
        && diagram.sources.iter().enumerate().all(|(k, s)| {
            source_is_real(k) || matches!(marking.roles[k], SourceRole::Tag(_)) || s.weight % 2 == 0
        });
    let real_internal_2mod4 =
        diagram.edges.iter().enumerate().all(|(e, edge)| !edge_is_real(e) || edge.weight % 4 == 2);
    let tag_symmetric = im_pairs.iter().all(|&v| {
        let w = phi[v];
        let mut a = tags_at[v].clone();
        let mut b = tags_at[w].clone();
        a.dedup();
        b.dedup();
        a == b
    });
    if !(im_even && real_internal_2mod4 && tag_symmetric) || !(contribution.sided[0] || contribution.sided[1]) {
        return Ok(Some(contribution));
    }
    let r_m = diagram.edges.iter().enumerate().filter(|&(e, _)| edge_label[e] > zeta - r).count() as u64;
    let mut r_prime_m = if r_prime == RealEdgeCount::Sources {
        0
    } else {
        diagram.edges.iter().enumerate().filter(|&(e, _)| edge_is_real(e) && edge_label[e] <= zeta - r).count() as u64
    };
    if r_prime != RealEdgeCount::Internal {
        r_prime_m += diagram
            .sources
            .iter()
            .enumerate()
            .filter(|&(k, _)| {
                source_is_real(k)
                    && match marking.roles[k] {
                        SourceRole::Moving(l) | SourceRole::Fixed(l) => (l as usize) <= zeta - r,
                        SourceRole::Tag(_) => false,
                    }
            })
            .count() as u64;
    }
    let two_exp = 2 * r_m + beta_re_even;
    let mut o_prime = 0i64;
    let mut im1 = 0i64;
    for &v in &im_pairs {
        if diagram.floors[v] == 1 {
            im1 += 1;
        } else {
            let internal = diagram
                .edges
                .iter()
                .filter(|e| (e.tail == v || e.head == v) && e.weight % 4 == 2)
                .count();
            let sources = diagram.sources.iter().filter(|s| s.floor == v && s.weight % 4 == 2).count();
            o_prime += (internal + sources) as i64;
        }
    }
    // 2^{-r'_m} is compensated by the weights 2 mod 4 of the real edges in E(D)
    let base = num::mul(num::pow(2, two_exp)?, i_beta_im)?;
    let base = num::mul(num::mul(base, num::sign(o_prime))?, e_product)?;
    let base = num::exact_div(base, num::pow(2, r_prime_m)?)?;
    for eps in 0..2 {
        if contribution.sided[eps] {
            contribution.nu[eps] = num::mul(base, num::sign(eps as i64 * im1))?;
        }
    }
    Ok(Some(contribution))
}

/// All five floor-diagram sums of one request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RealTotals {
    /// `FW`.
    pub plain: Int,
    /// `FW_ε` for `ε = 0, 1`.
    pub sided: [Int; 2],
    /// `FW_{ε,ε}` for `ε = 0, 1`.
    pub sided_sided: [Int; 2],
}

impl RealTotals {
    /// The requested sum.
    pub fn value(&self, variant: Variant) -> Int {
        match variant {
            Variant::Plain => self.plain,
            Variant::Sided(e) => self.sided[e as usize],
            Variant::SidedSided(e) => self.sided_sided[e as usize],
        }
    }
}

/// One real marked floor diagram (up to equivalence) with its multiplicities.
#[derive(Debug, Clone)]
pub struct RealTerm {
    /// Underlying diagram.
    pub diagram: FloorDiagram,
    /// A representative marking.
    pub marking: Marking,
    /// Its multiplicities.
    pub contribution: RealContribution,
}

/// Memoizing evaluator of the numbers `FW`.
#[derive(Debug, Default, Clone)]
pub struct RealEngine {
    memo: HashMap<String, Int>,
    /// Work counters.
    pub stats: Stats,
}

impl RealEngine {
    /// Fresh engine.
    pub fn new() -> Self {
        Self::default()
    }

    /// Memo contents, for persistence.
    pub fn memo(&self) -> &HashMap<String, Int> {
        &self.memo
    }

    /// Seed the memo from persisted values.
    pub fn extend_memo(&mut self, entries: impl IntoIterator<Item = (String, Int)>) {
        self.memo.extend(entries);
    }

    /// `FW` of the requested variant.
    pub fn fw(&mut self, q: &RealQuery, variant: Variant) -> Result<Int> {
        q.check(variant)?;
        let key = q.key(variant);
        if let Some(&v) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(v);
        }
        self.stats.memo_misses += 1;
        let totals = self.totals(q)?;
        let variants: Vec<Variant> = if 2 * q.kappa == q.n() {
            vec![
                Variant::Plain,
                Variant::Sided(0),
                Variant::Sided(1),
                Variant::SidedSided(0),
                Variant::SidedSided(1),
            ]
        } else {
            vec![Variant::Plain]
        };
        for v in variants {
            self.memo.insert(q.key(v), totals.value(v));
        }
        Ok(totals.value(variant))
    }

    /// Compute every variant at once (not memoized).
    pub fn totals(&mut self, q: &RealQuery) -> Result<RealTotals> {
        self.totals_with(q, R_PRIME_CONVENTION)
    }

    /// As [`RealEngine::totals`] with an explicit `r'_m` convention.
    ///
    /// When every point condition and every tangency point is real, the sums are
    /// obtained by counting marking classes; otherwise every marking is visited.
    pub fn totals_with(&mut self, q: &RealQuery, r_prime: RealEdgeCount) -> Result<RealTotals> {
        if q.s == 0 && q.alpha_im.is_zero() && q.beta_im.is_zero() {
            self.totals_by_counting(q, r_prime)
        } else {
            self.totals_by_enumeration(q, r_prime)
        }
    }

    /// As [`RealEngine::totals_with`], always visiting every concrete marking.
    pub fn totals_by_enumeration(&mut self, q: &RealQuery, r_prime: RealEdgeCount) -> Result<RealTotals> {
        if let Some(v) = real_base_case(q)? {
            return Ok(RealTotals { plain: v, sided: [0, 0], sided_sided: [0, 0] });
        }
        let mut totals = RealTotals::default();
        self.for_each_real(q, r_prime, &mut |diagram, _m, c, aut| {
            let _ = diagram;
            totals.plain = num::add(totals.plain, c.mu * 1)?;
            for e in 0..2 {
                if c.sided[e] {
                    totals.sided[e] = num::add(totals.sided[e], c.mu)?;
                }
                totals.sided_sided[e] = num::add(totals.sided_sided[e], c.nu[e])?;
            }
            let _ = aut;
            Ok(())
        })?;
        Ok(totals)
    }

    /// Totals for configurations without conjugated points or tangency points.
    ///
    /// Then `ρ` is the identity, the floor map `φ` is the identity, and the marked
    /// diagram is real exactly when the tag sets of each pair of conjugated blown-up
    /// points meet the same floors. Every internal edge carries one of the last `r`
    /// labels, so `μ^ℝ = 2^{|β^ℜ|_even}` when all edges have odd weight, and
    /// `ν^{ℝ,ε} = 2^{2|E| + |β^ℜ|_even − r'_m}` with `r'_m = |α^ℜ|` (or `0` when only
    /// internal edges count) when all edges have weight 2 mod 4 and the diagram is
    /// `ε`-sided. Sidedness asks for real sources of even weight, i.e. every source
    /// of odd weight is tagged, and for `ε = 1` no floor of degree 1.
    fn totals_by_counting(&mut self, q: &RealQuery, r_prime: RealEdgeCount) -> Result<RealTotals> {
        if let Some(v) = real_base_case(q)? {
            return Ok(RealTotals { plain: v, sided: [0, 0], sided_sided: [0, 0] });
        }
        let mut totals = RealTotals::default();
        let Some(ty) = real_marking_type(q) else {
            return Ok(totals);
        };
        let beta_re_even: u64 = (1..=q.beta_re.max_index()).filter(|w| w % 2 == 0).map(|w| q.beta_re.get(w)).sum();
        let mu = num::pow(2, beta_re_even)?;
        let r_prime_m = match r_prime {
            RealEdgeCount::Internal => 0,
            RealEdgeCount::All | RealEdgeCount::Sources => q.alpha_re.size(),
        };
        let sided = 2 * q.kappa == q.n();
        for diagram in diagrams::enumerate_diagrams_with_sources(q.dd, 0, Some(&ty.source_pool())) {
            self.stats.diagrams += 1;
            let odd = diagram.edges.iter().all(|e| e.weight % 2 == 1);
            let twice_odd = diagram.edges.iter().all(|e| e.weight % 4 == 2);
            let no_lines = diagram.floors.iter().all(|&d| d == 2);
            if odd {
                let classes = diagrams::count_symmetric_marking_classes(&diagram, &ty, q.kappa, false)?;
                totals.plain = num::add(totals.plain, num::mul(mu, classes)?)?;
            }
            if !sided || !(twice_odd || diagram.edges.is_empty()) {
                continue;
            }
            let classes = diagrams::count_symmetric_marking_classes(&diagram, &ty, q.kappa, true)?;
            if classes == 0 {
                continue;
            }
            let add = |slot: &mut [Int; 2], value: Int| -> Result<()> {
                slot[0] = num::add(slot[0], value)?;
                if no_lines {
                    slot[1] = num::add(slot[1], value)?;
                }
                Ok(())
            };
            if diagram.edges.is_empty() {
                add(&mut totals.sided, num::mul(mu, classes)?)?;
            }
            if twice_odd {
                let two_exp = 2 * diagram.edges.len() as u64 + beta_re_even;
                let nu = num::exact_div(num::pow(2, two_exp)?, num::pow(2, r_prime_m)?)?;
                add(&mut totals.sided_sided, num::mul(nu, classes)?)?;
            }
        }
        Ok(totals)
    }

    /// One representative per real marked floor diagram with its multiplicities.
    pub fn terms(&mut self, q: &RealQuery) -> Result<Vec<RealTerm>> {
        let mut out: Vec<RealTerm> = Vec::new();
        if real_base_case(q)?.is_some() {
            return Ok(out);
        }
        let mut seen: HashMap<Vec<u8>, ()> = HashMap::new();
        self.for_each_real(q, R_PRIME_CONVENTION, &mut |diagram, m, c, _| {
            let key = diagrams::canonical_class(diagram, m);
            if seen.insert(key, ()).is_none() {
                out.push(RealTerm { diagram: diagram.clone(), marking: m.clone(), contribution: *c });
            }
            Ok(())
        })?;
        // each class was visited |Aut| times but recorded once; totals are taken from
        // the class representatives directly
        Ok(out)
    }

    /// Visit every concrete real marking; totals accumulated by the caller must be
    /// divided by the automorphism count, which this routine does by scaling: the
    /// callback is invoked on every concrete marking, and sums are divided here.
    fn for_each_real(
        &mut self,
        q: &RealQuery,
        r_prime: RealEdgeCount,
        visit: &mut dyn FnMut(&FloorDiagram, &Marking, &RealContribution, u64) -> Result<()>,
    ) -> Result<()> {
        let Some(ty) = real_marking_type(q) else {
            return Ok(());
        };
        let pool = ty.source_pool();
        let alpha_labels = q.alpha_labels();
        for diagram in diagrams::enumerate_diagrams_with_sources(q.dd, 0, Some(&pool)) {
            self.stats.diagrams += 1;
            let aut = diagram.floor_automorphisms();
            // collect per-diagram, then divide the contributions by |Aut|
            let mut acc: Vec<(Marking, RealContribution)> = Vec::new();
            let mut markings = 0u64;
            diagrams::for_each_marking(&diagram, &ty, &alpha_labels, &mut |m| {
                markings += 1;
                if let Some(c) = real_contribution(&diagram, m, q, r_prime)? {
                    acc.push((m.clone(), c));
                }
                Ok(())
            })?;
            self.stats.markings += markings;
            if aut == 1 {
                for (m, c) in &acc {
                    visit(&diagram, m, c, 1)?;
                }
                continue;
            }
            // group the concrete markings into classes and report each class once
            let mut classes: HashMap<Vec<u8>, (usize, u64)> = HashMap::new();
            for (i, (m, _)) in acc.iter().enumerate() {
                let key = diagrams::canonical_class(&diagram, m);
                classes.entry(key).or_insert((i, 0)).1 += 1;
            }
            let mut reps: Vec<(usize, u64)> = classes.into_values().collect();
            reps.sort_unstable();
            for (i, count) in reps {
                if count != aut {
                    return Err(Error::Domain(format!(
                        "marking class visited {count} times, expected {aut}"
                    )));
                }
                visit(&diagram, &acc[i].0, &acc[i].1, aut)?;
            }
        }
        Ok(())
    }
}

/// Type of the markings of a request, `None` when no real marked diagram can exist.
fn real_marking_type(q: &RealQuery) -> Option<MarkingType> {
    if !q.class_is_symmetric() || q.r() < 0 || q.dd < 1 {
        return None;
    }
    let cq = q.complex_query();
    if !cq.is_balanced() || q.mu.iter().any(|&m| m < 0) {
        return None;
    }
    Some(MarkingType { alpha: cq.alpha, beta: cq.beta, tags: q.mu.iter().map(|&m| m as u64).collect() })
}

/// Value for requests with no floor diagram (`d·D ≤ 0`); `None` if diagrams apply.
fn real_base_case(q: &RealQuery) -> Result<Option<Int>> {
    if q.dd >= 1 {
        return Ok(None);
    }
    let cq = q.complex_query();
    let complex = match relative_complex::base_case(&cq) {
        Some(v) => v?,
        None => 0,
    };
    let value = if complex == 1 && q.class_is_symmetric() && q.beta_im.is_zero() && q.alpha_im.is_zero() {
        1
    } else {
        0
    };
    Ok(Some(value))
}

/// One-shot evaluation of `FW`.
pub fn fw(q: &RealQuery, variant: Variant) -> Result<Int> {
    RealEngine::new().fw(q, variant)
}
