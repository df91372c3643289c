//! Floor diagrams relative to a conic and their markings.
//!
//! A floor diagram is a connected, acyclic, weighted oriented graph whose
//! non-source vertices (floors) have divergence 2 or 4 (degree 1 or 2) and whose
//! sources are univalent vertices of negative divergence. Degree-1 floors are
//! sinks. A source is stored together with its unique edge as `(head floor, weight)`.
//!
//! A marking sends the ordered label set `A_0 = {1,…,ζ}` bijectively onto the
//! degree-2 floors, the internal edges and, for every source, either the source
//! itself (labels `1..|α|`, fixed tangency points) or its edge (tangency points
//! moving on the conic); the sets `A_1,…,A_n` become tags on weight-1 sources, at
//! most one source per floor carrying a given tag. Labels increase along the
//! orientation. With tags treated as sets, a marked diagram has no nontrivial
//! automorphism, which the counting routines exploit: the floor-automorphism
//! group acts freely on concrete markings, so classes are counted by dividing.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::homology::MultiSeq;
use crate::num::{self, Int};

/// An internal edge `tail → head` of weight `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    /// Tail floor (always of degree 2).
    pub tail: usize,
    /// Head floor.
    pub head: usize,
    /// Positive weight.
    pub weight: u32,
}

/// A source vertex together with its edge, entering `floor` with weight `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Source {
    /// Floor the source edge points to.
    pub floor: usize,
    /// Weight of the source edge (the negative divergence of the source).
    pub weight: u32,
}

/// A floor diagram (see the module documentation).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FloorDiagram {
    /// Degrees of the floors (1 or 2).
    pub floors: Vec<u8>,
    /// Internal edges, sorted.
    pub edges: Vec<Edge>,
    /// Sources, sorted by `(floor, weight)`.
    pub sources: Vec<Source>,
}

impl FloorDiagram {
    /// Build a diagram and check its invariants.
    pub fn new(floors: Vec<u8>, mut edges: Vec<Edge>, mut sources: Vec<Source>) -> Result<Self> {
        edges.sort();
        sources.sort();
        let d = FloorDiagram { floors, edges, sources };
        d.validate()?;
        Ok(d)
    }

    /// Sum of the floor degrees.
    pub fn degree(&self) -> i64 {
        self.floors.iter().map(|&x| x as i64).sum()
    }

    /// First Betti number `|edges| − |vertices| + 1` (sources and their edges cancel).
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.floors.len() as i64 + 1
    }

    /// Incoming minus outgoing weight at floor `v`.
    pub fn divergence(&self, v: usize) -> i64 {
        let mut div = 0i64;
        for e in &self.edges {
            if e.head == v {
                div += e.weight as i64;
            }
            if e.tail == v {
                div -= e.weight as i64;
            }
        }
        for s in &self.sources {
            if s.floor == v {
                div += s.weight as i64;
            }
        }
        div
    }

    /// Multiset of source weights as dense counts (`[c_1, c_2, …]`).
    pub fn source_profile(&self) -> Vec<u64> {
        let mut v = Vec::new();
        for s in &self.sources {
            let w = s.weight as usize;
            if v.len() < w {
                v.resize(w, 0);
            }
            v[w - 1] += 1;
        }
        v
    }

    /// Check every structural invariant of a floor diagram.
    pub fn validate(&self) -> Result<()> {
        let f = self.floors.len();
        if f == 0 {
            return Err(Error::Domain("a floor diagram has at least one floor".into()));
        }
        if self.floors.iter().any(|&x| x != 1 && x != 2) {
            return Err(Error::Domain("floor degrees must be 1 or 2".into()));
        }
        for e in &self.edges {
            if e.tail >= f || e.head >= f || e.weight == 0 || e.tail == e.head {
                return Err(Error::Domain("malformed internal edge".into()));
            }
            if self.floors[e.tail] == 1 {
                return Err(Error::Domain("degree-1 floors are sinks".into()));
            }
        }
        for s in &self.sources {
            if s.floor >= f || s.weight == 0 {
                return Err(Error::Domain("malformed source".into()));
            }
        }
        for v in 0..f {
            if self.divergence(v) != 2 * self.floors[v] as i64 {
                return Err(Error::Domain(format!("floor {v} has the wrong divergence")));
            }
        }
        if self.genus() < 0 || !self.connected() || !self.acyclic() {
            return Err(Error::Domain("a floor diagram is connected and acyclic".into()));
        }
        Ok(())
    }

    fn connected(&self) -> bool {
        let f = self.floors.len();
        let mut parent: Vec<usize> = (0..f).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &self.edges {
            let a = find(&mut parent, e.tail);
            let b = find(&mut parent, e.head);
            parent[a] = b;
        }
        let r = find(&mut parent, 0);
        (0..f).all(|v| find(&mut parent, v) == r)
    }

    fn acyclic(&self) -> bool {
        let f = self.floors.len();
        let mut indeg = vec![0usize; f];
        for e in &self.edges {
            indeg[e.head] += 1;
        }
        let mut stack: Vec<usize> = (0..f).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for e in self.edges.iter().filter(|e| e.tail == v) {
                indeg[e.head] -= 1;
                if indeg[e.head] == 0 {
                    stack.push(e.head);
                }
            }
        }
        seen == f
    }

    /// `Π w(e)²` over internal edges.
    pub fn squared_weight_product(&self) -> Result<Int> {
        let mut acc: Int = 1;
        for e in &self.edges {
            acc = num::mul(acc, (e.weight as Int) * (e.weight as Int))?;
        }
        Ok(acc)
    }

    /// Relabel floors by `perm` (`perm[old] = new`) and serialize.
    fn serialize_with(&self, perm: &[usize]) -> Vec<u32> {
        let f = self.floors.len();
        let mut degs = vec![0u32; f];
        for v in 0..f {
            degs[perm[v]] = self.floors[v] as u32;
        }
        let mut edges: Vec<(u32, u32, u32)> = self
            .edges
            .iter()
            .map(|e| (perm[e.tail] as u32, perm[e.head] as u32, e.weight))
            .collect();
        edges.sort_unstable();
        let mut sources: Vec<(u32, u32)> =
            self.sources.iter().map(|s| (perm[s.floor] as u32, s.weight)).collect();
        sources.sort_unstable();
        let mut out = Vec::with_capacity(1 + f + 3 * edges.len() + 2 * sources.len());
        out.push(f as u32);
        out.extend(degs);
        for (a, b, c) in edges {
            out.extend([a, b, c]);
        }
        out.push(u32::MAX);
        for (a, b) in sources {
            out.extend([a, b]);
        }
        out
    }

    /// Floors sorted by an isomorphism-invariant signature, and the block
    /// boundaries of equal signatures.
    fn invariant_blocks(&self) -> (Vec<usize>, Vec<(usize, usize)>) {
        let f = self.floors.len();
        let sig = |v: usize| {
            let mut src: Vec<u32> =
                self.sources.iter().filter(|s| s.floor == v).map(|s| s.weight).collect();
            src.sort_unstable();
            let mut inw: Vec<u32> =
                self.edges.iter().filter(|e| e.head == v).map(|e| e.weight).collect();
            inw.sort_unstable();
            let mut outw: Vec<u32> =
                self.edges.iter().filter(|e| e.tail == v).map(|e| e.weight).collect();
            outw.sort_unstable();
            (self.floors[v], src, inw, outw)
        };
        let sigs: Vec<_> = (0..f).map(sig).collect();
        let mut order: Vec<usize> = (0..f).collect();
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 1..=f {
            if i == f || sigs[order[i]] != sigs[order[start]] {
                blocks.push((start, i));
                start = i;
            }
        }
        (order, blocks)
    }

    /// Visit every floor permutation preserving the invariant blocks; the callback
    /// receives `perm[old] = new`.
    fn for_each_block_perm(&self, mut visit: impl FnMut(&[usize])) {
        let (order, blocks) = self.invariant_blocks();
        let f = self.floors.len();
        // positions[i] = old floor placed at new index i
        let mut positions = order.clone();
        fn rec(
            blocks: &[(usize, usize)],
            bi: usize,
            k: usize,
            positions: &mut Vec<usize>,
            f: usize,
            visit: &mut dyn FnMut(&[usize]),
        ) {
            if bi == blocks.len() {
                let mut perm = vec![0usize; f];
                for (new, &old) in positions.iter().enumerate() {
                    perm[old] = new;
                }
                visit(&perm);
                return;
            }
            let (s, e) = blocks[bi];
            if k == e {
                rec(blocks, bi + 1, if bi + 1 < blocks.len() { blocks[bi + 1].0 } else { 0 }, positions, f, visit);
                return;
            }
            for j in k..e {
                positions.swap(k, j);
                rec(blocks, bi, k + 1, positions, f, visit);
                positions.swap(k, j);
            }
            let _ = s;
        }
        let first = blocks.first().map(|b| b.0).unwrap_or(0);
        rec(&blocks, 0, first, &mut positions, f, &mut visit);
    }

    /// A canonical serialization: equal for two diagrams iff they are isomorphic.
    pub fn canonical_key(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        self.for_each_block_perm(|perm| {
            let s = self.serialize_with(perm);
            if best.as_ref().map_or(true, |b| s < *b) {
                best = Some(s);
            }
        });
        best.expect("at least one permutation")
    }

    /// Number of floor permutations induced by automorphisms of the diagram.
    pub fn floor_automorphisms(&self) -> u64 {
        let identity: Vec<usize> = (0..self.floors.len()).collect();
        let base = self.serialize_with(&identity);
        let mut count = 0;
        self.for_each_block_perm(|perm| {
            if self.serialize_with(perm) == base {
                count += 1;
            }
        });
        count
    }

    /// The diagram with floors renumbered by its canonical ordering.
    pub fn canonical_form(&self) -> FloorDiagram {
        let key = self.canonical_key();
        FloorDiagram::from_key(&key)
    }

    fn from_key(key: &[u32]) -> FloorDiagram {
        let f = key[0] as usize;
        let floors: Vec<u8> = key[1..=f].iter().map(|&x| x as u8).collect();
        let mut i = 1 + f;
        let mut edges = Vec::new();
        while key[i] != u32::MAX {
            edges.push(Edge { tail: key[i] as usize, head: key[i + 1] as usize, weight: key[i + 2] });
            i += 3;
        }
        i += 1;
        let mut sources = Vec::new();
        while i < key.len() {
            sources.push(Source { floor: key[i] as usize, weight: key[i + 1] });
            i += 2;
        }
        FloorDiagram { floors, edges, sources }
    }

    /// Graphviz rendering; floors are ellipses annotated with their degree, sources are
    /// omitted, weights are printed when at least 2, optional labels are attached.
    pub fn to_dot(&self, marking: Option<&Marking>) -> String {
        let mut floor_labels: Vec<Vec<String>> = vec![Vec::new(); self.floors.len()];
        let mut edge_labels: Vec<Vec<String>> = vec![Vec::new(); self.edges.len()];
        if let Some(m) = marking {
            for (i, el) in m.labels.iter().enumerate() {
                let text = (i + 1).to_string();
                match *el {
                    Elem::Floor(v) => floor_labels[v].push(text),
                    Elem::Edge(e) => edge_labels[e].push(text),
                    Elem::Source(s) | Elem::SourceEdge(s) => {
                        floor_labels[self.sources[s].floor].push(format!("{text}^"))
                    }
                }
            }
        }
        let mut out = String::from("digraph floor_diagram {\n  rankdir=BT;\n");
        for (v, &deg) in self.floors.iter().enumerate() {
            let fill = if deg == 2 { "white" } else { "lightgray" };
            let mut label = format!("deg={deg}");
            if !floor_labels[v].is_empty() {
                label.push_str(&format!("\\n[{}]", floor_labels[v].join(",")));
            }
            let _ = writeln!(
                out,
                "  f{v} [shape=ellipse, style=filled, fillcolor={fill}, label=\"{label}\"];"
            );
        }
        for (i, e) in self.edges.iter().enumerate() {
            let mut parts = Vec::new();
            if e.weight >= 2 {
                parts.push(e.weight.to_string());
            }
            if !edge_labels[i].is_empty() {
                parts.push(format!("[{}]", edge_labels[i].join(",")));
            }
            if parts.is_empty() {
                let _ = writeln!(out, "  f{} -> f{};", e.tail, e.head);
            } else {
                let _ = writeln!(out, "  f{} -> f{} [label=\"{}\"];", e.tail, e.head, parts.join(" "));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Enumerate all floor diagrams of the given degree and genus, up to isomorphism,
/// with arbitrary source weights.
pub fn enumerate_diagrams(degree: i64, genus: i64) -> Vec<FloorDiagram> {
    enumerate_diagrams_with_sources(degree, genus, None)
}

/// Enumerate floor diagrams up to isomorphism whose multiset of source weights is
/// `pool` (dense counts `[c_1, c_2, …]`), or arbitrary when `pool` is `None`.
pub fn enumerate_diagrams_with_sources(
    degree: i64,
    genus: i64,
    pool: Option<&[u64]>,
) -> Vec<FloorDiagram> {
    if degree < 1 || genus < 0 {
        return Vec::new();
    }
    if let Some(p) = pool {
        let total: u64 = p.iter().enumerate().map(|(i, c)| (i as u64 + 1) * c).sum();
        if total != 2 * degree as u64 {
            return Vec::new();
        }
    }
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    let mut out = Vec::new();
    for f2 in 0..=(degree / 2) as usize {
        let f1 = degree as usize - 2 * f2;
        let f = f1 + f2;
        let internal = f as i64 - 1 + genus;
        if internal < 0 {
            continue;
        }
        let floors: Vec<u8> = (0..f).map(|v| if v < f2 { 2 } else { 1 }).collect();
        let pairs: Vec<(usize, usize)> =
            (0..f2).flat_map(|i| ((i + 1)..f).map(move |j| (i, j))).collect();
        if pairs.is_empty() && internal > 0 {
            continue;
        }
        let mut mult = vec![0usize; pairs.len()];
        compositions(internal as usize, 0, &mut mult, &mut |mult| {
            if !skeleton_connected(f, &pairs, mult) {
                return;
            }
            assign_weights(&floors, &pairs, mult, pool, &mut |diagram| {
                let key = diagram.canonical_key();
                if seen.insert(key.clone(), ()).is_none() {
                    out.push(FloorDiagram::from_key(&key));
                }
            });
        });
    }
    out.sort_by_key(|d| d.canonical_key());
    out
}

fn compositions(total: usize, idx: usize, mult: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if mult.is_empty() {
        if total == 0 {
            visit(mult);
        }
        return;
    }
    if idx + 1 == mult.len() {
        mult[idx] = total;
        visit(mult);
        mult[idx] = 0;
        return;
    }
    for x in 0..=total {
        mult[idx] = x;
        compositions(total - x, idx + 1, mult, visit);
    }
    mult[idx] = 0;
}

fn skeleton_connected(f: usize, pairs: &[(usize, usize)], mult: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..f).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if mult[k] > 0 {
            let a = find(&mut parent, i);
            let b = find(&mut parent, j);
            parent[a] = b;
        }
    }
    let r = find(&mut parent, 0);
    (0..f).all(|v| find(&mut parent, v) == r)
}

/// Assign weights to the skeleton edges, processing heads from the last floor down so
/// that the outgoing weight of every floor is known when its incoming edges are chosen.
fn assign_weights(
    floors: &[u8],
    pairs: &[(usize, usize)],
    mult: &[usize],
    pool: Option<&[u64]>,
    visit: &mut dyn FnMut(FloorDiagram),
) {
    let f = floors.len();
    // groups of parallel edges, ordered by decreasing head
    let mut groups: Vec<(usize, usize, usize)> = pairs
        .iter()
        .zip(mult)
        .filter(|(_, &m)| m > 0)
        .map(|(&(i, j), &m)| (i, j, m))
        .collect();
    groups.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut weights: Vec<Vec<u32>> = vec![Vec::new(); groups.len()];
    let mut out_w = vec![0i64; f];
    let mut in_w = vec![0i64; f];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        gi: usize,
        floors: &[u8],
        groups: &[(usize, usize, usize)],
        weights: &mut Vec<Vec<u32>>,
        out_w: &mut Vec<i64>,
        in_w: &mut Vec<i64>,
        pool: Option<&[u64]>,
        visit: &mut dyn FnMut(FloorDiagram),
    ) {
        if gi == groups.len() {
            let f = floors.len();
            let src: Vec<i64> =
                (0..f).map(|v| 2 * floors[v] as i64 + out_w[v] - in_w[v]).collect();
            if src.iter().any(|&x| x < 0) {
                return;
            }
            let mut edges = Vec::new();
            for (g, &(i, j, _)) in groups.iter().enumerate() {
                for &w in &weights[g] {
                    edges.push(Edge { tail: i, head: j, weight: w });
                }
            }
            distribute_sources(&src, pool, &mut |sources| {
                let mut e = edges.clone();
                e.sort();
                let mut s = sources.to_vec();
                s.sort();
                visit(FloorDiagram { floors: floors.to_vec(), edges: e, sources: s });
            });
            return;
        }
        let (i, j, m) = groups[gi];
        // all groups with head j that come later still need at least weight 1 each
        let later_min: i64 =
            groups[gi + 1..].iter().filter(|g| g.1 == j).map(|g| g.2 as i64).sum();
        let cap = 2 * floors[j] as i64 + out_w[j] - in_w[j] - later_min;
        if cap < m as i64 {
            return;
        }
        // non-increasing sequence of m weights with sum <= cap
        let mut seq = Vec::with_capacity(m);
        fn seqs(
            m: usize,
            max: i64,
            budget: i64,
            seq: &mut Vec<u32>,
            visit: &mut dyn FnMut(&[u32]),
        ) {
            if seq.len() == m {
                visit(seq);
                return;
            }
            let remaining = (m - seq.len() - 1) as i64;
            let hi = max.min(budget - remaining);
            for w in 1..=hi {
                seq.push(w as u32);
                seqs(m, w, budget - w, seq, visit);
                seq.pop();
            }
        }
        let mut choices: Vec<Vec<u32>> = Vec::new();
        seqs(m, cap, cap, &mut seq, &mut |s| choices.push(s.to_vec()));
        for c in choices {
            let total: i64 = c.iter().map(|&w| w as i64).sum();
            in_w[j] += total;
            out_w[i] += total;
            weights[gi] = c;
            rec(gi + 1, floors, groups, weights, out_w, in_w, pool, visit);
            in_w[j] -= total;
            out_w[i] -= total;
        }
    }
    rec(0, floors, &groups, &mut weights, &mut out_w, &mut in_w, pool, visit);
}

/// Split the per-floor source budgets into multisets of source weights, drawn from
/// `pool` when given.
fn distribute_sources(src: &[i64], pool: Option<&[u64]>, visit: &mut dyn FnMut(&[Source])) {
    let mut remaining: Vec<u64> = pool.map(|p| p.to_vec()).unwrap_or_default();
    let mut current: Vec<Source> = Vec::new();
    fn rec(
        v: usize,
        left: i64,
        max_w: i64,
        src: &[i64],
        pool: bool,
        remaining: &mut Vec<u64>,
        current: &mut Vec<Source>,
        visit: &mut dyn FnMut(&[Source]),
    ) {
        if v == src.len() {
            if !pool || remaining.iter().all(|&c| c == 0) {
                visit(current);
            }
            return;
        }
        if left == 0 {
            let next_left = if v + 1 < src.len() { src[v + 1] } else { 0 };
            rec(v + 1, next_left, i64::MAX, src, pool, remaining, current, visit);
            return;
        }
        let hi = left.min(max_w);
        for w in (1..=hi).rev() {
            if pool {
                let idx = w as usize - 1;
                if idx >= remaining.len() || remaining[idx] == 0 {
                    continue;
                }
                remaining[idx] -= 1;
            }
            current.push(Source { floor: v, weight: w as u32 });
            rec(v, left - w, w, src, pool, remaining, current, visit);
            current.pop();
            if pool {
                remaining[w as usize - 1] += 1;
            }
        }
    }
    let first = src.first().copied().unwrap_or(0);
    rec(0, first, i64::MAX, src, pool.is_some(), &mut remaining, &mut current, visit);
}

/// An element of a diagram that a label of `A_0` can be sent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    /// A floor (only degree-2 floors are ever marked).
    Floor(usize),
    /// An internal edge.
    Edge(usize),
    /// A source vertex (fixed tangency point).
    Source(usize),
    /// The edge of a source (moving tangency point).
    SourceEdge(usize),
}

/// What a source carries in a marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SourceRole {
    /// The source itself carries this `A_0` label.
    Fixed(u32),
    /// The source edge carries this `A_0` label.
    Moving(u32),
    /// The source is the image of an element of `A_i` (1-based `i`).
    Tag(u32),
}

/// A marking of a concrete diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking {
    /// `labels[l-1]` is the image of the label `l ∈ A_0`.
    pub labels: Vec<Elem>,
    /// Role of every source of the diagram.
    pub roles: Vec<SourceRole>,
    /// Number of tag sets `A_1..A_n`.
    pub n: usize,
}

/// Type of a marking: tangency profiles and the sizes `|A_i| = d·E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkingType {
    /// Fixed tangency points, by weight.
    pub alpha: MultiSeq,
    /// Moving tangency points, by weight.
    pub beta: MultiSeq,
    /// `|A_i|` for `i = 1..n`.
    pub tags: Vec<u64>,
}

impl MarkingType {
    /// Number of `A_0` labels for a diagram of degree `dd` and genus `g`.
    pub fn zeta(&self, dd: i64, g: i64) -> i64 {
        dd - 1 + g + self.alpha.size() as i64 + self.beta.size() as i64
    }

    /// Multiset of source weights a diagram of this type must have.
    pub fn source_pool(&self) -> Vec<u64> {
        let len = self.alpha.max_index().max(self.beta.max_index()).max(1);
        let mut pool: Vec<u64> =
            (1..=len).map(|w| self.alpha.get(w) + self.beta.get(w)).collect();
        pool[0] += self.tags.iter().sum::<u64>();
        pool
    }

    /// The label sets `1..|α|` split by weight, blocks in increasing weight order.
    pub fn standard_alpha_labels(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.alpha.max_index() + 1];
        let mut next = 1u32;
        for w in 1..=self.alpha.max_index() {
            for _ in 0..self.alpha.get(w) {
                out[w].push(next);
                next += 1;
            }
        }
        out
    }
}

impl Marking {
    /// Check the marking conditions on `diagram` for the given type.
    pub fn validate(&self, diagram: &FloorDiagram, ty: &MarkingType) -> Result<()> {
        let g = diagram.genus();
        let zeta = ty.zeta(diagram.degree(), g);
        if self.labels.len() as i64 != zeta || self.roles.len() != diagram.sources.len() {
            return Err(Error::Domain("marking has the wrong number of labels".into()));
        }
        let mut label_of: HashMap<Elem, u32> = HashMap::new();
        for (i, &el) in self.labels.iter().enumerate() {
            if label_of.insert(el, i as u32 + 1).is_some() {
                return Err(Error::Domain("marking is not injective".into()));
            }
            if let Elem::Floor(v) = el {
                if diagram.floors[v] != 2 {
                    return Err(Error::Domain("degree-1 floors are never marked".into()));
                }
            }
        }
        let mut alpha = vec![0u64; 0];
        let mut beta = vec![0u64; 0];
        let mut tags = vec![0u64; self.n];
        let mut tag_floor: HashMap<(u32, usize), ()> = HashMap::new();
        for (k, role) in self.roles.iter().enumerate() {
            let s = diagram.sources[k];
            let w = s.weight as usize;
            match *role {
                SourceRole::Fixed(l) => {
                    if label_of.get(&Elem::Source(k)) != Some(&l) || label_of.contains_key(&Elem::SourceEdge(k)) {
                        return Err(Error::Domain("inconsistent fixed source".into()));
                    }
                    if alpha.len() < w {
                        alpha.resize(w, 0);
                    }
                    alpha[w - 1] += 1;
                }
                SourceRole::Moving(l) => {
                    if label_of.get(&Elem::SourceEdge(k)) != Some(&l) || label_of.contains_key(&Elem::Source(k)) {
                        return Err(Error::Domain("inconsistent moving source".into()));
                    }
                    if beta.len() < w {
                        beta.resize(w, 0);
                    }
                    beta[w - 1] += 1;
                }
                SourceRole::Tag(i) => {
                    if w != 1 || i == 0 || i as usize > self.n {
                        return Err(Error::Domain("tags sit on weight-1 sources".into()));
                    }
                    if tag_floor.insert((i, s.floor), ()).is_some() {
                        return Err(Error::Domain("a floor meets a tag set twice".into()));
                    }
                    tags[i as usize - 1] += 1;
                }
            }
        }
        if MultiSeq::from_dense(&alpha) != ty.alpha
            || MultiSeq::from_dense(&beta) != ty.beta
            || tags != ty.tags
        {
            return Err(Error::Domain("marking has the wrong type".into()));
        }
        // fixed sources carry exactly 1..|α|, sorted by weight
        let mut fixed: Vec<(u32, u32)> = self
            .roles
            .iter()
            .enumerate()
            .filter_map(|(k, r)| match r {
                SourceRole::Fixed(l) => Some((*l, diagram.sources[k].weight)),
                _ => None,
            })
            .collect();
        fixed.sort();
        for (i, &(l, _)) in fixed.iter().enumerate() {
            if l != i as u32 + 1 {
                return Err(Error::Domain("fixed sources carry the first labels".into()));
            }
        }
        // increasing along the orientation
        let label = |el: Elem| label_of.get(&el).copied();
        for (ei, e) in diagram.edges.iter().enumerate() {
            let le = label(Elem::Edge(ei)).ok_or_else(|| Error::Domain("unmarked edge".into()))?;
            if let Some(lt) = label(Elem::Floor(e.tail)) {
                if lt >= le {
                    return Err(Error::Domain("marking is not increasing".into()));
                }
            }
            if let Some(lh) = label(Elem::Floor(e.head)) {
                if le >= lh {
                    return Err(Error::Domain("marking is not increasing".into()));
                }
            }
        }
        for (k, s) in diagram.sources.iter().enumerate() {
            let low = label(Elem::SourceEdge(k)).or_else(|| label(Elem::Source(k)));
            if let (Some(l), Some(lh)) = (low, label(Elem::Floor(s.floor))) {
                if l >= lh {
                    return Err(Error::Domain("marking is not increasing".into()));
                }
            }
        }
        for v in 0..diagram.floors.len() {
            if diagram.floors[v] == 2 && label(Elem::Floor(v)).is_none() {
                return Err(Error::Domain("degree-2 floors are marked".into()));
            }
        }
        Ok(())
    }

    /// Tag of every source (`None` for sources carrying an `A_0` label).
    pub fn source_tag(&self, k: usize) -> Option<u32> {
        match self.roles[k] {
            SourceRole::Tag(i) => Some(i),
            _ => None,
        }
    }
}

/// A canonical byte string for the equivalence class of a marked diagram.
///
/// Floors are renumbered in order of first appearance while scanning the labels
/// `1..ζ` (the labelled elements reach every floor of a connected diagram with at
/// least two floors), then the whole structure, including tag sets, is serialized.
pub fn canonical_class(diagram: &FloorDiagram, marking: &Marking) -> Vec<u8> {
    let f = diagram.floors.len();
    let mut order: Vec<Option<usize>> = vec![None; f];
    let mut next = 0usize;
    let mut touch = |v: usize, order: &mut Vec<Option<usize>>| {
        if order[v].is_none() {
            order[v] = Some(next);
            next += 1;
        }
    };
    for el in &marking.labels {
        match *el {
            Elem::Floor(v) => touch(v, &mut order),
            Elem::Edge(e) => {
                touch(diagram.edges[e].tail, &mut order);
                touch(diagram.edges[e].head, &mut order);
            }
            Elem::Source(s) | Elem::SourceEdge(s) => touch(diagram.sources[s].floor, &mut order),
        }
    }
    // Any floor not reached (only possible for a one-floor diagram) is numbered last.
    for v in 0..f {
        touch(v, &mut order);
    }
    let perm: Vec<usize> = order.into_iter().map(|x| x.expect("numbered")).collect();
    let mut out = String::new();
    let mut degs = vec![0u8; f];
    for v in 0..f {
        degs[perm[v]] = diagram.floors[v];
    }
    let mut label_of: HashMap<Elem, usize> = HashMap::new();
    for (i, el) in marking.labels.iter().enumerate() {
        label_of.insert(*el, i + 1);
    }
    let mut floor_labels = vec![0usize; f];
    for v in 0..f {
        floor_labels[perm[v]] = label_of.get(&Elem::Floor(v)).copied().unwrap_or(0);
    }
    let _ = write!(out, "F{:?}L{:?}", degs, floor_labels);
    let mut edges: Vec<(usize, usize, u32, usize)> = diagram
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| (perm[e.tail], perm[e.head], e.weight, label_of[&Elem::Edge(i)]))
        .collect();
    edges.sort();
    let _ = write!(out, "E{:?}", edges);
    let mut sources: Vec<(usize, u32, u8, usize)> = diagram
        .sources
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let (kind, val) = match marking.roles[k] {
                SourceRole::Fixed(l) => (0u8, l as usize),
                SourceRole::Moving(l) => (1u8, l as usize),
                SourceRole::Tag(i) => (2u8, i as usize),
            };
            (perm[s.floor], s.weight, kind, val)
        })
        .collect();
    sources.sort();
    let _ = write!(out, "S{:?}", sources);
    out.into_bytes()
}

/// One class of the source twin groups: the sources of a given weight at a given floor.
#[derive(Debug, Clone)]
struct SourceGroup {
    floor: usize,
    weight: u32,
    /// Indices into `diagram.sources`.
    members: Vec<usize>,
}

fn source_groups(diagram: &FloorDiagram) -> Vec<SourceGroup> {
    let mut groups: Vec<SourceGroup> = Vec::new();
    for (k, s) in diagram.sources.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if g.floor == s.floor && g.weight == s.weight => g.members.push(k),
            _ => groups.push(SourceGroup { floor: s.floor, weight: s.weight, members: vec![k] }),
        }
    }
    groups
}

/// How the sources of each twin group are split into fixed / moving / tagged roles.
#[derive(Debug, Clone)]
struct RoleSplit {
    fixed: Vec<u64>,
    moving: Vec<u64>,
    /// Number of tagged sources per floor.
    tag_slots: Vec<u64>,
}

fn for_each_role_split(
    diagram: &FloorDiagram,
    groups: &[SourceGroup],
    ty: &MarkingType,
    visit: &mut dyn FnMut(&RoleSplit) -> Result<()>,
) -> Result<()> {
    let total_tags: u64 = ty.tags.iter().sum();
    let max_tag = ty.tags.iter().copied().max().unwrap_or(0);
    let mut split = RoleSplit {
        fixed: vec![0; groups.len()],
        moving: vec![0; groups.len()],
        tag_slots: vec![0; diagram.floors.len()],
    };
    let mut alpha_left: Vec<u64> = (1..=64).map(|w| ty.alpha.get(w)).collect();
    let mut beta_left: Vec<u64> = (1..=64).map(|w| ty.beta.get(w)).collect();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        gi: usize,
        groups: &[SourceGroup],
        split: &mut RoleSplit,
        alpha_left: &mut Vec<u64>,
        beta_left: &mut Vec<u64>,
        tags_left: u64,
        n_tags: usize,
        max_tag: u64,
        visit: &mut dyn FnMut(&RoleSplit) -> Result<()>,
    ) -> Result<()> {
        if gi == groups.len() {
            if tags_left == 0
                && alpha_left.iter().all(|&x| x == 0)
                && beta_left.iter().all(|&x| x == 0)
            {
                return visit(split);
            }
            return Ok(());
        }
        let g = &groups[gi];
        let w = g.weight as usize;
        if w > 64 {
            return Ok(());
        }
        let c = g.members.len() as u64;
        for a in 0..=c.min(alpha_left[w - 1]) {
            for b in 0..=(c - a).min(beta_left[w - 1]) {
                let t = c - a - b;
                if t > 0 && (w != 1 || t > n_tags as u64 || t > tags_left) {
                    continue;
                }
                let _ = max_tag;
                alpha_left[w - 1] -= a;
                beta_left[w - 1] -= b;
                split.fixed[gi] = a;
                split.moving[gi] = b;
                split.tag_slots[g.floor] += t;
                rec(gi + 1, groups, split, alpha_left, beta_left, tags_left - t, n_tags, max_tag, visit)?;
                split.tag_slots[g.floor] -= t;
                alpha_left[w - 1] += a;
                beta_left[w - 1] += b;
            }
        }
        Ok(())
    }
    let n_tags = ty.tags.iter().filter(|&&x| x > 0).count();
    rec(0, groups, &mut split, &mut alpha_left, &mut beta_left, total_tags, n_tags, max_tag, visit)
}

/// Number of ways to choose, for each tag `(size, uses)`, a set of `size` distinct
/// floors, each chosen floor consuming `uses` of its slots, so that every slot of
/// every floor is consumed.
fn count_tag_assignments(slots: &[u64], tags: &[(u64, u64)]) -> Result<Int> {
    let mut memo: HashMap<(usize, Vec<u64>), Int> = HashMap::new();
    fn rec(
        i: usize,
        slots: &mut Vec<u64>,
        tags: &[(u64, u64)],
        memo: &mut HashMap<(usize, Vec<u64>), Int>,
    ) -> Result<Int> {
        if i == tags.len() {
            return Ok(if slots.iter().all(|&s| s == 0) { 1 } else { 0 });
        }
        let key = (i, slots.clone());
        if let Some(&v) = memo.get(&key) {
            return Ok(v);
        }
        let (k, uses) = tags[i];
        let k = k as usize;
        let avail: Vec<usize> = (0..slots.len()).filter(|&v| slots[v] >= uses).collect();
        let mut total: Int = 0;
        if k <= avail.len() {
            let mut chosen = Vec::with_capacity(k);
            fn choose(
                start: usize,
                k: usize,
                avail: &[usize],
                chosen: &mut Vec<usize>,
                visit: &mut dyn FnMut(&[usize]) -> Result<()>,
            ) -> Result<()> {
                if chosen.len() == k {
                    return visit(chosen);
                }
                for j in start..avail.len() {
                    if avail.len() - j < k - chosen.len() {
                        break;
                    }
                    chosen.push(avail[j]);
                    choose(j + 1, k, avail, chosen, visit)?;
                    chosen.pop();
                }
                Ok(())
            }
            let mut subsets: Vec<Vec<usize>> = Vec::new();
            choose(0, k, &avail, &mut chosen, &mut |c| {
                subsets.push(c.to_vec());
                Ok(())
            })?;
            for c in subsets {
                for &v in &c {
                    slots[v] -= uses;
                }
                let r = rec(i + 1, slots, tags, memo);
                for &v in &c {
                    slots[v] += uses;
                }
                total = num::add(total, r?)?;
            }
        }
        memo.insert(key, total);
        Ok(total)
    }
    let mut s = slots.to_vec();
    rec(0, &mut s, tags, &mut memo)
}

/// A class of indistinguishable elements of the marked-element poset.
#[derive(Debug, Clone)]
struct PosetClass {
    size: usize,
    preds: Vec<usize>,
    elems: Vec<Elem>,
}

/// Build the poset of `A_0`-marked non-fixed elements (moving source edges, degree-2
/// floors, internal edges), grouped into classes of twins.
fn build_poset(diagram: &FloorDiagram, groups: &[SourceGroup], moving: &[u64]) -> Vec<PosetClass> {
    let mut classes: Vec<PosetClass> = Vec::new();
    let f = diagram.floors.len();
    let mut floor_class: Vec<Option<usize>> = vec![None; f];
    for v in 0..f {
        if diagram.floors[v] == 2 {
            floor_class[v] = Some(classes.len());
            classes.push(PosetClass { size: 1, preds: Vec::new(), elems: vec![Elem::Floor(v)] });
        }
    }
    for (gi, g) in groups.iter().enumerate() {
        let b = moving[gi] as usize;
        if b == 0 {
            continue;
        }
        // moving sources of a group: its first `fixed` members are fixed, then `b` moving
        let idx = classes.len();
        classes.push(PosetClass { size: b, preds: Vec::new(), elems: Vec::new() });
        if let Some(fc) = floor_class[g.floor] {
            classes[fc].preds.push(idx);
        }
    }
    let mut e = 0;
    while e < diagram.edges.len() {
        let mut end = e + 1;
        while end < diagram.edges.len() && diagram.edges[end] == diagram.edges[e] {
            end += 1;
        }
        let edge = diagram.edges[e];
        let idx = classes.len();
        let preds = floor_class[edge.tail].into_iter().collect();
        classes.push(PosetClass {
            size: end - e,
            preds,
            elems: (e..end).map(Elem::Edge).collect(),
        });
        if let Some(hc) = floor_class[edge.head] {
            classes[hc].preds.push(idx);
        }
        e = end;
    }
    classes
}

/// Number of linear extensions of the class poset, twins being indistinguishable.
fn count_linear_extensions(classes: &[PosetClass]) -> Result<Int> {
    let n = classes.len();
    if n == 0 {
        return Ok(1);
    }
    // isolated classes are factored out combinatorially
    let mut has_succ = vec![false; n];
    for c in classes {
        for &p in &c.preds {
            has_succ[p] = true;
        }
    }
    let isolated: Vec<usize> =
        (0..n).filter(|&i| classes[i].preds.is_empty() && !has_succ[i]).collect();
    let core: Vec<usize> = (0..n).filter(|i| !isolated.contains(i)).collect();
    let mut remap = vec![usize::MAX; n];
    for (k, &i) in core.iter().enumerate() {
        remap[i] = k;
    }
    let sizes: Vec<usize> = core.iter().map(|&i| classes[i].size).collect();
    let preds: Vec<Vec<usize>> =
        core.iter().map(|&i| classes[i].preds.iter().map(|&p| remap[p]).collect()).collect();
    let mut radix = Vec::with_capacity(core.len());
    let mut r: u128 = 1;
    for &s in &sizes {
        radix.push(r);
        r = r.checked_mul(s as u128 + 1).ok_or(Error::Overflow("poset state"))?;
    }
    let mut memo: HashMap<u128, Int> = HashMap::new();
    fn rec(
        placed: &mut Vec<usize>,
        key: u128,
        sizes: &[usize],
        preds: &[Vec<usize>],
        radix: &[u128],
        remaining: usize,
        memo: &mut HashMap<u128, Int>,
    ) -> Result<Int> {
        if remaining == 0 {
            return Ok(1);
        }
        if let Some(&v) = memo.get(&key) {
            return Ok(v);
        }
        let mut total: Int = 0;
        for c in 0..sizes.len() {
            if placed[c] < sizes[c] && preds[c].iter().all(|&p| placed[p] == sizes[p]) {
                placed[c] += 1;
                let r = rec(placed, key + radix[c], sizes, preds, radix, remaining - 1, memo);
                placed[c] -= 1;
                total = num::add(total, r?)?;
            }
        }
        memo.insert(key, total);
        Ok(total)
    }
    let core_total: usize = sizes.iter().sum();
    let mut placed = vec![0usize; core.len()];
    let mut count = rec(&mut placed, 0, &sizes, &preds, &radix, core_total, &mut memo)?;
    // interleave the isolated classes
    let mut total = core_total as i64;
    for &i in &isolated {
        let s = classes[i].size as i64;
        count = num::mul(count, num::binom(total + s, s)?)?;
        total += s;
    }
    Ok(count)
}

/// Number of marking classes of `diagram` of type `ty` (each class counted once).
pub fn count_marking_classes(diagram: &FloorDiagram, ty: &MarkingType) -> Result<Int> {
    let groups = source_groups(diagram);
    let mut total: Int = 0;
    for_each_role_split(diagram, &groups, ty, &mut |split| {
        let mut ways: Int = 1;
        // fixed labels of weight w distributed among groups as sets
        let mut per_weight: HashMap<u32, Vec<i64>> = HashMap::new();
        for (gi, g) in groups.iter().enumerate() {
            if split.fixed[gi] > 0 {
                per_weight.entry(g.weight).or_default().push(split.fixed[gi] as i64);
            }
        }
        for (w, parts) in per_weight {
            ways = num::mul(ways, num::multinom(ty.alpha.get(w as usize) as i64, &parts)?)?;
        }
        let tags: Vec<(u64, u64)> = ty.tags.iter().filter(|&&t| t > 0).map(|&t| (t, 1)).collect();
        ways = num::mul(ways, count_tag_assignments(&split.tag_slots, &tags)?)?;
        if ways == 0 {
            return Ok(());
        }
        let poset = build_poset(diagram, &groups, &split.moving);
        ways = num::mul(ways, count_linear_extensions(&poset)?)?;
        total = num::add(total, ways)?;
        Ok(())
    })?;
    num::exact_div(total, diagram.floor_automorphisms() as Int)
}

/// Number of marking classes of `diagram` of type `ty` in which, for `i ≤ pairs`,
/// the tag sets `A_{2i-1}` and `A_{2i}` meet the same floors and, if
/// `odd_sources_tagged`, every source of odd weight is the image of a tag.
///
/// These are the marked diagrams fixed by the real structure exchanging the
/// blown-up points `2i-1` and `2i` when every other point is real.
pub fn count_symmetric_marking_classes(
    diagram: &FloorDiagram,
    ty: &MarkingType,
    pairs: usize,
    odd_sources_tagged: bool,
) -> Result<Int> {
    if 2 * pairs > ty.tags.len() {
        return Err(Error::Domain("more tag pairs than tag sets".into()));
    }
    if (0..pairs).any(|i| ty.tags[2 * i] != ty.tags[2 * i + 1]) {
        return Ok(0);
    }
    let mut tags: Vec<(u64, u64)> = (0..pairs).map(|i| (ty.tags[2 * i], 2)).collect();
    tags.extend(ty.tags[2 * pairs..].iter().map(|&t| (t, 1)));
    tags.retain(|&(t, _)| t > 0);
    let groups = source_groups(diagram);
    let mut total: Int = 0;
    for_each_role_split(diagram, &groups, ty, &mut |split| {
        if odd_sources_tagged
            && groups.iter().enumerate().any(|(gi, g)| g.weight % 2 == 1 && split.fixed[gi] + split.moving[gi] > 0)
        {
            return Ok(());
        }
        let mut ways = count_tag_assignments(&split.tag_slots, &tags)?;
        if ways == 0 {
            return Ok(());
        }
        let mut per_weight: HashMap<u32, Vec<i64>> = HashMap::new();
        for (gi, g) in groups.iter().enumerate() {
            if split.fixed[gi] > 0 {
                per_weight.entry(g.weight).or_default().push(split.fixed[gi] as i64);
            }
        }
        for (w, parts) in per_weight {
            ways = num::mul(ways, num::multinom(ty.alpha.get(w as usize) as i64, &parts)?)?;
        }
        let poset = build_poset(diagram, &groups, &split.moving);
        ways = num::mul(ways, count_linear_extensions(&poset)?)?;
        total = num::add(total, ways)?;
        Ok(())
    })?;
    num::exact_div(total, diagram.floor_automorphisms() as Int)
}

/// Visit every concrete marking of `diagram` of type `ty`, one per orbit of the twin
/// permutations (sources of equal weight at one floor, parallel edges of equal
/// weight). Each marking class is visited exactly `diagram.floor_automorphisms()`
/// times.
///
/// `alpha_labels[w]` is the set of `A_0` labels carried by fixed sources of weight `w`
/// (their union must be `1..|α|`).
pub fn for_each_marking(
    diagram: &FloorDiagram,
    ty: &MarkingType,
    alpha_labels: &[Vec<u32>],
    visit: &mut dyn FnMut(&Marking) -> Result<()>,
) -> Result<()> {
    let groups = source_groups(diagram);
    let alpha_total = ty.alpha.size() as usize;
    let zeta = ty.zeta(diagram.degree(), diagram.genus());
    if zeta < 0 {
        return Ok(());
    }
    let zeta = zeta as usize;
    let n = ty.tags.len();
    for_each_role_split(diagram, &groups, ty, &mut |split| {
        let poset = build_poset(diagram, &groups, &split.moving);
        let mut poset = poset;
        // attach concrete moving source edges to their classes
        {
            let mut ci = diagram.floors.iter().filter(|&&d| d == 2).count();
            for (gi, g) in groups.iter().enumerate() {
                let a = split.fixed[gi] as usize;
                let b = split.moving[gi] as usize;
                if b == 0 {
                    continue;
                }
                poset[ci].elems = g.members[a..a + b].iter().map(|&k| Elem::SourceEdge(k)).collect();
                ci += 1;
            }
        }
        let mut base = Marking {
            labels: vec![Elem::Floor(usize::MAX); zeta],
            roles: vec![SourceRole::Tag(0); diagram.sources.len()],
            n,
        };
        // distribute fixed labels
        let fixed_groups: Vec<usize> =
            (0..groups.len()).filter(|&gi| split.fixed[gi] > 0).collect();
        let mut remaining_alpha: Vec<Vec<u32>> = alpha_labels.to_vec();
        for_each_fixed_assignment(
            &groups,
            &fixed_groups,
            0,
            &split.fixed,
            &mut remaining_alpha,
            &mut base,
            &mut |base| {
                // tag sets
                let tag_floors: Vec<usize> = (0..diagram.floors.len()).collect();
                let mut slots = split.tag_slots.clone();
                let mut choice: Vec<Vec<usize>> = vec![Vec::new(); n];
                for_each_tag_choice(0, &ty.tags, &tag_floors, &mut slots, &mut choice, &mut |choice| {
                    let mut m = base.clone();
                    // place tags on the weight-1 tagged sources of each floor
                    let mut per_floor: Vec<Vec<u32>> = vec![Vec::new(); diagram.floors.len()];
                    for (i, floors) in choice.iter().enumerate() {
                        for &v in floors {
                            per_floor[v].push(i as u32 + 1);
                        }
                    }
                    for (gi, g) in groups.iter().enumerate() {
                        if g.weight != 1 {
                            continue;
                        }
                        let a = split.fixed[gi] as usize;
                        let b = split.moving[gi] as usize;
                        let tagged = &g.members[a + b..];
                        let tags = &per_floor[g.floor];
                        debug_assert_eq!(tagged.len(), tags.len());
                        for (k, &t) in tagged.iter().zip(tags) {
                            m.roles[*k] = SourceRole::Tag(t);
                        }
                    }
                    // linear extensions fill labels alpha_total+1..=zeta
                    let mut placed = vec![0usize; poset.len()];
                    for_each_linear_extension(&poset, &mut placed, alpha_total, zeta, &mut m, diagram, visit)
                })
            },
        )
    })
}

#[allow(clippy::too_many_arguments)]
fn for_each_fixed_assignment(
    groups: &[SourceGroup],
    fixed_groups: &[usize],
    k: usize,
    fixed: &[u64],
    remaining: &mut Vec<Vec<u32>>,
    base: &mut Marking,
    visit: &mut dyn FnMut(&Marking) -> Result<()>,
) -> Result<()> {
    if k == fixed_groups.len() {
        return visit(base);
    }
    let gi = fixed_groups[k];
    let g = &groups[gi];
    let w = g.weight as usize;
    let a = fixed[gi] as usize;
    let pool = remaining.get(w).cloned().unwrap_or_default();
    if pool.len() < a {
        return Ok(());
    }
    // choose an a-subset of pool
    let mut idx: Vec<usize> = (0..a).collect();
    loop {
        let chosen: Vec<u32> = idx.iter().map(|&i| pool[i]).collect();
        let rest: Vec<u32> =
            pool.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, &l)| l).collect();
        remaining[w] = rest;
        for (j, &l) in chosen.iter().enumerate() {
            let src = g.members[j];
            base.roles[src] = SourceRole::Fixed(l);
            base.labels[l as usize - 1] = Elem::Source(src);
        }
        for_each_fixed_assignment(groups, fixed_groups, k + 1, fixed, remaining, base, visit)?;
        remaining[w] = pool.clone();
        // next combination
        let mut i = a;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] < pool.len() - a + i {
                idx[i] += 1;
                for j in i + 1..a {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        if a == 0 {
            return Ok(());
        }
    }
}

fn for_each_tag_choice(
    i: usize,
    tags: &[u64],
    floors: &[usize],
    slots: &mut Vec<u64>,
    choice: &mut Vec<Vec<usize>>,
    visit: &mut dyn FnMut(&[Vec<usize>]) -> Result<()>,
) -> Result<()> {
    if i == tags.len() {
        if slots.iter().all(|&s| s == 0) {
            return visit(choice);
        }
        return Ok(());
    }
    let k = tags[i] as usize;
    let avail: Vec<usize> = floors.iter().copied().filter(|&v| slots[v] > 0).collect();
    if avail.len() < k {
        return Ok(());
    }
    // remaining demand must fit
    let demand: u64 = tags[i..].iter().sum();
    let supply: u64 = slots.iter().sum();
    if demand != supply {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let chosen: Vec<usize> = idx.iter().map(|&j| avail[j]).collect();
        for &v in &chosen {
            slots[v] -= 1;
        }
        choice[i] = chosen.clone();
        let r = for_each_tag_choice(i + 1, tags, floors, slots, choice, visit);
        for &v in &chosen {
            slots[v] += 1;
        }
        r?;
        let mut j = k;
        loop {
            if j == 0 {
                choice[i].clear();
                return Ok(());
            }
            j -= 1;
            if idx[j] < avail.len() - k + j {
                idx[j] += 1;
                for t in j + 1..k {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            choice[i].clear();
            return Ok(());
        }
    }
}

fn for_each_linear_extension(
    poset: &[PosetClass],
    placed: &mut Vec<usize>,
    last_label: usize,
    zeta: usize,
    m: &mut Marking,
    diagram: &FloorDiagram,
    visit: &mut dyn FnMut(&Marking) -> Result<()>,
) -> Result<()> {
    if last_label == zeta {
        return visit(m);
    }
    let label = last_label + 1;
    for c in 0..poset.len() {
        if placed[c] < poset[c].size && poset[c].preds.iter().all(|&p| placed[p] == poset[p].size) {
            let el = poset[c].elems[placed[c]];
            m.labels[label - 1] = el;
            if let Elem::SourceEdge(k) = el {
                m.roles[k] = SourceRole::Moving(label as u32);
            }
            placed[c] += 1;
            let r = for_each_linear_extension(poset, placed, label, zeta, m, diagram, visit);
            placed[c] -= 1;
            r?;
        }
    }
    Ok(())
}

/// One representative per marking class of the diagrams of degree `dd`, genus `g` and
/// type `ty`, together with its underlying diagram.
pub fn enumerate_marked(dd: i64, g: i64, ty: &MarkingType) -> Result<Vec<(FloorDiagram, Marking)>> {
    if ty.zeta(dd, g) <= 0 || dd < 1 {
        return Ok(Vec::new());
    }
    let pool = ty.source_pool();
    let alpha_labels = ty.standard_alpha_labels();
    let mut out = Vec::new();
    for diagram in enumerate_diagrams_with_sources(dd, g, Some(&pool)) {
        let mut seen: HashMap<Vec<u8>, ()> = HashMap::new();
        for_each_marking(&diagram, ty, &alpha_labels, &mut |m| {
            let key = canonical_class(&diagram, m);
            if seen.insert(key, ()).is_none() {
                out.push((diagram.clone(), m.clone()));
            }
            Ok(())
        })?;
    }
    Ok(out)
}
