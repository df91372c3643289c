//! Decorated graphs indexing the limit curves of the degenerations of `X_7` and
//! `X_8`.
//!
//! A vertex is a curve in `X̃_8` (for `X_7`) or in `X̃_{8,1}` (for `X_8`) with a
//! genus and a tangency profile `β_v = β_{v,1}u_1 + β_{v,2}u_2` with the conic; an
//! edge is a line of the second component joining two points of order one.
//!
//! Graphs are produced up to isomorphism, each with the number `σ(Γ)` of vertex
//! bijections induced by its automorphisms. The same graphs are also available in
//! labelled form, which is used to cross-check the division by `σ(Γ)`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::homology::{format_class_literal, MultiSeq};
use crate::num::{self, Int};

/// Which absolute surface the graphs describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphSurface {
    /// `X_7`, vertices in `X̃_8`.
    X7,
    /// `X_8`, vertices in `X̃_{8,1}` (ninth point off the conic).
    X8,
}

impl GraphSurface {
    /// Number of exceptional classes of the absolute surface.
    pub fn target_points(self) -> usize {
        match self {
            GraphSurface::X7 => 7,
            GraphSurface::X8 => 8,
        }
    }

    /// Number of exceptional classes of the vertex surface.
    pub fn vertex_points(self) -> usize {
        match self {
            GraphSurface::X7 => 8,
            GraphSurface::X8 => 9,
        }
    }
}

/// Decoration of a vertex: the class `dd·D − Σ mu_i Ẽ_i`, the genus and the
/// tangency profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    /// Coefficient of `D`.
    pub dd: i64,
    /// Coefficients `mu_i = d_v·Ẽ_i` (8 or 9 entries).
    pub mu: Vec<i64>,
    /// Genus.
    pub genus: i64,
    /// Number of tangency points of order one.
    pub beta1: u64,
    /// Number of tangency points of order two.
    pub beta2: u64,
}

impl Vertex {
    /// The exceptional curve `Ẽ_i` (1-based), meeting the conic once.
    pub fn exceptional(surface: GraphSurface, i: usize) -> Self {
        let mut mu = vec![0; surface.vertex_points()];
        mu[i - 1] = -1;
        Vertex { dd: 0, mu, genus: 0, beta1: 1, beta2: 0 }
    }

    /// `β_v` as a sequence.
    pub fn beta(&self) -> MultiSeq {
        MultiSeq::from_dense(&[self.beta1, self.beta2])
    }

    /// `d_v·E` for the conic `E = 2D − Σ_{i≤8} Ẽ_i`.
    pub fn conic_degree(&self) -> i64 {
        2 * self.dd - self.mu.iter().take(8).sum::<i64>()
    }

    /// Coefficient of `Ẽ_9` (zero on `X̃_8`).
    pub fn mu9(&self) -> i64 {
        self.mu.get(8).copied().unwrap_or(0)
    }

    /// `|U_v|`: point conditions carried by the vertex, `d_v·D − 1 + g_v + |β_v|`,
    /// minus `d_v·Ẽ_9` on `X̃_{8,1}` where the ninth point is itself a condition.
    pub fn points(&self) -> i64 {
        self.dd - 1 + self.genus + (self.beta1 + self.beta2) as i64 - self.mu9()
    }

    /// Intersection product on the vertex surface.
    pub fn dot(&self, other: &Vertex) -> i64 {
        self.dd * other.dd - self.mu.iter().zip(&other.mu).map(|(a, b)| a * b).sum::<i64>()
    }

    /// Class literal `dd:mu_1,…`.
    pub fn class_literal(&self) -> String {
        format_class_literal(self.dd, &self.mu)
    }

    /// Short description used in term labels.
    pub fn label(&self) -> String {
        let mut s = self.class_literal();
        if self.genus > 0 {
            s.push_str(&format!(" g{}", self.genus));
        }
        s.push_str(&format!(" b{}", self.beta().literal()));
        s
    }
}

/// A target class of `X_7` or `X_8` and a genus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphTarget {
    /// Surface.
    pub surface: GraphSurface,
    /// Coefficient of `D`.
    pub dd: i64,
    /// Coefficients `μ_i` (7 or 8 entries).
    pub mu: Vec<i64>,
    /// Genus.
    pub genus: i64,
}

impl GraphTarget {
    /// Validate and build.
    pub fn new(surface: GraphSurface, dd: i64, mu: Vec<i64>, genus: i64) -> Result<Self> {
        if mu.len() != surface.target_points() {
            return Err(Error::Domain(format!(
                "classes of X_{} have {} exceptional coefficients, got {}",
                surface.target_points(),
                surface.target_points(),
                mu.len()
            )));
        }
        if dd < 1 {
            return Err(Error::Domain("d >= 1 is required".into()));
        }
        if genus < 0 {
            return Err(Error::Domain("the genus is non-negative".into()));
        }
        Ok(GraphTarget { surface, dd, mu, genus })
    }

    /// `c_1·d − 1 + g`: the number of point conditions.
    pub fn zeta(&self) -> i64 {
        3 * self.dd - self.mu.iter().sum::<i64>() - 1 + self.genus
    }

    /// Arithmetic genus `(d² − c_1·d)/2 + 1` of the class.
    pub fn arithmetic_genus(&self) -> i64 {
        let square = self.dd * self.dd - self.mu.iter().map(|m| m * m).sum::<i64>();
        let c1 = 3 * self.dd - self.mu.iter().sum::<i64>();
        (square - c1) / 2 + 1
    }

    /// Whether the class may contain irreducible curves of the requested genus;
    /// otherwise every invariant vanishes and no graph is enumerated.
    fn admits_curves(&self) -> bool {
        self.arithmetic_genus() >= self.genus
    }
}

/// A decorated graph `Γ` (up to isomorphism).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphShape {
    /// The integer `k` of the class-matching equation.
    pub k: i64,
    /// Vertex decorations.
    pub vertices: Vec<Vertex>,
    /// Symmetric edge multiplicities; the diagonal holds twice the loop count.
    pub lambda: Vec<Vec<u32>>,
    /// `σ(Γ)`: vertex bijections induced by automorphisms.
    pub sigma: u64,
}

impl GraphShape {
    /// `k°_Γ`, the number of edges.
    pub fn edge_count(&self) -> i64 {
        let m = self.vertices.len();
        let mut e = 0i64;
        for i in 0..m {
            e += self.lambda[i][i] as i64 / 2;
            for j in i + 1..m {
                e += self.lambda[i][j] as i64;
            }
        }
        e
    }

    /// `β_{Γ,1}`.
    pub fn beta1(&self) -> i64 {
        self.vertices.iter().map(|v| v.beta1 as i64).sum()
    }

    /// `β_{Γ,2}`.
    pub fn beta2(&self) -> i64 {
        self.vertices.iter().map(|v| v.beta2 as i64).sum()
    }

    /// `d_Γ·Ẽ_i` (1-based).
    pub fn class_mu(&self, i: usize) -> i64 {
        self.vertices.iter().map(|v| v.mu[i - 1]).sum()
    }

    /// `k°° = k − β_{Γ,2} − k°_Γ − d_Γ·Ẽ_7`.
    pub fn k_circ_circ(&self) -> i64 {
        self.k - self.beta2() - self.edge_count() - self.class_mu(7)
    }

    /// Number of partitions `P_Γ` of the point conditions with the prescribed
    /// sizes `|U_v|`, for a labelled representative.
    pub fn partitions(&self) -> Result<Int> {
        let sizes: Vec<i64> = self.vertices.iter().map(|v| v.points()).collect();
        let total: i64 = sizes.iter().sum();
        num::multinom(total, &sizes)
    }

    /// Edges at `v` counted with multiplicity (a loop counts twice).
    pub fn degree(&self, v: usize) -> u64 {
        self.lambda[v].iter().map(|&x| x as u64).sum()
    }

    /// One-line description.
    pub fn label(&self) -> String {
        let verts: Vec<String> = self.vertices.iter().map(|v| format!("[{}]", v.label())).collect();
        let mut edges = Vec::new();
        let m = self.vertices.len();
        for i in 0..m {
            for j in i..m {
                let l = if i == j { self.lambda[i][i] / 2 } else { self.lambda[i][j] };
                for _ in 0..l {
                    edges.push(format!("{}-{}", i, j));
                }
            }
        }
        let mut s = format!("k={} {}", self.k, verts.join(""));
        if !edges.is_empty() {
            s.push_str(&format!(" edges {}", edges.join(",")));
        }
        if self.sigma > 1 {
            s.push_str(&format!(" sigma={}", self.sigma));
        }
        s
    }
}

/// `C(β_{v,1}; {λ_{v,v'}})`, the ways to distribute the order-one tangency points
/// of `v` among its edges.
pub fn edge_multinomial(shape: &GraphShape, v: usize) -> Result<Int> {
    let parts: Vec<i64> = shape.lambda[v].iter().map(|&x| x as i64).collect();
    num::multinom(shape.vertices[v].beta1 as i64, &parts)
}

/// The part of `μ^ℂ(Γ, P_Γ)` not involving vertex invariants, multiplied by the
/// number of partitions and not yet divided by `σ(Γ)`:
/// `I^{β_Γ} C(β_{Γ,1} − 2k°, k°°) Π_{v<v'} λ_{v,v'}! Π_v λ_{v,v}!! C(β_{v,1}; λ_v) · #P_Γ`.
pub fn complex_weight(shape: &GraphShape) -> Result<Int> {
    let kcc = shape.k_circ_circ();
    let free = shape.beta1() - 2 * shape.edge_count();
    let mut acc = num::binom(free, kcc)?;
    if acc == 0 {
        return Ok(0);
    }
    acc = num::mul(acc, num::pow(2, shape.beta2() as u64)?)?;
    let m = shape.vertices.len();
    for i in 0..m {
        acc = num::mul(acc, num::double_factorial_even(shape.lambda[i][i] as i64)?)?;
        acc = num::mul(acc, edge_multinomial(shape, i)?)?;
        for j in i + 1..m {
            acc = num::mul(acc, num::factorial(shape.lambda[i][j] as u64)?)?;
        }
    }
    num::mul(acc, shape.partitions()?)
}

/// All graphs (up to isomorphism) of the class-matching equation for `target`.
pub fn enumerate_shapes(target: &GraphTarget) -> Result<Vec<GraphShape>> {
    let mut out = Vec::new();
    if !target.admits_curves() {
        return Ok(out);
    }
    for_each_vertex_list(target, &mut |k, vertices, edges| {
        let mut classes: BTreeMap<Vec<u32>, (Vec<Vec<u32>>, u64)> = BTreeMap::new();
        let groups = type_groups(vertices);
        for_each_lambda(vertices, edges, &mut |lambda| {
            if !connected(lambda) {
                return;
            }
            let key = canonical_lambda(lambda, &groups);
            classes.entry(key).or_insert_with(|| (lambda.to_vec(), 0)).1 += 1;
        });
        let labelled: u64 = groups.iter().map(|g| factorial_u64(g.len())).product();
        for (_, (lambda, count)) in classes {
            debug_assert_eq!(labelled % count, 0);
            out.push(GraphShape { k, vertices: vertices.to_vec(), lambda, sigma: labelled / count });
        }
        Ok(())
    })?;
    Ok(out)
}

/// All labelled graphs of the class-matching equation: every adjacency matrix on a
/// sorted vertex list, together with the number `Π n_t!` of decoration-preserving
/// relabellings of that list. The sum over labelled graphs of `f / Π n_t!` equals
/// the sum over graphs up to isomorphism of `f / σ(Γ)`. The returned shapes carry
/// `sigma = 1`.
pub fn enumerate_labelled_shapes(target: &GraphTarget) -> Result<Vec<(GraphShape, u64)>> {
    let mut out = Vec::new();
    if !target.admits_curves() {
        return Ok(out);
    }
    for_each_vertex_list(target, &mut |k, vertices, edges| {
        let groups = type_groups(vertices);
        let labelled: u64 = groups.iter().map(|g| factorial_u64(g.len())).product();
        for_each_lambda(vertices, edges, &mut |lambda| {
            if connected(lambda) {
                out.push((GraphShape { k, vertices: vertices.to_vec(), lambda: lambda.to_vec(), sigma: 1 }, labelled));
            }
        });
        Ok(())
    })?;
    Ok(out)
}

/// Vertex permutations preserving decorations and edges (brute force; for tests
/// and for the real involutions).
pub fn automorphisms(shape: &GraphShape) -> Vec<Vec<usize>> {
    let m = shape.vertices.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; m];
    let mut used = vec![false; m];
    fn rec(
        shape: &GraphShape,
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let m = shape.vertices.len();
        if i == m {
            out.push(perm.clone());
            return;
        }
        for j in 0..m {
            if used[j] || shape.vertices[j] != shape.vertices[i] {
                continue;
            }
            if (0..i).any(|p| shape.lambda[i][p] != shape.lambda[j][perm[p]]) || shape.lambda[i][i] != shape.lambda[j][j] {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            rec(shape, i + 1, perm, used, out);
            used[j] = false;
        }
    }
    rec(shape, 0, &mut perm, &mut used, &mut out);
    out
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Index groups of equal decorations in a sorted vertex list.
fn type_groups(vertices: &[Vertex]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if vertices[g[0]] == *v => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn connected(lambda: &[Vec<u32>]) -> bool {
    let m = lambda.len();
    if m == 0 {
        return false;
    }
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..m {
            if !seen[w] && lambda[v][w] > 0 {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

/// Lexicographically smallest upper triangle of `λ` over relabellings permuting
/// each group of equal decorations.
fn canonical_lambda(lambda: &[Vec<u32>], groups: &[Vec<usize>]) -> Vec<u32> {
    let m = lambda.len();
    let mut best: Option<Vec<u32>> = None;
    let mut perm: Vec<usize> = (0..m).collect();
    fn rec(
        g: usize,
        groups: &[Vec<usize>],
        lambda: &[Vec<u32>],
        perm: &mut Vec<usize>,
        best: &mut Option<Vec<u32>>,
    ) {
        if g == groups.len() {
            let m = lambda.len();
            let mut flat = Vec::with_capacity(m * (m + 1) / 2);
            for i in 0..m {
                for j in i..m {
                    flat.push(lambda[perm[i]][perm[j]]);
                }
            }
            if best.as_ref().map_or(true, |b| flat < *b) {
                *best = Some(flat);
            }
            return;
        }
        let members = groups[g].clone();
        permute(&members, 0, &mut members.clone(), &mut |arrangement| {
            for (slot, &src) in members.iter().zip(arrangement) {
                perm[*slot] = src;
            }
            rec(g + 1, groups, lambda, perm, best);
        });
    }
    rec(0, groups, lambda, &mut perm, &mut best);
    best.unwrap_or_default()
}

fn permute(items: &[usize], i: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if i == items.len() {
        f(cur);
        return;
    }
    for j in i..cur.len() {
        cur.swap(i, j);
        permute(items, i + 1, cur, f);
        cur.swap(i, j);
    }
}

/// Every symmetric multiplicity matrix with `edges` edges on `vertices` such that
/// no vertex has more edges than order-one tangency points.
fn for_each_lambda(vertices: &[Vertex], edges: i64, f: &mut dyn FnMut(&[Vec<u32>])) {
    let m = vertices.len();
    let mut slots = Vec::new();
    for i in 0..m {
        for j in i..m {
            slots.push((i, j));
        }
    }
    let mut cap: Vec<i64> = vertices.iter().map(|v| v.beta1 as i64).collect();
    let mut lambda = vec![vec![0u32; m]; m];
    fn rec(
        idx: usize,
        left: i64,
        slots: &[(usize, usize)],
        cap: &mut Vec<i64>,
        lambda: &mut Vec<Vec<u32>>,
        f: &mut dyn FnMut(&[Vec<u32>]),
    ) {
        if left == 0 {
            f(lambda);
            return;
        }
        if idx == slots.len() {
            return;
        }
        let (i, j) = slots[idx];
        let max = if i == j { cap[i] / 2 } else { cap[i].min(cap[j]) }.min(left);
        for c in 0..=max {
            if i == j {
                cap[i] -= 2 * c;
                lambda[i][i] = 2 * c as u32;
            } else {
                cap[i] -= c;
                cap[j] -= c;
                lambda[i][j] = c as u32;
                lambda[j][i] = c as u32;
            }
            rec(idx + 1, left - c, slots, cap, lambda, f);
            if i == j {
                cap[i] += 2 * c;
                lambda[i][i] = 0;
            } else {
                cap[i] += c;
                cap[j] += c;
                lambda[i][j] = 0;
                lambda[j][i] = 0;
            }
        }
    }
    rec(0, edges, &slots, &mut cap, &mut lambda, f);
}

/// Budgets shared by a search for the vertex list of one value of `k`.
struct Budget {
    surface: GraphSurface,
    /// `μ_i − k` for `i ≤ 6`: required `d_Γ·Ẽ_i`.
    need: [i64; 6],
    /// Upper bound on `Σ_v d_v·Ẽ_i` over vertices of positive degree, `i ≤ 6`.
    cap: [i64; 6],
    /// `μ_7`: bounds `Σ d_v·(Ẽ_7 + Ẽ_8) + β_{Γ,2} + k°`.
    mu7: i64,
    /// `μ_8` on `X_8`: required `d_Γ·Ẽ_9`.
    mu9: i64,
    zeta: i64,
    genus: i64,
}

/// Partial sums over the vertices of positive degree chosen so far.
#[derive(Clone, Default)]
struct Used {
    degree: i64,
    mu: [i64; 9],
    beta2: i64,
    genus: i64,
    points: i64,
    /// Number of positive-degree vertices.
    vertices: i64,
}

impl Used {
    /// Lower bound on `k° + β_{Γ,2} + Σ d_v·(Ẽ_7 + Ẽ_8)` once the class equation is
    /// closed: every exceptional leaf `Ẽ_i` added for an excess `d_Γ·Ẽ_i > μ_i − k`
    /// carries its own edge, and the positive-degree vertices need at least
    /// `#vertices − 1` more edges to be connected. It may not exceed `μ_7`.
    fn mu7_floor(&self, budget: &Budget) -> i64 {
        let excess: i64 = (0..6).map(|i| (self.mu[i] - budget.need[i]).max(0)).sum();
        excess + self.beta2 + self.mu[6] + self.mu[7] + (self.vertices - 1).max(0)
    }
}

/// Enumerate, for each `k`, the sorted vertex lists compatible with the class
/// equation, together with the forced edge count `k°`.
fn for_each_vertex_list(
    target: &GraphTarget,
    f: &mut dyn FnMut(i64, &[Vertex], i64) -> Result<()>,
) -> Result<()> {
    let zeta = target.zeta();
    if zeta < 0 {
        return Ok(());
    }
    for k in 0..=target.dd / 2 {
        let mu7 = target.mu[6];
        let mut need = [0i64; 6];
        let mut cap = [0i64; 6];
        // a negative cap only rules out vertices of positive degree: the graph made
        // of the exceptional leaves alone (when `dd = 2k`) carries no edge
        let mut feasible = mu7 >= 0;
        for i in 0..6 {
            need[i] = target.mu[i] - k;
            cap[i] = need[i] + mu7.max(0);
        }
        let mu9 = if target.surface == GraphSurface::X8 { target.mu[7] } else { 0 };
        feasible &= mu9 >= 0;
        if !feasible {
            continue;
        }
        let budget = Budget { surface: target.surface, need, cap, mu7, mu9, zeta, genus: target.genus };
        let total_degree = target.dd - 2 * k;
        let mut chosen: Vec<Vertex> = Vec::new();
        search(&budget, total_degree, &Used::default(), &mut chosen, k, f)?;
    }
    Ok(())
}

fn search(
    budget: &Budget,
    total_degree: i64,
    used: &Used,
    chosen: &mut Vec<Vertex>,
    k: i64,
    f: &mut dyn FnMut(i64, &[Vertex], i64) -> Result<()>,
) -> Result<()> {
    if used.degree == total_degree {
        return finish(budget, used, chosen, k, f);
    }
    let remaining = total_degree - used.degree;
    let upper = chosen.last().cloned();
    for v in vertex_candidates(budget, used, remaining) {
        if let Some(u) = &upper {
            if v > *u {
                continue;
            }
        }
        let mut next = used.clone();
        next.degree += v.dd;
        for i in 0..v.mu.len() {
            next.mu[i] += v.mu[i];
        }
        next.beta2 += v.beta2 as i64;
        next.genus += v.genus;
        next.points += v.points();
        next.vertices += 1;
        if next.mu7_floor(budget) > budget.mu7 {
            continue;
        }
        chosen.push(v);
        search(budget, total_degree, &next, chosen, k, f)?;
        chosen.pop();
    }
    Ok(())
}

/// Close a list of positive-degree vertices: add the exceptional leaves forced by
/// the class equation and check the remaining equations.
fn finish(
    budget: &Budget,
    used: &Used,
    chosen: &[Vertex],
    k: i64,
    f: &mut dyn FnMut(i64, &[Vertex], i64) -> Result<()>,
) -> Result<()> {
    if used.points != budget.zeta || used.mu[8] != budget.mu9 {
        return Ok(());
    }
    let mut vertices = chosen.to_vec();
    for i in 0..6 {
        let c = used.mu[i] - budget.need[i];
        if c < 0 {
            return Ok(());
        }
        for _ in 0..c {
            vertices.push(Vertex::exceptional(budget.surface, i + 1));
        }
    }
    let m = vertices.len() as i64;
    if m == 0 || (m > 1 && vertices.iter().any(|v| v.beta1 == 0)) {
        return Ok(());
    }
    let edges = budget.genus - used.genus + m - 1;
    if edges < 0 {
        return Ok(());
    }
    if edges + used.beta2 + used.mu[6] + used.mu[7] != budget.mu7 {
        return Ok(());
    }
    if k - used.beta2 - edges - used.mu[6] < 0 {
        return Ok(());
    }
    let beta1: i64 = vertices.iter().map(|v| v.beta1 as i64).sum();
    if beta1 < 2 * edges {
        return Ok(());
    }
    vertices.sort_by(|a, b| b.cmp(a));
    f(k, &vertices, edges)
}

/// Positive-degree vertex decorations fitting the remaining budget.
fn vertex_candidates(budget: &Budget, used: &Used, remaining: i64) -> Vec<Vertex> {
    let mut out = Vec::new();
    let points_left = budget.zeta - used.points;
    let genus_left = budget.genus - used.genus;
    let n = budget.surface.vertex_points();
    for a in 1..=remaining {
        let mut mu = vec![0i64; n];
        let b9_range: Vec<i64> = if n == 9 { (0..=a.min(budget.mu9 - used.mu[8])).collect() } else { vec![0] };
        for b9 in b9_range {
            if n == 9 {
                mu[8] = b9;
                // l(D − Ẽ_9) with l ≥ 3 is not a vertex class
                if a >= 3 && b9 == a {
                    continue;
                }
            }
            // |U_v| ≥ a − 1 + ⌈Iβ/2⌉ − b9 must fit, so Iβ ≤ 2(points_left − a + 1 + b9)
            let max_ibeta = 2 * (points_left - a + 1 + b9);
            if max_ibeta < 0 {
                continue;
            }
            let min_sum = 2 * a - max_ibeta;
            // room left under μ_7 once this vertex is added (see `Used::mu7_floor`)
            let slack = budget.mu7 - used.mu7_floor(budget) - (used.vertices > 0) as i64;
            if slack < 0 {
                continue;
            }
            fill_mu(budget, used, a, 0, &mut mu, 0, min_sum, slack, &mut |mu| {
                let ibeta = 2 * a - mu.iter().take(8).sum::<i64>();
                if ibeta < 0 {
                    return;
                }
                // a curve of positive degree has genus at most its arithmetic genus;
                // 2(D − Ẽ_9) is the class of the double covers of lines through the
                // ninth point
                let double_line = n == 9 && a == 2 && mu[8] == 2 && mu[..8].iter().all(|&b| b == 0);
                let arithmetic = if double_line {
                    0
                } else {
                    (a - 1) * (a - 2) / 2 - mu.iter().map(|b| b * (b - 1) / 2).sum::<i64>()
                };
                for g in 0..=genus_left.min(arithmetic) {
                    for beta2 in 0..=ibeta / 2 {
                        let v = Vertex {
                            dd: a,
                            mu: mu.to_vec(),
                            genus: g,
                            beta1: (ibeta - 2 * beta2) as u64,
                            beta2: beta2 as u64,
                        };
                        // a vertex without order-one points carries no edge, so it is
                        // the whole graph
                        if v.beta1 == 0 && (used.degree != 0 || a != remaining) {
                            continue;
                        }
                        let p = v.points();
                        if p < 0 || p > points_left {
                            continue;
                        }
                        if used.beta2 + beta2 + used.mu[6] + used.mu[7] + mu[6] + mu[7] > budget.mu7 {
                            continue;
                        }
                        out.push(v);
                    }
                }
            });
        }
    }
    out
}

/// Assign `mu_i ∈ [0, a]` for `i < 8` within the per-index budgets, with
/// `Σ mu ≥ min_sum`.
#[allow(clippy::too_many_arguments)]
fn fill_mu(
    budget: &Budget,
    used: &Used,
    a: i64,
    i: usize,
    mu: &mut Vec<i64>,
    sum: i64,
    min_sum: i64,
    slack: i64,
    f: &mut dyn FnMut(&[i64]),
) {
    if i == 8 {
        if sum >= min_sum {
            f(mu);
        }
        return;
    }
    let max_i = |j: usize, partial: i64| -> i64 {
        if j < 6 {
            a.min(budget.cap[j] - used.mu[j])
        } else {
            a.min(budget.mu7 - used.mu[6] - used.mu[7] - used.beta2 - partial)
        }
    };
    // optimistic bound on what the remaining indices can still add
    let mut rest = 0;
    for j in i + 1..8 {
        rest += max_i(j, 0).max(0);
    }
    let partial78 = if i == 7 { mu[6] } else { 0 };
    let hi = max_i(i, partial78);
    for b in 0..=hi.max(-1) {
        if b < 0 {
            break;
        }
        if sum + b + rest < min_sum {
            continue;
        }
        if sum + b > 2 * a {
            break;
        }
        // growth of the excess over `μ_i − k` (i ≤ 6) or of `d·(Ẽ_7 + Ẽ_8)`
        let cost = if i < 6 {
            (used.mu[i] + b - budget.need[i]).max(0) - (used.mu[i] - budget.need[i]).max(0)
        } else {
            b
        };
        if cost > slack {
            break;
        }
        mu[i] = b;
        fill_mu(budget, used, a, i + 1, mu, sum + b, min_sum, slack - cost, f);
    }
    mu[i] = 0;
}

/// Partitions of the point conditions for a real graph: `r` real points and `s`
/// pairs, with `(r_v, s_v)` prescribed on the vertices fixed by `τ` and `|U_v|`
/// on one representative of each exchanged pair.
pub fn real_partitions(r: i64, s: i64, fixed: &[(i64, i64)], pairs: &[i64]) -> Result<Int> {
    let rs: Vec<i64> = fixed.iter().map(|x| x.0).collect();
    let mut ss: Vec<i64> = fixed.iter().map(|x| x.1).collect();
    ss.extend_from_slice(pairs);
    if rs.iter().sum::<i64>() != r || ss.iter().sum::<i64>() != s {
        return Ok(0);
    }
    let mut acc = num::mul(num::multinom(r, &rs)?, num::multinom(s, &ss)?)?;
    for &p in pairs {
        acc = num::mul(acc, num::pow(2, p as u64)?)?;
    }
    Ok(acc)
}

/// Memo of vertex invariants keyed by decoration.
pub type VertexMemo = HashMap<Vertex, Int>;
