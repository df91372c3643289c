//! Property checks shared by the property tests and the acceptance report. Each
//! check returns a short summary on success and a description of the first
//! counterexample on failure.

use std::collections::HashMap;

use conic_floors::absolute::graphs::{self, GraphShape, GraphSurface, GraphTarget};
use conic_floors::absolute::x6::{w_x6, X6Structure};
use conic_floors::absolute::x7::{w_x7, X7Structure};
use conic_floors::absolute::x8::{gw_x8, w_x8, X8Structure};
use conic_floors::absolute::Engine;
use conic_floors::diagrams::{self, Elem, FloorDiagram, Marking, MarkingType};
use conic_floors::relative_complex::RelativeQuery;
use conic_floors::relative_real::{real_contribution, RealEngine, RealQuery, Variant, R_PRIME_CONVENTION};
use conic_floors::{Error, Int, MultiSeq};

pub type Check = Result<String, String>;

/// Largest `d·D` of the classes visited by the corollary checks.
pub const COROLLARY_DEGREE: i64 = 6;

/// `c_1·d` on `X_n`.
fn c1(dd: i64, mu: &[i64]) -> i64 {
    3 * dd - mu.iter().sum::<i64>()
}

/// Classes `dd·D − Σ μ_i E_i` with `1 ≤ dd ≤ max_degree`, invariant under the
/// exchanges `E_1↔E_2`, `E_3↔E_4`, `E_5↔E_6`, with `c_1·d ≥ 1`, listed once up to
/// permutations of the three pairs: `μ = (a,a,b,b,c,c, rest…)` with
/// `dd ≥ a ≥ b ≥ c ≥ 0` and every `rest_i ∈ [0, dd]`.
pub fn symmetric_classes(max_degree: i64, rest: usize) -> Vec<(i64, Vec<i64>)> {
    let mut out = Vec::new();
    for dd in 1..=max_degree {
        for a in 0..=dd {
            for b in 0..=a {
                for c in 0..=b {
                    let mut tails: Vec<Vec<i64>> = vec![Vec::new()];
                    for _ in 0..rest {
                        tails = tails
                            .into_iter()
                            .flat_map(|t| {
                                (0..=dd).map(move |x| {
                                    let mut t = t.clone();
                                    t.push(x);
                                    t
                                })
                            })
                            .collect();
                    }
                    for tail in tails {
                        let mut mu = vec![a, a, b, b, c, c];
                        mu.extend(tail);
                        if c1(dd, &mu) >= 1 {
                            out.push((dd, mu));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Vanishing lemma: for `n = 2κ` and `r ≥ |β^ℜ| + 2`, the `ε`-sided sums vanish.
pub fn vanishing_lemma(q: &RealQuery) -> Check {
    let r = q.r();
    if 2 * q.kappa != q.mu.len() || r < q.beta_re.size() as i64 + 2 {
        return Ok("not applicable".into());
    }
    let mut engine = RealEngine::new();
    for e in 0..2 {
        let v = engine.fw(q, Variant::Sided(e)).map_err(|err| err.to_string())?;
        if v != 0 {
            return Err(format!("FW_{e} = {v} for {}", q.key(Variant::Sided(e))));
        }
    }
    Ok(format!("FW_ε = 0 for {}", q.key(Variant::Plain)))
}

/// Corollaries on `X_6(4)`: `W_{L_1,L_1}(d,0) ≥ W_{L_2,L_2}(d,0) ≥ 0`, both divisible
/// by `4^{⌊d·D/2⌋−1}`, and `W_{L_ε,ℝX_6(4)}(d,s) = 0` when `r ≥ 2`.
pub fn x6_corollaries(max_degree: i64) -> Check {
    let mut engine = Engine::new();
    let mut checked = 0;
    for (dd, mu) in symmetric_classes(max_degree, 0) {
        let eval = |engine: &mut Engine, st, s| w_x6(engine, st, dd, &mu, s).map(|e| e.value).map_err(|e| e.to_string());
        let l1 = eval(&mut engine, X6Structure::SidedSided(0), 0)?;
        let l2 = eval(&mut engine, X6Structure::SidedSided(1), 0)?;
        let modulus: Int = 4i128.pow((dd / 2 - 1).max(0) as u32);
        if !(l1 >= l2 && l2 >= 0 && l1 % modulus == 0 && l2 % modulus == 0) {
            return Err(format!("X_6(4) at {dd}:{mu:?}: W_(L1,L1) = {l1}, W_(L2,L2) = {l2}, modulus {modulus}"));
        }
        let zeta = c1(dd, &mu) - 1;
        for s in 0..=(zeta / 2) as usize {
            let r = zeta - 2 * s as i64;
            if r < 2 {
                continue;
            }
            for e in 0..2 {
                let w = eval(&mut engine, X6Structure::SidedReal(e), s)?;
                if w != 0 {
                    return Err(format!("W_(L{},RX6(4)) ({dd}:{mu:?}, s = {s}) = {w} with r = {r}", e + 1));
                }
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} classes of X_6"))
}

/// Corollary on `X_7^±(4)`: the three invariants with real part of the whole surface
/// agree when `r ≥ 1`, and vanish as soon as `r ≥ 2`.
pub fn x7_corollary(max_degree: i64) -> Check {
    let mut engine = Engine::new();
    let mut checked = 0;
    for (dd, mu) in symmetric_classes(max_degree, 1) {
        let zeta = c1(dd, &mu) - 1;
        for s in 0..=(zeta / 2) as usize {
            let r = zeta - 2 * s as i64;
            // without real points the component `L` is the one containing the real
            // part of the curves, and the three invariants count different curves
            if r < 1 {
                continue;
            }
            let mut values = Vec::new();
            for st in [X7Structure::PlusTotal(0), X7Structure::PlusTotal(1), X7Structure::MinusTotal(1)] {
                values.push(w_x7(&mut engine, st, dd, &mu, s).map_err(|e| e.to_string())?.value);
            }
            if values.iter().any(|&v| v != values[0]) || (r >= 2 && values[0] != 0) {
                return Err(format!("X_7(4) at {dd}:{mu:?}, s = {s}: {values:?} (r = {r})"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (class, s) pairs of X_7"))
}

/// Corollaries on `X_8`: the eight Welschinger invariants are non-negative and
/// `W_{X_8(0)}(d,0) ≡ GW_{X_8}(d,0) mod 4`. Classes whose graphs need values of
/// `X̃_{8,1}` absent from the provider are skipped and counted.
pub fn x8_corollaries(max_degree: i64, mut engine: Engine) -> Check {
    let mut checked = 0;
    let mut skipped = 0;
    'classes: for (dd, mu) in symmetric_classes(max_degree, 2) {
        let mut values = Vec::new();
        for st in X8Structure::all() {
            match w_x8(&mut engine, st, dd, &mu, 0) {
                Ok(e) => values.push(e.value),
                Err(Error::MissingProviderKeys(_)) => {
                    skipped += 1;
                    continue 'classes;
                }
                Err(e) => return Err(format!("{} at {dd}:{mu:?}: {e}", st.name())),
            }
        }
        let gw = match gw_x8(&mut engine, dd, &mu, 0) {
            Ok(e) => e.value,
            Err(Error::MissingProviderKeys(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(format!("GW at {dd}:{mu:?}: {e}")),
        };
        if values.iter().any(|&v| v < 0) || (values[0] - gw).rem_euclid(4) != 0 {
            return Err(format!("X_8 at {dd}:{mu:?}: W = {values:?}, GW = {gw}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} classes of X_8 ({skipped} skipped for lack of provider values)"))
}

/// All concrete real markings of a small request, grouped by marking class: every
/// representative of a class must give the same real multiplicities, whatever
/// identification of the class with its image under `ρ` it induces.
pub fn psi_independence(q: &RealQuery) -> Check {
    let cq = RelativeQuery::new(q.dd, q.mu.clone(), 0, q.complex_alpha(), q.complex_beta());
    let ty = MarkingType {
        alpha: cq.alpha.clone(),
        beta: cq.beta.clone(),
        tags: q.mu.iter().map(|&m| m.max(0) as u64).collect(),
    };
    let pool = ty.source_pool();
    let alpha_labels = q.alpha_labels();
    let mut classes = 0;
    for diagram in diagrams::enumerate_diagrams_with_sources(q.dd, 0, Some(&pool)) {
        let mut seen: HashMap<Vec<u8>, _> = HashMap::new();
        let mut failure = None;
        diagrams::for_each_marking(&diagram, &ty, &alpha_labels, &mut |m| {
            let c = real_contribution(&diagram, m, q, R_PRIME_CONVENTION)?;
            let key = diagrams::canonical_class(&diagram, m);
            match seen.get(&key) {
                None => {
                    seen.insert(key, c);
                }
                Some(prev) if *prev != c => {
                    failure.get_or_insert_with(|| format!("{diagram:?} {m:?}: {prev:?} vs {c:?}"));
                }
                _ => {}
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
        if let Some(f) = failure {
            return Err(f);
        }
        classes += seen.len();
    }
    Ok(format!("{classes} marking classes"))
}

/// Apply a floor permutation (`perm[old] = new`) to a marked diagram.
pub fn relabel(diagram: &FloorDiagram, marking: &Marking, perm: &[usize]) -> (FloorDiagram, Marking) {
    let mut floors = vec![0u8; diagram.floors.len()];
    for (v, &p) in perm.iter().enumerate() {
        floors[p] = diagram.floors[v];
    }
    let edges: Vec<_> = diagram
        .edges
        .iter()
        .map(|e| diagrams::Edge { tail: perm[e.tail], head: perm[e.head], weight: e.weight })
        .collect();
    let sources: Vec<_> =
        diagram.sources.iter().map(|s| diagrams::Source { floor: perm[s.floor], weight: s.weight }).collect();
    let relabelled = FloorDiagram::new(floors, edges.clone(), sources.clone()).expect("relabelled diagram");
    // map old edge / source indices to positions in the sorted lists, taking
    // twins in order
    let mut used_e = vec![false; edges.len()];
    let edge_map: Vec<usize> = edges
        .iter()
        .map(|e| {
            let j = (0..edges.len()).find(|&j| !used_e[j] && relabelled.edges[j] == *e).unwrap();
            used_e[j] = true;
            j
        })
        .collect();
    let mut used_s = vec![false; sources.len()];
    let source_map: Vec<usize> = sources
        .iter()
        .map(|s| {
            let j = (0..sources.len()).find(|&j| !used_s[j] && relabelled.sources[j] == *s).unwrap();
            used_s[j] = true;
            j
        })
        .collect();
    let labels = marking
        .labels
        .iter()
        .map(|el| match *el {
            Elem::Floor(v) => Elem::Floor(perm[v]),
            Elem::Edge(i) => Elem::Edge(edge_map[i]),
            Elem::Source(k) => Elem::Source(source_map[k]),
            Elem::SourceEdge(k) => Elem::SourceEdge(source_map[k]),
        })
        .collect();
    let mut roles = marking.roles.clone();
    for (k, &j) in source_map.iter().enumerate() {
        roles[j] = marking.roles[k];
    }
    (relabelled, Marking { labels, roles, n: marking.n })
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Exhaustive search for an equivalence between two marked diagrams: a floor
/// bijection with compatible bijections of edges and sources carrying the labels
/// of `A_0` and the tag sets onto each other.
pub fn brute_force_equivalent(d1: &FloorDiagram, m1: &Marking, d2: &FloorDiagram, m2: &Marking) -> bool {
    let f = d1.floors.len();
    if f != d2.floors.len() || d1.edges.len() != d2.edges.len() || d1.sources.len() != d2.sources.len() {
        return false;
    }
    for phi in permutations(f) {
        if (0..f).any(|v| d1.floors[v] != d2.floors[phi[v]]) {
            continue;
        }
        let edge_maps = bijections(d1.edges.len(), |i, j| {
            let (a, b) = (d1.edges[i], d2.edges[j]);
            phi[a.tail] == b.tail && phi[a.head] == b.head && a.weight == b.weight
        });
        let source_maps = bijections(d1.sources.len(), |i, j| {
            let (a, b) = (d1.sources[i], d2.sources[j]);
            phi[a.floor] == b.floor && a.weight == b.weight && m1.roles[i] == m2.roles[j]
        });
        for em in &edge_maps {
            for sm in &source_maps {
                let image = |el: Elem| match el {
                    Elem::Floor(v) => Elem::Floor(phi[v]),
                    Elem::Edge(i) => Elem::Edge(em[i]),
                    Elem::Source(k) => Elem::Source(sm[k]),
                    Elem::SourceEdge(k) => Elem::SourceEdge(sm[k]),
                };
                if m1.labels.iter().zip(&m2.labels).all(|(&a, &b)| image(a) == b) {
                    return true;
                }
            }
        }
    }
    false
}

fn bijections(n: usize, ok: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        ok: &dyn Fn(usize, usize) -> bool,
        cur: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == n {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !used[j] && ok(i, j) {
                used[j] = true;
                cur.push(j);
                rec(n, ok, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(n, &ok, &mut cur, &mut used, &mut out);
    out
}

/// Canonical marking classes against exhaustive isomorphism search: the concrete
/// markings of every diagram of the request, together with all their floor
/// relabellings, are compared pairwise.
pub fn canonical_form_oracle(dd: i64, genus: i64, ty: &MarkingType) -> Check {
    let pool = ty.source_pool();
    let alpha_labels = ty.standard_alpha_labels();
    let mut pairs = 0u64;
    for diagram in diagrams::enumerate_diagrams_with_sources(dd, genus, Some(&pool)) {
        let mut items: Vec<(FloorDiagram, Marking)> = Vec::new();
        diagrams::for_each_marking(&diagram, ty, &alpha_labels, &mut |m| {
            items.push((diagram.clone(), m.clone()));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
        let base = items.clone();
        for (d, m) in &base {
            for perm in permutations(d.floors.len()) {
                items.push(relabel(d, m, &perm));
            }
        }
        let keys: Vec<Vec<u8>> = items.iter().map(|(d, m)| diagrams::canonical_class(d, m)).collect();
        for i in 0..items.len() {
            for j in i..items.len() {
                let brute = brute_force_equivalent(&items[i].0, &items[i].1, &items[j].0, &items[j].1);
                if brute != (keys[i] == keys[j]) {
                    return Err(format!(
                        "{:?} {:?} vs {:?} {:?}: isomorphic = {brute}",
                        items[i].0, items[i].1, items[j].0, items[j].1
                    ));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs of marked diagrams"))
}

/// `Σ f(Γ)/σ(Γ)` over graphs up to isomorphism against `Σ f/Π n_t!` over labelled
/// graphs, on graphs with at most `max_vertices` vertices; `f` is the complex weight
/// times a vertex-dependent factor (so that distinct decorations are told apart).
/// Also checks `σ(Γ)` against a brute-force automorphism count.
pub fn sigma_consistency(target: &GraphTarget, max_vertices: usize) -> Check {
    let weight = |shape: &GraphShape| -> Result<Int, String> {
        let mut w = graphs::complex_weight(shape).map_err(|e| e.to_string())?;
        for (i, v) in shape.vertices.iter().enumerate() {
            // vertex-dependent factor, invariant under relabelling
            w *= 1 + v.dd as Int + 3 * v.beta1 as Int + 5 * v.genus as Int + shape.degree(i) as Int;
        }
        Ok(w)
    };
    let shapes = graphs::enumerate_shapes(target).map_err(|e| e.to_string())?;
    let labelled = graphs::enumerate_labelled_shapes(target).map_err(|e| e.to_string())?;
    let mut lhs_num: Vec<(Int, Int)> = Vec::new();
    let mut count = 0;
    for s in shapes.iter().filter(|s| s.vertices.len() <= max_vertices) {
        let brute = graphs::automorphisms(s).len() as u64;
        if brute != s.sigma {
            return Err(format!("σ = {} but {brute} automorphisms for {}", s.sigma, s.label()));
        }
        lhs_num.push((weight(s)?, s.sigma as Int));
        count += 1;
    }
    let mut rhs_num: Vec<(Int, Int)> = Vec::new();
    for (s, n) in labelled.iter().filter(|(s, _)| s.vertices.len() <= max_vertices) {
        rhs_num.push((weight(s)?, *n as Int));
    }
    let lhs = fraction_sum(&lhs_num);
    let rhs = fraction_sum(&rhs_num);
    if lhs != rhs {
        return Err(format!("unlabelled sum {lhs:?} ≠ labelled sum {rhs:?}"));
    }
    Ok(format!("{count} graphs, {} labelled graphs", rhs_num.len()))
}

fn gcd(a: Int, b: Int) -> Int {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Exact `Σ n_i/d_i` as a reduced fraction.
fn fraction_sum(terms: &[(Int, Int)]) -> (Int, Int) {
    let (mut n, mut d) = (0, 1);
    for &(a, b) in terms {
        n = n * b + a * d;
        d *= b;
        let g = gcd(n, d).max(1);
        n /= g;
        d /= g;
    }
    (n, d)
}

/// Every query `FW_{X̃_{2κ}(κ)}` with `α = 0`, `1 ≤ dd ≤ max_degree`, `κ ≤ 3`, a class
/// invariant under the `κ` exchanges, tangencies of weight at most two and
/// `r ≥ |β^ℜ| + 2`: the setting of the vanishing lemma.
pub fn vanishing_queries(max_degree: i64) -> Vec<RealQuery> {
    let mut out = Vec::new();
    for dd in 1..=max_degree {
        for kappa in 0..=3usize {
            let mut classes: Vec<Vec<i64>> = vec![Vec::new()];
            for _ in 0..kappa {
                classes = classes
                    .into_iter()
                    .flat_map(|c| {
                        (0..=dd).map(move |m| {
                            let mut c = c.clone();
                            c.extend([m, m]);
                            c
                        })
                    })
                    .collect();
            }
            for mu in classes {
                let de = 2 * dd - mu.iter().sum::<i64>();
                if de < 0 {
                    continue;
                }
                for (re, im) in tangency_splits(de as u64) {
                    let probe = RealQuery::new(dd, mu.clone(), kappa, 0, re.clone(), im.clone());
                    let zeta = probe.zeta();
                    for s in 0..=(zeta.max(0) / 2) as usize {
                        let q = RealQuery::new(dd, mu.clone(), kappa, s, re.clone(), im.clone());
                        if q.r() >= re.size() as i64 + 2 {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Pairs `(β^ℜ, β^ℑ)` with entries of weight one and two and `I β^ℜ + 2 I β^ℑ = de`.
fn tangency_splits(de: u64) -> Vec<(MultiSeq, MultiSeq)> {
    let mut out = Vec::new();
    for i1 in 0..=de / 2 {
        for i2 in 0..=(de / 2 - i1) / 2 {
            let rest = de - 2 * i1 - 4 * i2;
            for r2 in 0..=rest / 2 {
                let r1 = rest - 2 * r2;
                out.push((MultiSeq::from_dense(&[r1, r2]), MultiSeq::from_dense(&[i1, i2])));
            }
        }
    }
    out
}

/// The class `2c_1(X_7)` as a graph target.
pub fn x7_target(genus: i64) -> GraphTarget {
    GraphTarget::new(GraphSurface::X7, 6, vec![2; 7], genus).unwrap()
}
