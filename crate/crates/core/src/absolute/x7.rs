//! The surface `X_7`: invariants from relative invariants of `X̃_8` through sums
//! over decorated graphs.

use super::graphs::{self, GraphShape, GraphSurface, GraphTarget, Vertex};
use super::{Engine, Evaluation, Term};
use crate::error::{Error, Result};
use crate::homology::MultiSeq;
use crate::num::{self, Int};
use crate::relative_complex::RelativeQuery;
use crate::relative_real::{RealQuery, Variant};

/// `GW^{0,β_v}_{X̃_8}(d_v, g_v)`.
pub(crate) fn vertex_gw(engine: &mut Engine, v: &Vertex) -> Result<Int> {
    let q = RelativeQuery::new(v.dd, v.mu[..8].to_vec(), v.genus, MultiSeq::zero(), v.beta());
    engine.complex.gw(&q)
}

/// `μ^ℂ(Γ, P_Γ)` summed over the partitions `P_Γ`, as a numerator over `σ(Γ)`.
pub(crate) fn graph_numerator(
    engine: &mut Engine,
    shape: &GraphShape,
    vertex_value: &mut dyn FnMut(&mut Engine, &Vertex) -> Result<Int>,
) -> Result<Int> {
    let mut acc = graphs::complex_weight(shape)?;
    for v in &shape.vertices {
        if acc == 0 {
            break;
        }
        acc = num::mul(acc, vertex_value(engine, v)?)?;
    }
    Ok(acc)
}

/// Sum `Σ_Γ numerator(Γ)/σ(Γ)` as terms; each term must be integral.
pub(crate) fn graph_terms(
    engine: &mut Engine,
    shapes: &[GraphShape],
    vertex_value: &mut dyn FnMut(&mut Engine, &Vertex) -> Result<Int>,
) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    for shape in shapes {
        let numerator = graph_numerator(engine, shape, vertex_value)?;
        if numerator == 0 {
            continue;
        }
        let value = num::exact_div(numerator, shape.sigma as Int)?;
        terms.push(Term { label: shape.label(), value });
    }
    Ok(terms)
}

/// `GW_{X_7}(d, g)` for `d = dd·D − Σ_{i≤7} mu_i E_i`.
pub fn gw_x7(engine: &mut Engine, dd: i64, mu: &[i64], genus: i64) -> Result<Evaluation> {
    let target = GraphTarget::new(GraphSurface::X7, dd, mu.to_vec(), genus)?;
    let shapes = engine.shapes(&target)?;
    let terms = graph_terms(engine, &shapes, &mut |e, v| vertex_gw(e, v))?;
    Evaluation::from_terms(terms)
}

/// The eight Welschinger invariants of `X_7` given by graph sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X7Structure {
    /// `W_{X_7(κ)}`, `κ ≤ 3`; both points of the second component are real.
    Kappa(usize),
    /// `W_{X_7(κ+1)}`, `κ ≤ 2`; the two points are conjugated.
    KappaPlusOne(usize),
    /// `W_{X_7^-(4), ℝP², ℝX_7^-(4)}`, computed with the given `ε`.
    MinusTotal(u8),
    /// `W_{X_7^+(4), L_{2ε}, ℝX_7^+(4)}`.
    PlusTotal(u8),
    /// `W_{X_7^-(4), L_1, L_1}` through single vertices with `ν_{s,1}`.
    MinusRp2,
    /// The second displayed formula with left-hand side `W_{X_7^-(4), L_1, L_1}`
    /// (single vertices with `β^ℜ_{Γ,2} = 0` and `ν_{s,0}`); its left-hand side is
    /// ambiguous as printed.
    MinusRp2Alt,
    /// `W_{X_7^+(4), L_0, L_0}`.
    PlusL0,
    /// `W_{X_7^+(4), L_2, L_2}`.
    PlusL2,
}

impl X7Structure {
    /// Name used on the command line.
    pub fn name(&self) -> String {
        match self {
            X7Structure::Kappa(k) => format!("kappa={k}"),
            X7Structure::KappaPlusOne(k) => format!("kappa+1={k}"),
            X7Structure::MinusTotal(e) => format!("minus-total={e}"),
            X7Structure::PlusTotal(e) => format!("plus-total={e}"),
            X7Structure::MinusRp2 => "minus-rp2".into(),
            X7Structure::MinusRp2Alt => "minus-rp2-alt".into(),
            X7Structure::PlusL0 => "plus-l0".into(),
            X7Structure::PlusL2 => "plus-l2".into(),
        }
    }

    /// Parse [`X7Structure::name`].
    pub fn parse(text: &str) -> Result<Self> {
        let (head, arg) = match text.split_once('=') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::Parse(format!("structure {text:?} needs a value")))?
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad structure value in {text:?}")))
        };
        let s = match head {
            "kappa" => X7Structure::Kappa(num(arg)?),
            "kappa+1" => X7Structure::KappaPlusOne(num(arg)?),
            "minus-total" => X7Structure::MinusTotal(num(arg)? as u8),
            "plus-total" => X7Structure::PlusTotal(num(arg)? as u8),
            "minus-rp2" => X7Structure::MinusRp2,
            "minus-rp2-alt" => X7Structure::MinusRp2Alt,
            "plus-l0" => X7Structure::PlusL0,
            "plus-l2" => X7Structure::PlusL2,
            _ => return Err(Error::Parse(format!("unknown X_7 structure {text:?}"))),
        };
        Ok(s)
    }

    /// `(κ, ε)`: the real structure of `X̃_6` and whether the two special points of
    /// the second component are conjugated.
    fn degeneration(&self) -> Result<(usize, u8)> {
        let out = match *self {
            X7Structure::Kappa(k) if k <= 3 => (k, 0),
            X7Structure::KappaPlusOne(k) if k <= 2 => (k, 1),
            X7Structure::Kappa(_) | X7Structure::KappaPlusOne(_) => {
                return Err(Error::Domain(format!("{} is out of range", self.name())))
            }
            X7Structure::MinusTotal(e) | X7Structure::PlusTotal(e) if e > 1 => {
                return Err(Error::Domain("epsilon is 0 or 1".into()))
            }
            _ => (3, 1),
        };
        Ok(out)
    }
}

/// Apply `τ^ε_κ` to the coefficients of a vertex class: exchange `Ẽ_{2i−1}` and
/// `Ẽ_{2i}` for `i ≤ κ`, and `Ẽ_7`, `Ẽ_8` when `ε = 1`.
pub fn tau_class(mu: &[i64], kappa: usize, eps: u8) -> Vec<i64> {
    let mut out = mu.to_vec();
    for i in 0..kappa {
        out.swap(2 * i, 2 * i + 1);
    }
    if eps == 1 {
        out.swap(6, 7);
    }
    out
}

/// The class `d_v^ε` fed to `FW_{X̃_8(κ+ε)}`: for `ε = 1` the coefficients of
/// `Ẽ_{2κ+1}, Ẽ_{2κ+2}` are exchanged with those of `Ẽ_7, Ẽ_8`, so that the
/// conjugated pairs come first.
pub fn shifted_class(mu: &[i64], kappa: usize, eps: u8) -> Vec<i64> {
    let mut out = mu.to_vec();
    if eps == 1 && 2 * kappa + 1 < 7 {
        out.swap(2 * kappa, 6);
        out.swap(2 * kappa + 1, 7);
    }
    out
}

/// A graph with an involution `τ` and the real data of its fixed vertices.
#[derive(Debug, Clone)]
pub struct RealGraphTerm {
    /// The underlying graph.
    pub shape: GraphShape,
    /// The involution on vertices.
    pub tau: Vec<usize>,
    /// For each vertex fixed by `τ`: `(β^ℜ_v, β^ℑ_v, s_v)`.
    pub fixed: Vec<(usize, MultiSeq, MultiSeq, usize)>,
    /// Contribution, before division by `σ(Γ)`.
    pub value: Int,
}

/// Data of one involution on a graph, independent of the real decompositions.
struct Involution<'a> {
    shape: &'a GraphShape,
    tau: Vec<usize>,
    fixed: Vec<usize>,
    /// Representatives `v < τ(v)` of exchanged pairs.
    pairs: Vec<usize>,
    k_re: i64,
    k_im: i64,
}

impl<'a> Involution<'a> {
    fn new(shape: &'a GraphShape, tau: Vec<usize>) -> Self {
        let m = tau.len();
        let fixed: Vec<usize> = (0..m).filter(|&v| tau[v] == v).collect();
        let pairs: Vec<usize> = (0..m).filter(|&v| tau[v] > v).collect();
        let mut k_re = 0;
        let mut moved = 0;
        for i in 0..m {
            for j in i..m {
                let l = if i == j { shape.lambda[i][i] as i64 / 2 } else { shape.lambda[i][j] as i64 };
                if l == 0 {
                    continue;
                }
                let (a, b) = (tau[i].min(tau[j]), tau[i].max(tau[j]));
                if (a, b) == (i, j) {
                    k_re += l;
                } else {
                    moved += l;
                }
            }
        }
        Involution { shape, tau, fixed, pairs, k_re, k_im: moved / 2 }
    }

    /// `k_v^{°,ℑ}` for a fixed vertex.
    fn k_im_at(&self, v: usize) -> i64 {
        let moved: i64 = (0..self.tau.len())
            .filter(|&w| self.tau[w] != w)
            .map(|w| self.shape.lambda[v][w] as i64)
            .sum();
        moved / 2
    }

    /// `C(β^ℜ_{v,1}; λ to fixed vertices) C(β^ℑ_{v,1}; λ to exchanged pairs)`.
    fn fixed_multinomials(&self, v: usize, re1: i64, im1: i64) -> Result<Int> {
        let to_fixed: Vec<i64> = self.fixed.iter().map(|&w| self.shape.lambda[v][w] as i64).collect();
        let to_pairs: Vec<i64> = self.pairs.iter().map(|&w| self.shape.lambda[v][w] as i64).collect();
        num::mul(num::multinom(re1, &to_fixed)?, num::multinom(im1, &to_pairs)?)
    }
}

/// Involutions of `shape` compatible with `τ^ε_κ` on the decorations.
fn involutions(shape: &GraphShape, kappa: usize, eps: u8) -> Vec<Vec<usize>> {
    let m = shape.vertices.len();
    let mut out = Vec::new();
    let mut tau = vec![usize::MAX; m];
    fn rec(shape: &GraphShape, kappa: usize, eps: u8, tau: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let m = tau.len();
        let Some(i) = (0..m).find(|&i| tau[i] == usize::MAX) else {
            // edges must be preserved
            for a in 0..m {
                for b in 0..m {
                    if shape.lambda[a][b] != shape.lambda[tau[a]][tau[b]] {
                        return;
                    }
                }
            }
            out.push(tau.clone());
            return;
        };
        let vi = &shape.vertices[i];
        let image = tau_class(&vi.mu, kappa, eps);
        for j in i..m {
            if tau[j] != usize::MAX {
                continue;
            }
            let vj = &shape.vertices[j];
            if vj.dd != vi.dd || vj.mu != image || vj.genus != vi.genus || vj.beta1 != vi.beta1 || vj.beta2 != vi.beta2 {
                continue;
            }
            tau[i] = j;
            tau[j] = i;
            rec(shape, kappa, eps, tau, out);
            tau[i] = usize::MAX;
            tau[j] = usize::MAX;
        }
    }
    rec(shape, kappa, eps, &mut tau, &mut out);
    out
}

/// Decompositions `β = β^ℜ + 2β^ℑ` of a profile supported on `{1, 2}`, as
/// `(re1, re2, im1, im2)`.
fn decompositions(beta1: u64, beta2: u64) -> Vec<(u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for im1 in 0..=beta1 / 2 {
        for im2 in 0..=beta2 / 2 {
            out.push((beta1 - 2 * im1, beta2 - 2 * im2, im1, im2));
        }
    }
    out
}

/// How fixed vertices are weighted, per family of formulas.
#[derive(Clone, Copy)]
enum FixedWeight {
    /// `FW_{X̃_8(κ+ε)}(d_v^ε, s_v)`.
    Plain { kappa: usize, eps: u8 },
    /// `FW_{X̃_8(4),ε}(d_v, s_v)`.
    Sided(u8),
}

/// Per-fixed-vertex choice: decomposition and `s_v`.
#[derive(Clone, Copy)]
struct Choice {
    re1: u64,
    re2: u64,
    im1: u64,
    im2: u64,
    s: i64,
}

/// `W_{X_7}` of the requested structure for `d = dd·D − Σ_{i≤7} mu_i E_i`, with
/// `r + 2s = c_1·d − 1`.
pub fn w_x7(engine: &mut Engine, structure: X7Structure, dd: i64, mu: &[i64], s: usize) -> Result<Evaluation> {
    Ok(w_x7_terms(engine, structure, dd, mu, s)?.0)
}

/// As [`w_x7`], also returning the contributing real graphs.
pub fn w_x7_terms(
    engine: &mut Engine,
    structure: X7Structure,
    dd: i64,
    mu: &[i64],
    s: usize,
) -> Result<(Evaluation, Vec<RealGraphTerm>)> {
    let target = GraphTarget::new(GraphSurface::X7, dd, mu.to_vec(), 0)?;
    let zeta = target.zeta();
    let s = s as i64;
    if 2 * s > zeta {
        return Err(Error::Domain(format!("s = {s} exceeds (c1.d - 1)/2")));
    }
    let r = zeta - 2 * s;
    let (kappa, eps) = structure.degeneration()?;
    let shapes = engine.shapes(&target)?;
    let mut terms = Vec::new();
    let mut real_terms = Vec::new();
    for shape in shapes.iter() {
        match structure {
            X7Structure::MinusRp2 | X7Structure::MinusRp2Alt | X7Structure::PlusL0 | X7Structure::PlusL2 => {
                single_vertex_term(engine, structure, shape, s, &mut terms, &mut real_terms)?;
                continue;
            }
            _ => {}
        }
        let weight = match structure {
            X7Structure::Kappa(_) | X7Structure::KappaPlusOne(_) => FixedWeight::Plain { kappa, eps },
            X7Structure::MinusTotal(e) => FixedWeight::Sided(e),
            X7Structure::PlusTotal(e) => FixedWeight::Sided(e),
            _ => unreachable!(),
        };
        for tau in involutions(shape, kappa, eps) {
            let inv = Involution::new(shape, tau);
            let mut total: Int = 0;
            let mut fixed_terms = Vec::new();
            let mut choices: Vec<Choice> = Vec::new();
            each_choice(&inv, 0, &mut choices, &mut |choices| {
                let value = real_graph_value(engine, &inv, choices, eps, weight, kappa, r, s)?;
                if value != 0 {
                    total = num::add(total, value)?;
                    fixed_terms.push((choices.to_vec(), value));
                }
                Ok(())
            })?;
            if total == 0 {
                continue;
            }
            let value = num::exact_div(total, shape.sigma as Int)?;
            let mut label = shape.label();
            if inv.tau.iter().enumerate().any(|(i, &t)| t != i) {
                label.push_str(&format!(" tau {:?}", inv.tau));
            }
            terms.push(Term { label, value });
            for (choices, v) in fixed_terms {
                let fixed = inv
                    .fixed
                    .iter()
                    .zip(&choices)
                    .map(|(&idx, c)| {
                        (
                            idx,
                            MultiSeq::from_dense(&[c.re1, c.re2]),
                            MultiSeq::from_dense(&[c.im1, c.im2]),
                            c.s as usize,
                        )
                    })
                    .collect();
                real_terms.push(RealGraphTerm { shape: shape.clone(), tau: inv.tau.clone(), fixed, value: v });
            }
        }
    }
    Ok((Evaluation::from_terms(terms)?, real_terms))
}

fn each_choice(
    inv: &Involution,
    i: usize,
    choices: &mut Vec<Choice>,
    f: &mut dyn FnMut(&[Choice]) -> Result<()>,
) -> Result<()> {
    if i == inv.fixed.len() {
        return f(choices);
    }
    let v = &inv.shape.vertices[inv.fixed[i]];
    let points = v.points();
    for (re1, re2, im1, im2) in decompositions(v.beta1, v.beta2) {
        for sv in 0..=points / 2 {
            choices.push(Choice { re1, re2, im1, im2, s: sv });
            each_choice(inv, i + 1, choices, f)?;
            choices.pop();
        }
    }
    Ok(())
}

/// Contribution of one involution with chosen fixed-vertex data, times the number
/// of partitions, before division by `σ(Γ)`.
#[allow(clippy::too_many_arguments)]
fn real_graph_value(
    engine: &mut Engine,
    inv: &Involution,
    choices: &[Choice],
    eps: u8,
    weight: FixedWeight,
    kappa: usize,
    r: i64,
    s: i64,
) -> Result<Int> {
    let shape = inv.shape;
    let fixed_points: Vec<(i64, i64)> = inv
        .fixed
        .iter()
        .zip(choices)
        .map(|(&v, c)| (shape.vertices[v].points() - 2 * c.s, c.s))
        .collect();
    if fixed_points.iter().any(|&(rv, _)| rv < 0) {
        return Ok(0);
    }
    let pair_points: Vec<i64> = inv.pairs.iter().map(|&v| shape.vertices[v].points()).collect();
    let partitions = graphs::real_partitions(r, s, &fixed_points, &pair_points)?;
    if partitions == 0 {
        return Ok(0);
    }
    let re1: i64 = choices.iter().map(|c| c.re1 as i64).sum();
    let re2: i64 = choices.iter().map(|c| c.re2 as i64).sum();
    let im1: i64 = choices.iter().map(|c| c.im1 as i64).sum::<i64>()
        + inv.pairs.iter().map(|&v| shape.vertices[v].beta1 as i64).sum::<i64>();
    let im2: i64 = choices.iter().map(|c| c.im2 as i64).sum::<i64>()
        + inv.pairs.iter().map(|&v| shape.vertices[v].beta2 as i64).sum::<i64>();
    let kcc = shape.k_circ_circ();
    let prefactor = if eps == 0 {
        // ℝSS⁰_{7,m}: β^ℜ_{Γ,2} = 0
        if re2 != 0 {
            return Ok(0);
        }
        let mut sum: Int = 0;
        for s_prime in 0..=kcc.max(-1) / 2 {
            let r_prime = kcc - 2 * s_prime;
            let t = num::mul(
                num::binom(re1 - 2 * inv.k_re, r_prime)?,
                num::binom(im1 - 2 * inv.k_im, s_prime)?,
            )?;
            sum = num::add(sum, t)?;
        }
        if kcc < 0 {
            sum = 0;
        }
        num::mul(num::mul(num::sign(inv.k_im + im2), num::pow(2, im2 as u64)?)?, sum)?
    } else {
        // ℝSS¹_{7,m}: β^ℜ_Γ = 2k°^ℜ u_1 and k°° = β^ℑ_{Γ,1} − 2k°^ℑ
        if re2 != 0 || re1 != 2 * inv.k_re || kcc != im1 - 2 * inv.k_im {
            return Ok(0);
        }
        let e = im1 + im2 - 2 * inv.k_im;
        if e < 0 {
            return Ok(0);
        }
        num::mul(num::sign(inv.k_im), num::pow(-2, e as u64)?)?
    };
    if prefactor == 0 {
        return Ok(0);
    }
    let mut acc = num::mul(prefactor, partitions)?;
    for (&v, c) in inv.fixed.iter().zip(choices) {
        let vertex = &shape.vertices[v];
        let mut factor = num::mul(
            num::pow(2, inv.k_im_at(v) as u64)?,
            inv.fixed_multinomials(v, c.re1 as i64, c.im1 as i64)?,
        )?;
        if factor == 0 {
            return Ok(0);
        }
        let beta_re = MultiSeq::from_dense(&[c.re1, c.re2]);
        let beta_im = MultiSeq::from_dense(&[c.im1, c.im2]);
        let fw = match weight {
            FixedWeight::Plain { kappa, eps } => {
                let q = RealQuery::new(
                    vertex.dd,
                    shifted_class(&vertex.mu, kappa, eps),
                    kappa + eps as usize,
                    c.s as usize,
                    beta_re,
                    beta_im,
                );
                engine.real.fw(&q, Variant::Plain)?
            }
            FixedWeight::Sided(e) => {
                let q = RealQuery::new(vertex.dd, vertex.mu.clone(), 4, c.s as usize, beta_re, beta_im);
                engine.real.fw(&q, Variant::Sided(e))?
            }
        };
        factor = num::mul(factor, fw)?;
        acc = num::mul(acc, factor)?;
        if acc == 0 {
            return Ok(0);
        }
    }
    let _ = kappa;
    for &v in &inv.pairs {
        let vertex = &shape.vertices[v];
        let partner = &shape.vertices[inv.tau[v]];
        let gw = vertex_gw(engine, vertex)?;
        let factor = num::mul(
            num::mul(num::sign(vertex.dot(partner)), graphs::edge_multinomial(shape, v)?)?,
            gw,
        )?;
        acc = num::mul(acc, factor)?;
        if acc == 0 {
            return Ok(0);
        }
    }
    Ok(acc)
}

/// Formulas through single vertices (`k° = β_{Γ,1} = 0`) weighted by `ν`.
fn single_vertex_term(
    engine: &mut Engine,
    structure: X7Structure,
    shape: &GraphShape,
    s: i64,
    terms: &mut Vec<Term>,
    real_terms: &mut Vec<RealGraphTerm>,
) -> Result<()> {
    if shape.vertices.len() != 1 || shape.beta1() != 0 || shape.k_circ_circ() != 0 {
        return Ok(());
    }
    let v = &shape.vertices[0];
    if tau_class(&v.mu, 3, 1) != v.mu {
        return Ok(());
    }
    let (eps, allow_real_pairs) = match structure {
        X7Structure::MinusRp2 => (1, true),
        X7Structure::MinusRp2Alt => (0, false),
        X7Structure::PlusL0 => (0, true),
        X7Structure::PlusL2 => (1, false),
        _ => unreachable!(),
    };
    let mut total: Int = 0;
    for im2 in 0..=v.beta2 / 2 {
        let re2 = v.beta2 - 2 * im2;
        if re2 != 0 && !allow_real_pairs {
            continue;
        }
        let beta_re = MultiSeq::from_dense(&[0, re2]);
        let beta_im = MultiSeq::from_dense(&[0, im2]);
        let q = RealQuery::new(v.dd, v.mu.clone(), 4, s as usize, beta_re.clone(), beta_im.clone());
        let nu = engine.real.fw(&q, Variant::SidedSided(eps))?;
        let weight = if allow_real_pairs { num::pow(2, re2 + im2)? } else { num::pow(-2, im2)? };
        let value = num::mul(weight, nu)?;
        if value == 0 {
            continue;
        }
        total = num::add(total, value)?;
        real_terms.push(RealGraphTerm {
            shape: shape.clone(),
            tau: vec![0],
            fixed: vec![(0, beta_re, beta_im, s as usize)],
            value,
        });
    }
    if total != 0 {
        terms.push(Term { label: shape.label(), value: total });
    }
    Ok(())
}
