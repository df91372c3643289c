//! The surface `X_8`: invariants from invariants of `X̃_{8,1}` through sums over
//! decorated graphs. Vertex classes through the ninth point with multiplicity at
//! least two are looked up in a [`Provider`](super::Provider) table.

use std::collections::BTreeSet;

use super::graphs::{self, GraphShape, GraphSurface, GraphTarget, Vertex};
use super::provider::{ComplexKey, RealKey, RealTag};
use super::x7::{self, graph_terms, shifted_class, tau_class};
use super::{Engine, Evaluation, Term};
use crate::error::{Error, Result};
use crate::homology::MultiSeq;
use crate::num::{self, Int};
use crate::relative_real::{RealQuery, Variant};

/// Keys demanded from the provider but absent from it.
type Missing = BTreeSet<String>;

/// Multiples `l(D − Ẽ_9)`, `l ≥ 2`: every such curve is supported on a line
/// through the ninth point, so it cannot pass through two general points.
fn is_vanishing_line_multiple(v: &Vertex) -> bool {
    v.dd >= 2 && v.mu9() == v.dd && v.mu[..8].iter().all(|&m| m == 0) && v.points() >= 2
}

/// `GW^{0,β_v}_{X̃_{8,1}}(d_v, g_v)`.
///
/// A class not meeting `Ẽ_9` is the class of the same curves on `X̃_8`; a class
/// meeting it once is a class of `X̃_8` with the ninth point as an extra point
/// condition. Other classes come from the provider.
fn vertex_gw(engine: &mut Engine, v: &Vertex, missing: &mut Missing) -> Result<Int> {
    if is_vanishing_line_multiple(v) {
        return Ok(0);
    }
    match v.mu9() {
        m if m < 0 => {
            let exceptional = v.dd == 0 && m == -1 && v.mu[..8].iter().all(|&x| x == 0) && v.genus == 0;
            Ok(exceptional as Int)
        }
        0 | 1 => x7::vertex_gw(engine, v),
        _ => {
            let key = ComplexKey::new(v.dd, &v.mu, v.genus, MultiSeq::zero(), v.beta())?;
            lookup(engine.provider.as_ref().and_then(|p| p.complex(&key)), key.to_string(), missing)
        }
    }
}

fn lookup(value: Option<Int>, key: String, missing: &mut Missing) -> Result<Int> {
    match value {
        Some(v) => Ok(v),
        None => {
            missing.insert(key);
            Ok(0)
        }
    }
}

fn finish(terms: Vec<Term>, missing: Missing) -> Result<Evaluation> {
    if !missing.is_empty() {
        return Err(Error::MissingProviderKeys(missing.into_iter().collect()));
    }
    Evaluation::from_terms(terms)
}

/// `GW_{X_8}(d, g)` for `d = dd·D − Σ_{i≤8} mu_i E_i`.
pub fn gw_x8(engine: &mut Engine, dd: i64, mu: &[i64], genus: i64) -> Result<Evaluation> {
    let target = GraphTarget::new(GraphSurface::X8, dd, mu.to_vec(), genus)?;
    let shapes = engine.shapes(&target)?;
    let mut missing = Missing::new();
    let terms = graph_terms(engine, &shapes, &mut |e, v| vertex_gw(e, v, &mut missing))?;
    finish(terms, missing)
}

/// The Welschinger invariants of `X_8` given by graph sums (configurations of
/// real points only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X8Structure {
    /// `W_{X_8(κ)}`, `κ ≤ 3`.
    Kappa(usize),
    /// `W_{X_8(κ+1)}`, `κ ≤ 2`, through the degeneration with conjugated
    /// seventh and eighth points.
    KappaPlusOne(usize),
    /// `W_{X_8^-(4), L_ε}`: `ε = 0` is the component `ℝP²_1`, `ε = 1` is `ℝP²`.
    MinusL(u8),
    /// `W_{X_8^+(4), L_{3ε−1}}`: `ε = 0` is the component `ℝP²_2`, `ε = 1` is `S²`.
    /// Equal to [`X8Structure::MinusL`] with the same `ε`.
    PlusL(u8),
}

impl X8Structure {
    /// Name used on the command line.
    pub fn name(&self) -> String {
        match self {
            X8Structure::Kappa(k) => format!("kappa={k}"),
            X8Structure::KappaPlusOne(k) => format!("kappa+1={k}"),
            X8Structure::MinusL(e) => format!("minus-l={e}"),
            X8Structure::PlusL(e) => format!("plus-l={e}"),
        }
    }

    /// Parse [`X8Structure::name`].
    pub fn parse(text: &str) -> Result<Self> {
        let (head, arg) = text
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("structure {text:?} needs a value")))?;
        let n: usize = arg.parse().map_err(|_| Error::Parse(format!("bad structure value in {text:?}")))?;
        let s = match head {
            "kappa" => X8Structure::Kappa(n),
            "kappa+1" => X8Structure::KappaPlusOne(n),
            "minus-l" => X8Structure::MinusL(n.min(u8::MAX as usize) as u8),
            "plus-l" => X8Structure::PlusL(n.min(u8::MAX as usize) as u8),
            _ => return Err(Error::Parse(format!("unknown X_8 structure {text:?}"))),
        };
        Ok(s)
    }

    /// The eight structures in table order: `κ = 0..3`, then the components of
    /// `X_8^-(4)` and `X_8^+(4)`.
    pub fn all() -> Vec<X8Structure> {
        vec![
            X8Structure::Kappa(0),
            X8Structure::Kappa(1),
            X8Structure::Kappa(2),
            X8Structure::Kappa(3),
            X8Structure::MinusL(0),
            X8Structure::MinusL(1),
            X8Structure::PlusL(0),
            X8Structure::PlusL(1),
        ]
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            X8Structure::Kappa(k) => k <= 3,
            X8Structure::KappaPlusOne(k) => k <= 2,
            X8Structure::MinusL(e) | X8Structure::PlusL(e) => e <= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{} is out of range", self.name())))
        }
    }
}

/// `W_{X̃_{8,1}(κ)}(d_v)` for a class given with its real coefficients order,
/// i.e. conjugated pairs first.
fn vertex_w(engine: &mut Engine, v: &Vertex, mu: &[i64], kappa: usize, missing: &mut Missing) -> Result<Int> {
    if is_vanishing_line_multiple(v) || v.genus != 0 || v.beta2 != 0 {
        return Ok(0);
    }
    match v.mu9() {
        m if m < 0 => Ok(0),
        0 | 1 => {
            let beta_re = MultiSeq::from_dense(&[v.beta1]);
            let q = RealQuery::new(v.dd, mu[..8].to_vec(), kappa, 0, beta_re, MultiSeq::zero());
            engine.real.fw(&q, Variant::Plain)
        }
        _ => {
            let key = RealKey::new(v.dd, mu, RealTag::Kappa(kappa as u8))?;
            lookup(engine.provider.as_ref().and_then(|p| p.real(&key)), key.to_string(), missing)
        }
    }
}

/// `W_{X̃_{8,1}(4), L̄_{2ε−1}}(d_v)`, always from the provider.
fn vertex_w_component(engine: &mut Engine, v: &Vertex, eps: u8, missing: &mut Missing) -> Result<Int> {
    if is_vanishing_line_multiple(v) || v.genus != 0 {
        return Ok(0);
    }
    let key = RealKey::new(v.dd, &v.mu, RealTag::Component(2 * eps as i8 - 1))?;
    lookup(engine.provider.as_ref().and_then(|p| p.real(&key)), key.to_string(), missing)
}

/// `W_{X_8}(d, s)` for `d = dd·D − Σ_{i≤8} mu_i E_i`; only `s = 0` is supported.
pub fn w_x8(engine: &mut Engine, structure: X8Structure, dd: i64, mu: &[i64], s: usize) -> Result<Evaluation> {
    structure.validate()?;
    if s != 0 {
        return Err(Error::Unsupported(
            "Welschinger invariants of X_8 are computed for real configurations only (s = 0)".into(),
        ));
    }
    let target = GraphTarget::new(GraphSurface::X8, dd, mu.to_vec(), 0)?;
    let shapes = engine.shapes(&target)?;
    let mut missing = Missing::new();
    let mut terms = Vec::new();
    for shape in shapes.iter() {
        let value = real_shape_value(engine, structure, shape, &mut missing)?;
        if value != 0 {
            terms.push(Term { label: shape.label(), value });
        }
    }
    finish(terms, missing)
}

/// Contribution of one graph (all partitions, divided by `σ(Γ)`).
fn real_shape_value(
    engine: &mut Engine,
    structure: X8Structure,
    shape: &GraphShape,
    missing: &mut Missing,
) -> Result<Int> {
    if shape.beta2() != 0 {
        return Ok(0);
    }
    let (kappa, eps) = match structure {
        X8Structure::Kappa(k) => (k, 0),
        X8Structure::KappaPlusOne(k) => (k, 1),
        X8Structure::MinusL(_) | X8Structure::PlusL(_) => (3, 1),
    };
    if shape.vertices.iter().any(|v| tau_class(&v.mu, kappa, eps) != v.mu) {
        return Ok(0);
    }
    if eps == 1 && (shape.beta1() != 2 * shape.edge_count() || shape.k_circ_circ() != 0) {
        return Ok(0);
    }
    // With β_{Γ,2} = 0 and no loops or multiple edges, the real weight is the
    // binomial, multinomial and partition count of the complex one.
    let mut acc = graphs::complex_weight(shape)?;
    for v in &shape.vertices {
        if acc == 0 {
            return Ok(0);
        }
        let w = match structure {
            X8Structure::MinusL(e) | X8Structure::PlusL(e) => {
                if shape.vertices.len() != 1 || v.beta1 != 0 {
                    return Ok(0);
                }
                vertex_w_component(engine, v, e, missing)?
            }
            _ => vertex_w(engine, v, &shifted_class(&v.mu, kappa, eps), kappa + eps as usize, missing)?,
        };
        acc = num::mul(acc, w)?;
    }
    num::exact_div(acc, shape.sigma as Int)
}
