//! The cubic surface `X_6`: invariants from relative invariants of `X̃_6` in the
//! classes `d − kE`.

use super::{Engine, Evaluation, Term};
use crate::error::{Error, Result};
use crate::homology::MultiSeq;
use crate::num::{self, Int};
use crate::relative_complex::RelativeQuery;
use crate::relative_real::{RealQuery, Variant};

/// The real structures of `X_6` (and the components of `ℝX_6(4)`) handled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X6Structure {
    /// `W_{X_6(κ)}`, `κ ≤ 3`, through the sum over real tangency types.
    Kappa(usize),
    /// `W_{X_6(κ+1)}`, `κ ≤ 2`, through conjugated pairs of tangency points.
    KappaPlusOne(usize),
    /// `W_{X_6(4), L_{1+ε}, ℝX_6(4)}`.
    SidedReal(u8),
    /// `W_{X_6(4), L_{1+ε}, L_{1+ε}}`.
    SidedSided(u8),
}

impl X6Structure {
    /// Name used on the command line.
    pub fn name(&self) -> String {
        match self {
            X6Structure::Kappa(k) => format!("kappa={k}"),
            X6Structure::KappaPlusOne(k) => format!("kappa+1={k}"),
            X6Structure::SidedReal(e) => format!("sided-real={e}"),
            X6Structure::SidedSided(e) => format!("sided-sided={e}"),
        }
    }

    /// Parse [`X6Structure::name`].
    pub fn parse(text: &str) -> Result<Self> {
        let (head, arg) = text
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("structure {text:?} needs a value")))?;
        let n: usize = arg.parse().map_err(|_| Error::Parse(format!("bad structure value in {text:?}")))?;
        let eps = || u8::try_from(n).map_err(|_| Error::Parse(format!("bad structure value in {text:?}")));
        let s = match head {
            "kappa" => X6Structure::Kappa(n),
            "kappa+1" => X6Structure::KappaPlusOne(n),
            "sided-real" => X6Structure::SidedReal(eps()?),
            "sided-sided" => X6Structure::SidedSided(eps()?),
            _ => return Err(Error::Parse(format!("unknown X_6 structure {text:?}"))),
        };
        Ok(s)
    }
}

/// `(d·D, μ)` of a class `d − kE` on `X̃_6` (`E = 2D − Σ E_i`).
fn shift(dd: i64, mu: &[i64], k: i64) -> (i64, Vec<i64>) {
    (dd - 2 * k, mu.iter().map(|m| m - k).collect())
}

fn check_class(mu: &[i64]) -> Result<()> {
    if mu.len() != 6 {
        return Err(Error::Domain(format!("classes of X_6 have 6 exceptional coefficients, got {}", mu.len())));
    }
    Ok(())
}

/// Largest `k` for which `d − kE` can carry a curve: `(d−kE)·D ≥ 0`.
fn k_max(dd: i64) -> i64 {
    dd / 2
}

/// `GW_{X_6}(d, g) = Σ_k C(d·E+2k, k) GW^{0,(d·E+2k)u_1}_{X̃_6}(d − kE, g)`.
pub fn gw_x6(engine: &mut Engine, dd: i64, mu: &[i64], genus: i64) -> Result<Evaluation> {
    check_class(mu)?;
    if dd < 1 {
        return Err(Error::Domain("d >= 1 is required".into()));
    }
    let de = 2 * dd - mu.iter().sum::<i64>();
    let mut terms = Vec::new();
    for k in 0..=k_max(dd) {
        let tangency = de + 2 * k;
        if tangency < 0 {
            continue;
        }
        let (sd, smu) = shift(dd, mu, k);
        let q = RelativeQuery::new(sd, smu, genus, MultiSeq::zero(), MultiSeq::unit(1, tangency as u64));
        let rel = engine.complex.gw(&q)?;
        let value = num::mul(num::binom(tangency, k)?, rel)?;
        terms.push(Term { label: format!("k={k}: C({tangency},{k})*GW^{{0,{tangency}u1}}({})", crate::homology::format_class_literal(sd, &q.mu)), value });
    }
    Evaluation::from_terms(terms)
}

/// Welschinger invariants of `X_6` with the given real structure, `r + 2s = c_1·d − 1`.
pub fn w_x6(engine: &mut Engine, structure: X6Structure, dd: i64, mu: &[i64], s: usize) -> Result<Evaluation> {
    check_class(mu)?;
    if dd < 1 {
        return Err(Error::Domain("d >= 1 is required".into()));
    }
    let de = 2 * dd - mu.iter().sum::<i64>();
    let c1d = 3 * dd - mu.iter().sum::<i64>();
    if c1d - 1 < 2 * s as i64 {
        return Err(Error::Domain(format!("s = {s} exceeds (c1.d - 1)/2")));
    }
    let mut terms = Vec::new();
    match structure {
        X6Structure::Kappa(kappa) => {
            if kappa > 3 {
                return Err(Error::Domain("kappa <= 3 for this formula".into()));
            }
            for k in 0..=k_max(dd) {
                let tangency = de + 2 * k;
                if tangency < 0 {
                    continue;
                }
                let (sd, smu) = shift(dd, mu, k);
                for im in 0..=tangency / 2 {
                    let re = tangency - 2 * im;
                    let mut coefficient: Int = 0;
                    for s_prime in 0..=k / 2 {
                        let r_prime = k - 2 * s_prime;
                        coefficient = num::add(coefficient, num::mul(num::binom(re, r_prime)?, num::binom(im, s_prime)?)?)?;
                    }
                    if coefficient == 0 {
                        continue;
                    }
                    let q = RealQuery::new(sd, smu.clone(), kappa, s, MultiSeq::unit(1, re as u64), MultiSeq::unit(1, im as u64));
                    let fw = engine.real.fw(&q, Variant::Plain)?;
                    if fw == 0 {
                        continue;
                    }
                    terms.push(Term {
                        label: format!("k={k}, bRe={re}u1, bIm={im}u1"),
                        value: num::mul(coefficient, fw)?,
                    });
                }
            }
        }
        X6Structure::KappaPlusOne(kappa) => {
            if kappa > 2 {
                return Err(Error::Domain("kappa <= 2 for this formula".into()));
            }
            pairs_formula(engine, &mut terms, dd, mu, de, s, kappa, Variant::Plain)?;
        }
        X6Structure::SidedReal(eps) => {
            pairs_formula(engine, &mut terms, dd, mu, de, s, 3, Variant::Sided(eps))?;
        }
        X6Structure::SidedSided(eps) => {
            if de == 0 {
                let q = RealQuery::new(dd, mu.to_vec(), 3, s, MultiSeq::zero(), MultiSeq::zero());
                let value = engine.real.fw(&q, Variant::SidedSided(eps))?;
                terms.push(Term { label: "k=0".into(), value });
            }
        }
    }
    Evaluation::from_terms(terms)
}

/// `Σ_k (−2)^k FW^{0,0,0,k u_1}_{X̃_6(κ)}(d − kE, s)`; only classes with `d·E = 0`
/// contribute.
#[allow(clippy::too_many_arguments)]
fn pairs_formula(
    engine: &mut Engine,
    terms: &mut Vec<Term>,
    dd: i64,
    mu: &[i64],
    de: i64,
    s: usize,
    kappa: usize,
    variant: Variant,
) -> Result<()> {
    if de != 0 {
        return Ok(());
    }
    for k in 0..=k_max(dd) {
        let (sd, smu) = shift(dd, mu, k);
        let q = RealQuery::new(sd, smu, kappa, s, MultiSeq::zero(), MultiSeq::unit(1, k as u64));
        let fw = engine.real.fw(&q, variant)?;
        if fw == 0 {
            continue;
        }
        terms.push(Term { label: format!("k={k}"), value: num::mul(num::pow(-2, k as u64)?, fw)? });
    }
    Ok(())
}
