//! Absolute Gromov–Witten and Welschinger invariants of Del Pezzo surfaces `X_6`,
//! `X_7` and `X_8`, obtained from relative invariants of `X̃_n` (and of `X̃_{8,1}`)
//! through degeneration formulas.

pub mod graphs;
pub mod provider;
pub mod x6;
pub mod x7;
pub mod x8;

use std::collections::HashMap;
use std::sync::Arc;

use crate::num::Int;
use crate::relative_complex::{ComplexEngine, Stats};
use crate::relative_real::RealEngine;

pub use provider::Provider;

/// A labelled summand of an invariant (one value of `k`, one graph, …).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    /// Human readable description of the summand.
    pub label: String,
    /// Its value.
    pub value: Int,
}

/// An invariant together with its decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// The invariant.
    pub value: Int,
    /// The nonzero summands; their sum is `value`.
    pub terms: Vec<Term>,
}

impl Evaluation {
    /// Build from summands, dropping those that vanish.
    pub fn from_terms(mut terms: Vec<Term>) -> crate::Result<Self> {
        terms.retain(|t| t.value != 0);
        let mut value: Int = 0;
        for t in &terms {
            value = crate::num::add(value, t.value)?;
        }
        Ok(Evaluation { value, terms })
    }
}

/// Shared state of the absolute computations: memoizing engines for relative
/// invariants and an optional provider of `X̃_{8,1}` values.
#[derive(Debug, Default)]
pub struct Engine {
    /// Complex relative invariants.
    pub complex: ComplexEngine,
    /// Real relative invariants.
    pub real: RealEngine,
    /// Table of `X̃_{8,1}` values.
    pub provider: Option<Provider>,
    /// Graphs already enumerated, by target.
    shapes: HashMap<graphs::GraphTarget, Arc<Vec<graphs::GraphShape>>>,
}

impl Engine {
    /// Engine without provider.
    pub fn new() -> Self {
        Self::default()
    }

    /// Engine with a provider table.
    pub fn with_provider(provider: Provider) -> Self {
        Engine { provider: Some(provider), ..Self::default() }
    }

    /// The graphs of a target (see [`graphs::enumerate_shapes`]), enumerated once
    /// per engine.
    pub fn shapes(&mut self, target: &graphs::GraphTarget) -> crate::Result<Arc<Vec<graphs::GraphShape>>> {
        if let Some(shapes) = self.shapes.get(target) {
            return Ok(Arc::clone(shapes));
        }
        let shapes = Arc::new(graphs::enumerate_shapes(target)?);
        self.shapes.insert(target.clone(), Arc::clone(&shapes));
        Ok(shapes)
    }

    /// Aggregated counters of both engines.
    pub fn stats(&self) -> Stats {
        let (a, b) = (&self.complex.stats, &self.real.stats);
        Stats {
            diagrams: a.diagrams + b.diagrams,
            markings: a.markings + b.markings,
            memo_hits: a.memo_hits + b.memo_hits,
            memo_misses: a.memo_misses + b.memo_misses,
        }
    }
}
